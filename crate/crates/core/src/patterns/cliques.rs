use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Budget, Embedding, PatternError};
use crate::configurations::IncidenceStructure;

/// One subdivided k-clique in a host, in the vertex order of
/// [`pattern_subdivided_clique`](super::pattern_subdivided_clique).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CliqueCopy {
    pub blacks: Vec<usize>,
    /// One white per black pair, pairs in lexicographic order.
    pub whites: Vec<usize>,
    /// Two lines per pair: through `b_i` and through `b_j`.
    pub lines: Vec<usize>,
}

impl CliqueCopy {
    pub fn embedding(&self) -> Embedding {
        Embedding {
            point_map: self.blacks.iter().chain(&self.whites).copied().collect(),
            line_map: self.lines.clone(),
        }
    }

    pub fn image_key(&self) -> (Vec<usize>, Vec<usize>) {
        self.embedding().image_key()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueCount {
    pub k: usize,
    /// Distinct images `(point set, line set)`.
    pub count: u64,
    /// False when the budget ran out; `count` is then a lower bound.
    pub complete: bool,
    pub nodes: u64,
    /// One copy per image, ordered by image.
    pub witnesses: Vec<CliqueCopy>,
}

/// `(white, line through the smaller black, line through the larger black)`.
type Path = (usize, usize, usize);

fn paths_between(host: &IncidenceStructure) -> HashMap<(usize, usize), Vec<Path>> {
    let mut out: HashMap<(usize, usize), Vec<Path>> = HashMap::new();
    for w in 0..host.n_points {
        let through = &host.point_lines[w];
        for &l1 in through {
            for &l2 in through {
                if l1 == l2 {
                    continue;
                }
                for &p in &host.line_points[l1] {
                    for &r in &host.line_points[l2] {
                        if p < r && p != w && r != w {
                            out.entry((p, r)).or_default().push((w, l1, l2));
                        }
                    }
                }
            }
        }
    }
    out.values_mut().for_each(|v| v.sort_unstable());
    out
}

struct Counter<'a> {
    k: usize,
    paths: &'a HashMap<(usize, usize), Vec<Path>>,
    pairs: Vec<(usize, usize)>,
    budget: Option<u64>,
}

#[derive(Default)]
struct Tally {
    nodes: u64,
    stopped: bool,
    copies: HashMap<(Vec<usize>, Vec<usize>), CliqueCopy>,
}

impl Counter<'_> {
    fn partners(&self, b: usize, after: usize) -> bool {
        self.paths.contains_key(&(after.min(b), after.max(b)))
    }

    /// Extends an increasing tuple of blacks that pairwise have paths.
    fn blacks(&self, blacks: &mut Vec<usize>, candidates: &[usize], tally: &mut Tally) {
        if tally.stopped {
            return;
        }
        if blacks.len() == self.k {
            let mut whites = Vec::with_capacity(self.pairs.len());
            let mut lines = Vec::with_capacity(2 * self.pairs.len());
            self.whites(blacks, 0, &mut whites, &mut lines, tally);
            return;
        }
        for (idx, &c) in candidates.iter().enumerate() {
            let rest: Vec<usize> = candidates[idx + 1..]
                .iter()
                .copied()
                .filter(|&d| self.partners(c, d))
                .collect();
            if rest.len() + blacks.len() + 1 < self.k {
                continue;
            }
            blacks.push(c);
            self.blacks(blacks, &rest, tally);
            blacks.pop();
        }
    }

    fn whites(
        &self,
        blacks: &[usize],
        pair: usize,
        whites: &mut Vec<usize>,
        lines: &mut Vec<usize>,
        tally: &mut Tally,
    ) {
        if tally.stopped {
            return;
        }
        if pair == self.pairs.len() {
            let copy = CliqueCopy {
                blacks: blacks.to_vec(),
                whites: whites.clone(),
                lines: lines.clone(),
            };
            let key = copy.image_key();
            tally
                .copies
                .entry(key)
                .and_modify(|c| {
                    if copy < *c {
                        *c = copy.clone()
                    }
                })
                .or_insert(copy);
            return;
        }
        let (i, j) = self.pairs[pair];
        let (bi, bj) = (blacks[i], blacks[j]);
        for &(w, li, lj) in &self.paths[&(bi, bj)] {
            if self.budget.is_some_and(|b| tally.nodes >= b) {
                tally.stopped = true;
                return;
            }
            tally.nodes += 1;
            if blacks.contains(&w)
                || whites.contains(&w)
                || lines.contains(&li)
                || lines.contains(&lj)
            {
                continue;
            }
            whites.push(w);
            lines.push(li);
            lines.push(lj);
            self.whites(blacks, pair + 1, whites, lines, tally);
            lines.truncate(lines.len() - 2);
            whites.pop();
        }
    }
}

/// Counts subdivided k-cliques by choosing black tuples that pairwise share
/// a two-line path through some white point, then distinct whites and lines
/// per pair. Point images and line images are pairwise distinct.
pub fn count_subdivided_cliques(
    host: &IncidenceStructure,
    k: usize,
    budget: Budget,
) -> Result<CliqueCount, PatternError> {
    if k < 3 {
        return Err(PatternError::Invalid(format!(
            "k must be at least 3, got {k}"
        )));
    }
    let paths = paths_between(host);
    let counter = Counter {
        k,
        paths: &paths,
        pairs: (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .collect(),
        budget: budget.0,
    };
    let eligible: Vec<usize> = (0..host.n_points)
        .filter(|&p| host.point_lines[p].len() >= k - 1)
        .collect();
    let root = |idx: usize| {
        let c = eligible[idx];
        let rest: Vec<usize> = eligible[idx + 1..]
            .iter()
            .copied()
            .filter(|&d| counter.partners(c, d))
            .collect();
        (c, rest)
    };
    let tally = if budget.0.is_none() {
        (0..eligible.len())
            .into_par_iter()
            .map(|idx| {
                let (c, rest) = root(idx);
                let mut t = Tally::default();
                counter.blacks(&mut vec![c], &rest, &mut t);
                t
            })
            .reduce(Tally::default, |mut a, b| {
                a.nodes += b.nodes;
                for (key, copy) in b.copies {
                    a.copies
                        .entry(key)
                        .and_modify(|c| {
                            if copy < *c {
                                *c = copy.clone()
                            }
                        })
                        .or_insert(copy);
                }
                a
            })
    } else {
        let mut t = Tally::default();
        for idx in 0..eligible.len() {
            let (c, rest) = root(idx);
            counter.blacks(&mut vec![c], &rest, &mut t);
            if t.stopped {
                break;
            }
        }
        t
    };
    let mut witnesses: Vec<((Vec<usize>, Vec<usize>), CliqueCopy)> =
        tally.copies.into_iter().collect();
    witnesses.sort_unstable();
    Ok(CliqueCount {
        k,
        count: witnesses.len() as u64,
        complete: !tally.stopped,
        nodes: tally.nodes,
        witnesses: witnesses.into_iter().map(|(_, c)| c).collect(),
    })
}
