use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{Pattern, PatternError};
use crate::configurations::IncidenceStructure;

/// Limit on search nodes (candidate assignments tried); `None` is
/// unlimited and exhaustive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget(pub Option<u64>);

impl Budget {
    pub fn unlimited() -> Self {
        Budget(None)
    }

    pub fn nodes(n: u64) -> Self {
        Budget(Some(n))
    }
}

/// Injective, sort-preserving maps from pattern vertices to host indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Embedding {
    pub point_map: Vec<usize>,
    pub line_map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and that every pattern edge lands on a host
    /// incidence.
    pub fn verify(&self, host: &IncidenceStructure, p: &Pattern) -> Result<(), String> {
        if self.point_map.len() != p.n_points() || self.line_map.len() != p.n_lines() {
            return Err("map sizes differ from the pattern".into());
        }
        if self.point_map.iter().any(|&i| i >= host.n_points)
            || self.line_map.iter().any(|&i| i >= host.n_lines)
        {
            return Err("image index out of range".into());
        }
        if self.point_map.iter().collect::<HashSet<_>>().len() != self.point_map.len()
            || self.line_map.iter().collect::<HashSet<_>>().len() != self.line_map.len()
        {
            return Err("map is not injective".into());
        }
        match p
            .edges
            .iter()
            .find(|&&(a, b)| !host.is_incident(self.point_map[a], self.line_map[b]))
        {
            Some((a, b)) => Err(format!(
                "edge ({}, {}) is not a host incidence",
                p.points[*a], p.lines[*b]
            )),
            None => Ok(()),
        }
    }

    /// The sorted images of the point and line vertices.
    pub fn image_key(&self) -> (Vec<usize>, Vec<usize>) {
        let mut pts = self.point_map.clone();
        let mut lns = self.line_map.clone();
        pts.sort_unstable();
        lns.sort_unstable();
        (pts, lns)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found(Embedding),
    /// Certified by an exhaustive search.
    Absent,
    /// The budget ran out first.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingCount {
    pub count: u64,
    pub modulo_symmetry: bool,
    /// False when the budget ran out; `count` is then a lower bound.
    pub complete: bool,
    pub nodes: u64,
}

/// Vertices are unified: points `0..np`, lines `np..np+nl`.
struct Plan {
    np: usize,
    order: Vec<usize>,
    is_line: Vec<bool>,
    degree: Vec<usize>,
    /// Positions in `order` of already-placed neighbours, per step.
    anchors: Vec<Vec<usize>>,
}

impl Plan {
    fn new(p: &Pattern) -> Plan {
        let s = p.structure();
        let (np, nl) = (p.n_points(), p.n_lines());
        let n = np + nl;
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if v < np {
                    s.point_lines[v].iter().map(|&l| np + l).collect()
                } else {
                    s.line_points[v - np].clone()
                }
            })
            .collect();
        let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
        let is_line: Vec<bool> = (0..n).map(|v| v >= np).collect();
        let mut placed_at = vec![usize::MAX; n];
        let mut placed_neighbours = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        let mut anchors = Vec::with_capacity(n);
        for step in 0..n {
            let next = (0..n)
                .filter(|&v| placed_at[v] == usize::MAX)
                .max_by_key(|&v| {
                    (
                        placed_neighbours[v],
                        degree[v],
                        is_line[v],
                        std::cmp::Reverse(v),
                    )
                })
                .expect("an unplaced vertex remains");
            placed_at[next] = step;
            anchors.push(
                adj[next]
                    .iter()
                    .filter(|&&u| placed_at[u] != usize::MAX)
                    .map(|&u| placed_at[u])
                    .collect(),
            );
            adj[next].iter().for_each(|&u| placed_neighbours[u] += 1);
            order.push(next);
        }
        Plan {
            np,
            order,
            is_line,
            degree,
            anchors,
        }
    }
}

struct Host<'a> {
    s: &'a IncidenceStructure,
    np: usize,
}

impl Host<'_> {
    fn degree(&self, v: usize) -> usize {
        if v < self.np {
            self.s.point_lines[v].len()
        } else {
            self.s.line_points[v - self.np].len()
        }
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let (list, offset) = if v < self.np {
            (&self.s.point_lines[v], self.np)
        } else {
            (&self.s.line_points[v - self.np], 0)
        };
        list.iter().map(move |&u| u + offset)
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        let (p, l) = if a < self.np { (a, b) } else { (b, a) };
        p < self.np && l >= self.np && self.s.is_incident(p, l - self.np)
    }

    fn n(&self) -> usize {
        self.np + self.s.n_lines
    }
}

enum Flow {
    Continue,
    Stop,
}

struct Search<'a> {
    plan: &'a Plan,
    host: Host<'a>,
    budget: Option<u64>,
}

impl Search<'_> {
    fn candidates(&self, step: usize, img: &[usize], used: &[bool]) -> Vec<usize> {
        let v = self.plan.order[step];
        let need = self.plan.degree[v];
        let line = self.plan.is_line[v];
        let ok = |u: usize| !used[u] && self.host.degree(u) >= need;
        let anchors = &self.plan.anchors[step];
        if anchors.is_empty() {
            let range = if line {
                self.host.np..self.host.n()
            } else {
                0..self.host.np
            };
            return range.filter(|&u| ok(u)).collect();
        }
        let pivot = anchors
            .iter()
            .map(|&a| img[a])
            .min_by_key(|&u| self.host.degree(u))
            .expect("nonempty");
        self.host
            .neighbours(pivot)
            .filter(|&u| {
                ok(u)
                    && anchors
                        .iter()
                        .all(|&a| img[a] == pivot || self.host.adjacent(u, img[a]))
            })
            .collect()
    }

    fn dfs(
        &self,
        step: usize,
        img: &mut Vec<usize>,
        used: &mut [bool],
        nodes: &mut u64,
        sink: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Flow {
        if step == self.plan.order.len() {
            return if sink(img) {
                Flow::Stop
            } else {
                Flow::Continue
            };
        }
        for u in self.candidates(step, img, used) {
            if self.budget.is_some_and(|b| *nodes >= b) {
                return Flow::Stop;
            }
            *nodes += 1;
            img.push(u);
            used[u] = true;
            let flow = self.dfs(step + 1, img, used, nodes, sink);
            used[u] = false;
            img.pop();
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    fn exhausted(&self, nodes: u64) -> bool {
        self.budget.is_some_and(|b| nodes >= b)
    }

    /// Runs the subtree below a fixed root assignment.
    fn from_root(
        &self,
        root: usize,
        nodes: &mut u64,
        sink: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Flow {
        let mut img = vec![root];
        let mut used = vec![false; self.host.n()];
        used[root] = true;
        *nodes += 1;
        self.dfs(1, &mut img, &mut used, nodes, sink)
    }

    fn embedding(&self, img: &[usize]) -> Embedding {
        let np = self.plan.np;
        let mut point_map = vec![0; np];
        let mut line_map = vec![0; self.plan.order.len() - np];
        for (step, &v) in self.plan.order.iter().enumerate() {
            if v < np {
                point_map[v] = img[step];
            } else {
                line_map[v - np] = img[step] - self.host.np;
            }
        }
        Embedding {
            point_map,
            line_map,
        }
    }
}

/// Backtracking subgraph search. Lines of highest pattern degree are
/// placed first; each later vertex maximizes adjacency to placed ones.
///
/// With an unlimited budget, root branches run in parallel and the result
/// is the embedding of the first root candidate (in host order) that has
/// one. With a budget the search is sequential.
pub fn contains(
    host: &IncidenceStructure,
    p: &Pattern,
    budget: Budget,
) -> Result<SearchResult, PatternError> {
    if p.n_points() > host.n_points || p.n_lines() > host.n_lines {
        return Ok(SearchResult {
            outcome: SearchOutcome::Absent,
            nodes: 0,
        });
    }
    if p.n_points() + p.n_lines() == 0 {
        let e = Embedding {
            point_map: vec![],
            line_map: vec![],
        };
        return Ok(SearchResult {
            outcome: SearchOutcome::Found(e),
            nodes: 0,
        });
    }
    let plan = Plan::new(p);
    let search = Search {
        plan: &plan,
        host: Host {
            s: host,
            np: host.n_points,
        },
        budget: budget.0,
    };
    let roots = search.candidates(0, &[], &vec![false; search.host.n()]);
    let (found, nodes) = if budget.0.is_none() {
        let results: Vec<(Option<Vec<usize>>, u64)> = roots
            .par_iter()
            .map(|&r| {
                let mut nodes = 0;
                let mut hit = None;
                search.from_root(r, &mut nodes, &mut |img| {
                    hit = Some(img.to_vec());
                    true
                });
                (hit, nodes)
            })
            .collect();
        let nodes = results.iter().map(|r| r.1).sum();
        (results.into_iter().find_map(|r| r.0), nodes)
    } else {
        let mut nodes = 0;
        let mut hit = None;
        for &r in &roots {
            if search.exhausted(nodes) {
                break;
            }
            search.from_root(r, &mut nodes, &mut |img| {
                hit = Some(img.to_vec());
                true
            });
            if hit.is_some() {
                break;
            }
        }
        (hit, nodes)
    };
    let outcome = match found {
        Some(img) => {
            let e = search.embedding(&img);
            e.verify(host, p).map_err(PatternError::Unsound)?;
            SearchOutcome::Found(e)
        }
        None if search.exhausted(nodes) => SearchOutcome::Unknown,
        None => SearchOutcome::Absent,
    };
    Ok(SearchResult { outcome, nodes })
}

/// Counts embeddings, or distinct images `(point set, line set)` when
/// `modulo_symmetry` is set.
pub fn count_embeddings(
    host: &IncidenceStructure,
    p: &Pattern,
    modulo_symmetry: bool,
    budget: Budget,
) -> Result<EmbeddingCount, PatternError> {
    let done = |count, nodes| EmbeddingCount {
        count,
        modulo_symmetry,
        complete: true,
        nodes,
    };
    if p.n_points() > host.n_points || p.n_lines() > host.n_lines {
        return Ok(done(0, 0));
    }
    if p.n_points() + p.n_lines() == 0 {
        return Ok(done(1, 0));
    }
    let plan = Plan::new(p);
    let search = Search {
        plan: &plan,
        host: Host {
            s: host,
            np: host.n_points,
        },
        budget: budget.0,
    };
    let roots = search.candidates(0, &[], &vec![false; search.host.n()]);
    let run = |roots: &[usize], limited: bool| {
        let mut nodes = 0;
        let mut raw = 0u64;
        let mut images = HashSet::new();
        for &r in roots {
            if limited && search.exhausted(nodes) {
                break;
            }
            search.from_root(r, &mut nodes, &mut |img| {
                if modulo_symmetry {
                    images.insert(search.embedding(img).image_key());
                } else {
                    raw += 1;
                }
                false
            });
        }
        (raw, images, nodes)
    };
    let (raw, images, nodes) = if budget.0.is_none() {
        roots.par_iter().map(|&r| run(&[r], false)).reduce(
            || (0, HashSet::new(), 0),
            |(r1, mut i1, n1), (r2, i2, n2)| {
                i1.extend(i2);
                (r1 + r2, i1, n1 + n2)
            },
        )
    } else {
        run(&roots, true)
    };
    let count = if modulo_symmetry {
        images.len() as u64
    } else {
        raw
    };
    Ok(EmbeddingCount {
        count,
        modulo_symmetry,
        complete: !search.exhausted(nodes),
        nodes,
    })
}
