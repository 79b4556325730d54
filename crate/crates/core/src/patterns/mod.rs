//! Abstract two-sorted patterns and subgraph containment in incidence
//! graphs. Containment is the plain (not induced) subgraph relation with
//! points mapped to points and lines to lines.

mod cliques;
mod search;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configurations::{ConfigError, Configuration, IncidenceStructure};
use crate::projective::{chord_label, t_label, v_label, LINE_AT_INFINITY_LABEL};

pub use cliques::{count_subdivided_cliques, CliqueCopy, CliqueCount};
pub use search::{
    contains, count_embeddings, Budget, Embedding, EmbeddingCount, SearchOutcome, SearchResult,
};

#[derive(Debug, Error)]
pub enum PatternError {
    #[error("invalid pattern: {0}")]
    Invalid(String),
    #[error("search returned an embedding that does not verify: {0}")]
    Unsound(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// A bipartite graph between labelled point-vertices and line-vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub name: String,
    pub points: Vec<String>,
    pub lines: Vec<String>,
    /// `(point-vertex, line-vertex)` pairs, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn new(
        name: impl Into<String>,
        points: Vec<String>,
        lines: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PatternError> {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(p, l)) = edges
            .iter()
            .find(|&&(p, l)| p >= points.len() || l >= lines.len())
        {
            return Err(PatternError::Invalid(format!(
                "edge ({p}, {l}) out of range"
            )));
        }
        Ok(Self {
            name: name.into(),
            points,
            lines,
            edges: edges.into_iter().collect(),
        })
    }

    /// The incidence graph of a configuration, labelled by its labels or
    /// by index.
    pub fn from_configuration(
        c: &Configuration,
        name: impl Into<String>,
    ) -> Result<Self, PatternError> {
        let label = |labels: &[String], prefix: &str, n: usize| -> Vec<String> {
            if labels.len() == n {
                labels.to_vec()
            } else {
                (0..n).map(|i| format!("{prefix}{i}")).collect()
            }
        };
        Self::new(
            name,
            label(&c.point_labels, "p", c.points.len()),
            label(&c.line_labels, "l", c.lines.len()),
            c.incidence_list()?,
        )
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn structure(&self) -> IncidenceStructure {
        IncidenceStructure::new(
            self.points.len(),
            self.lines.len(),
            self.edges.iter().copied(),
        )
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|l| l == label)
    }

    pub fn line_index(&self, label: &str) -> Option<usize> {
        self.lines.iter().position(|l| l == label)
    }

    /// Edges as label pairs.
    pub fn labelled_edges(&self) -> BTreeSet<(String, String)> {
        self.edges
            .iter()
            .map(|&(p, l)| (self.points[p].clone(), self.lines[l].clone()))
            .collect()
    }

    pub fn to_json(&self) -> Result<String, PatternError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, PatternError> {
        let raw: Pattern = serde_json::from_str(s)?;
        Self::new(raw.name, raw.points, raw.lines, raw.edges)
    }

    pub fn save(&self, path: &Path) -> Result<(), PatternError> {
        Ok(std::fs::write(path, self.to_json()?)?)
    }

    pub fn load(path: &Path) -> Result<Self, PatternError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Wraps an index into `1..=k`.
fn wrap(i: i64, k: usize) -> usize {
    (i - 1).rem_euclid(k as i64) as usize + 1
}

/// The incidence graph `H_k` of the extended regular k-gon, with the same
/// labels and vertex order as the geometric construction.
pub fn pattern_hk(k: usize) -> Result<Pattern, PatternError> {
    if k < 3 {
        return Err(PatternError::Invalid(format!("H_k needs k >= 3, got {k}")));
    }
    let points: Vec<String> = (1..=k).map(v_label).chain((1..=k).map(t_label)).collect();
    let pairs: Vec<(usize, usize)> = (1..=k)
        .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
        .collect();
    let mut lines: Vec<String> = pairs.iter().map(|&(i, j)| chord_label(i, j)).collect();
    lines.push(LINE_AT_INFINITY_LABEL.to_string());
    let chord = |a: usize, b: usize| {
        let (a, b) = (a.min(b), a.max(b));
        pairs
            .iter()
            .position(|&p| p == (a, b))
            .expect("distinct indices form a chord")
    };
    let (half_down, half_up) = (k / 2, k.div_ceil(2));
    let t = |j: usize| k + j - 1;
    let mut edges = Vec::new();
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        edges.push((i - 1, idx));
        edges.push((j - 1, idx));
    }
    for i in 1..=half_up as i64 {
        for s in 0..half_down as i64 {
            edges.push((
                t(wrap(2 * i - 1, k)),
                chord(wrap(i - s, k), wrap(i + s + 1, k)),
            ));
        }
    }
    for i in 1..=half_down as i64 {
        for s in 0..half_up as i64 - 1 {
            edges.push((t(wrap(2 * i, k)), chord(wrap(i - s, k), wrap(i + s + 2, k))));
        }
    }
    let linf = lines.len() - 1;
    edges.extend((1..=k).map(|j| (t(j), linf)));
    Pattern::new(format!("H_{k}"), points, lines, edges)
}

/// A `t × t` grid: bundles `A_1..A_t`, `B_1..B_t` and points `p_{a,b}` on
/// `A_a` and `B_b`.
pub fn pattern_grid(t: usize) -> Result<Pattern, PatternError> {
    if t < 2 {
        return Err(PatternError::Invalid(format!(
            "a grid needs t >= 2, got {t}"
        )));
    }
    let points = (1..=t)
        .flat_map(|a| (1..=t).map(move |b| format!("p{a},{b}")))
        .collect();
    let lines = (1..=t)
        .map(|a| format!("A{a}"))
        .chain((1..=t).map(|b| format!("B{b}")))
        .collect();
    let edges = (0..t).flat_map(|a| (0..t).flat_map(move |b| [(a * t + b, a), (a * t + b, t + b)]));
    Pattern::new(format!("grid_{t}"), points, lines, edges)
}

/// The subdivided k-clique: blacks `b_1..b_k`, then whites `w_{i,j}` in
/// lexicographic order; for each pair the lines `b_i w_{i,j}` and
/// `b_j w_{i,j}`.
pub fn pattern_subdivided_clique(k: usize) -> Result<Pattern, PatternError> {
    if k < 3 {
        return Err(PatternError::Invalid(format!(
            "a subdivided clique needs k >= 3, got {k}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (1..=k)
        .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
        .collect();
    let points = (1..=k)
        .map(|i| format!("b{i}"))
        .chain(pairs.iter().map(|(i, j)| format!("w{i},{j}")))
        .collect();
    let lines = pairs
        .iter()
        .flat_map(|(i, j)| [format!("b{i}w{i},{j}"), format!("b{j}w{i},{j}")])
        .collect();
    let edges = pairs.iter().enumerate().flat_map(|(idx, &(i, j))| {
        let w = k + idx;
        [
            (i - 1, 2 * idx),
            (w, 2 * idx),
            (j - 1, 2 * idx + 1),
            (w, 2 * idx + 1),
        ]
    });
    Pattern::new(format!("subdivided_clique_{k}"), points, lines, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::degrees;

    #[test]
    fn hk_sizes_and_degrees() {
        for k in 3..=16 {
            let p = pattern_hk(k).unwrap();
            let c2 = k * (k - 1) / 2;
            assert_eq!((p.n_points(), p.n_lines()), (2 * k, c2 + 1));
            assert_eq!(p.edges.len(), 3 * c2 + k, "k={k}");
            let (pd, ld) = degrees(p.n_points(), p.n_lines(), &p.edges);
            assert!(ld[..c2].iter().all(|&d| d == 3), "k={k}");
            assert_eq!(ld[c2], k);
            assert!(pd[..k].iter().all(|&d| d == k - 1));
            for j in 1..=k {
                let want = if j % 2 == 1 { k / 2 + 1 } else { k.div_ceil(2) };
                assert_eq!(pd[k + j - 1], want, "k={k} t{j}");
            }
        }
        assert_eq!(pattern_hk(5).unwrap().edges.len(), 35);
    }

    #[test]
    fn grid_and_clique_sizes() {
        let g = pattern_grid(2).unwrap();
        assert_eq!((g.n_points(), g.n_lines(), g.edges.len()), (4, 4, 8));
        let g = pattern_grid(3).unwrap();
        assert_eq!((g.n_points(), g.n_lines(), g.edges.len()), (9, 6, 18));
        let s = pattern_subdivided_clique(3).unwrap();
        assert_eq!((s.n_points(), s.n_lines(), s.edges.len()), (6, 6, 12));
        let s = pattern_subdivided_clique(4).unwrap();
        assert_eq!((s.n_points(), s.n_lines()), (10, 12));
        let (pd, ld) = degrees(10, 12, &s.edges);
        assert!(pd[..4].iter().all(|&d| d == 3) && pd[4..].iter().all(|&d| d == 2));
        assert!(ld.iter().all(|&d| d == 2));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = pattern_hk(4).unwrap();
        assert_eq!(Pattern::from_json(&p.to_json().unwrap()).unwrap(), p);
        let bad = r#"{"name":"x","points":["a"],"lines":["L"],"edges":[[0,1]]}"#;
        assert!(Pattern::from_json(bad).is_err());
    }
}
