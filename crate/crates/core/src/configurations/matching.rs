use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{ConfigError, Configuration, IncidenceStructure};
use crate::algebra::Scalar;
use crate::projective::{dualize, ProjPoint};

/// Which configuration the matching graph is drawn on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Primal,
    Dual,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Primal => "primal",
            Chart::Dual => "dual",
        })
    }
}

impl FromStr for Chart {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "primal" => Ok(Chart::Primal),
            "dual" => Ok(Chart::Dual),
            other => Err(ConfigError::Invalid(format!("unknown chart `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingEdge {
    pub u: usize,
    pub v: usize,
    pub line: usize,
}

/// Edges join the `i`-th and `(i+1)`-st point along each line for odd `i`
/// (1-based), in left-to-right order.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingGraph {
    pub n_vertices: usize,
    pub n_lines: usize,
    pub n_incidences: usize,
    pub edges: Vec<MatchingEdge>,
}

impl MatchingGraph {
    /// `E ≥ (I − n)/2` with `n` the number of lines.
    pub fn lower_bound_holds(&self) -> bool {
        2 * self.edges.len() + self.n_lines >= self.n_incidences
    }

    pub fn upper_bound_holds(&self) -> bool {
        2 * self.edges.len() <= self.n_incidences
    }

    /// Whether any two edges on a common line are vertex-disjoint.
    pub fn same_line_edges_disjoint(&self) -> bool {
        let mut by_line: Vec<&MatchingEdge> = self.edges.iter().collect();
        by_line.sort_by_key(|e| e.line);
        by_line.chunk_by(|a, b| a.line == b.line).all(|group| {
            let mut seen = std::collections::HashSet::new();
            group.iter().all(|e| seen.insert(e.u) && seen.insert(e.v))
        })
    }
}

enum Key {
    Int { x: i128, y: i128, z: i128 },
    Exact(Scalar, Scalar),
    Float(f64, f64),
    Infinite,
}

fn key_of(p: &ProjPoint) -> Key {
    if let Some([x, y, z]) = p.small_ints() {
        if z == 0 {
            return Key::Infinite;
        }
        return Key::Int {
            x: x as i128,
            y: y as i128,
            z: z as i128,
        };
    }
    if p.kind().is_exact() {
        match p.to_affine() {
            Some((x, y)) => Key::Exact(x, y),
            None => Key::Infinite,
        }
    } else {
        match p.to_affine_f64() {
            Some((x, y)) => Key::Float(x, y),
            None => Key::Infinite,
        }
    }
}

/// Left-to-right order: by `x`, then `y`; points at infinity last.
fn compare_keys(a: &Key, b: &Key) -> Ordering {
    match (a, b) {
        (Key::Infinite, Key::Infinite) => Ordering::Equal,
        (Key::Infinite, _) => Ordering::Greater,
        (_, Key::Infinite) => Ordering::Less,
        (
            Key::Int {
                x: x1,
                y: y1,
                z: z1,
            },
            Key::Int {
                x: x2,
                y: y2,
                z: z2,
            },
        ) => {
            // z > 0 in canonical form
            (x1 * z2).cmp(&(x2 * z1)).then((y1 * z2).cmp(&(y2 * z1)))
        }
        (Key::Float(x1, y1), Key::Float(x2, y2)) => x1
            .partial_cmp(x2)
            .unwrap_or(Ordering::Equal)
            .then(y1.partial_cmp(y2).unwrap_or(Ordering::Equal)),
        _ => {
            let (x1, y1) = exact_of(a);
            let (x2, y2) = exact_of(b);
            x1.compare(&x2)
                .unwrap_or(Ordering::Equal)
                .then(y1.compare(&y2).unwrap_or(Ordering::Equal))
        }
    }
}

fn exact_of(k: &Key) -> (Scalar, Scalar) {
    match k {
        Key::Int { x, y, z } => (
            Scalar::ratio(*x as i64, *z as i64),
            Scalar::ratio(*y as i64, *z as i64),
        ),
        Key::Exact(x, y) => (x.clone(), y.clone()),
        Key::Float(x, y) => (Scalar::Float(*x), Scalar::Float(*y)),
        Key::Infinite => unreachable!("handled by the caller"),
    }
}

pub fn matching_graph(c: &Configuration) -> Result<MatchingGraph, ConfigError> {
    let s = c.structure()?;
    let keys: Vec<Key> = c.points.iter().map(key_of).collect();
    Ok(matching_from(&s, &keys))
}

fn matching_from(s: &IncidenceStructure, keys: &[Key]) -> MatchingGraph {
    let mut edges = Vec::new();
    for (line, pts) in s.line_points.iter().enumerate() {
        let mut order = pts.clone();
        order.sort_by(|&a, &b| compare_keys(&keys[a], &keys[b]).then(a.cmp(&b)));
        for pair in order.chunks_exact(2) {
            edges.push(MatchingEdge {
                u: pair[0],
                v: pair[1],
                line,
            });
        }
    }
    MatchingGraph {
        n_vertices: s.n_points,
        n_lines: s.n_lines,
        n_incidences: s.n_incidences(),
        edges,
    }
}

#[derive(Clone)]
enum Coord {
    Int(i128, i128),
    Exact(Scalar, Scalar),
    Float(f64, f64),
}

fn coord_of(p: &ProjPoint) -> Option<Coord> {
    if let Some([x, y, z]) = p.small_ints() {
        if z == 1 && x.unsigned_abs() < 1 << 40 && y.unsigned_abs() < 1 << 40 {
            return Some(Coord::Int(x as i128, y as i128));
        }
    }
    if p.kind().is_exact() {
        p.to_affine().map(|(x, y)| Coord::Exact(x, y))
    } else {
        p.to_affine_f64().map(|(x, y)| Coord::Float(x, y))
    }
}

const FLOAT_ORIENT_TOL: f64 = 1e-12;

fn orient(a: &Coord, b: &Coord, c: &Coord) -> i8 {
    match (a, b, c) {
        (Coord::Int(ax, ay), Coord::Int(bx, by), Coord::Int(cx, cy)) => {
            let d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            d.signum() as i8
        }
        (Coord::Float(ax, ay), Coord::Float(bx, by), Coord::Float(cx, cy)) => {
            let d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            let scale = ((bx - ax).abs() + (by - ay).abs()) * ((cx - ax).abs() + (cy - ay).abs());
            if d.abs() <= FLOAT_ORIENT_TOL * scale {
                0
            } else {
                d.signum() as i8
            }
        }
        _ => {
            let (ax, ay) = exact_coord(a);
            let (bx, by) = exact_coord(b);
            let (cx, cy) = exact_coord(c);
            let d = &(&(&bx - &ax) * &(&cy - &ay)) - &(&(&by - &ay) * &(&cx - &ax));
            match d.signum() {
                Ordering::Less => -1,
                Ordering::Equal => 0,
                Ordering::Greater => 1,
            }
        }
    }
}

fn exact_coord(c: &Coord) -> (Scalar, Scalar) {
    match c {
        Coord::Int(x, y) => (Scalar::integer(*x as i64), Scalar::integer(*y as i64)),
        Coord::Exact(x, y) => (x.clone(), y.clone()),
        Coord::Float(x, y) => (Scalar::Float(*x), Scalar::Float(*y)),
    }
}

/// Whether `p`, known collinear with `a` and `b`, lies strictly between them.
fn strictly_between(a: &Coord, b: &Coord, p: &Coord) -> bool {
    let (ax, ay) = exact_coord(a);
    let (bx, by) = exact_coord(b);
    let (px, py) = exact_coord(p);
    let inside = |lo: &Scalar, hi: &Scalar, v: &Scalar| {
        let (lo, hi) = if lo.compare(hi).unwrap_or(Ordering::Equal) == Ordering::Greater {
            (hi, lo)
        } else {
            (lo, hi)
        };
        v.compare(lo).unwrap_or(Ordering::Equal) == Ordering::Greater
            && v.compare(hi).unwrap_or(Ordering::Equal) == Ordering::Less
    };
    if ax != bx {
        inside(&ax, &bx, &px)
    } else {
        inside(&ay, &by, &py)
    }
}

/// Counts interior crossings between edges drawn as straight segments.
/// Pairs sharing an endpoint are not counted.
pub fn straightline_crossings(c: &Configuration, g: &MatchingGraph) -> Result<u64, ConfigError> {
    let coords: Vec<Option<Coord>> = c.points.iter().map(coord_of).collect();
    let segs: Vec<(usize, usize, Coord, Coord)> = g
        .edges
        .iter()
        .map(|e| match (&coords[e.u], &coords[e.v]) {
            (Some(a), Some(b)) => Ok((e.u, e.v, a.clone(), b.clone())),
            _ => Err(ConfigError::DegenerateDrawing(format!(
                "edge {}-{} has an endpoint at infinity",
                e.u, e.v
            ))),
        })
        .collect::<Result<_, _>>()?;
    let per_row: Vec<Result<u64, ConfigError>> = (0..segs.len())
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            let (u1, v1, a, b) = &segs[i];
            for (u2, v2, c2, d2) in &segs[i + 1..] {
                if u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2 {
                    continue;
                }
                let o1 = orient(a, b, c2);
                let o2 = orient(a, b, d2);
                let o3 = orient(c2, d2, a);
                let o4 = orient(c2, d2, b);
                if o1 == 0 && o2 == 0 {
                    let overlap = strictly_between(a, b, c2)
                        || strictly_between(a, b, d2)
                        || strictly_between(c2, d2, a)
                        || strictly_between(c2, d2, b);
                    if overlap {
                        return Err(ConfigError::DegenerateDrawing(format!(
                            "collinear overlapping edges {u1}-{v1} and {u2}-{v2}"
                        )));
                    }
                    continue;
                }
                let touches = (o1 == 0 && strictly_between(a, b, c2))
                    || (o2 == 0 && strictly_between(a, b, d2))
                    || (o3 == 0 && strictly_between(c2, d2, a))
                    || (o4 == 0 && strictly_between(c2, d2, b));
                if touches {
                    return Err(ConfigError::DegenerateDrawing(format!(
                        "a vertex of {u1}-{v1} or {u2}-{v2} lies inside the other edge"
                    )));
                }
                if o1 * o2 < 0 && o3 * o4 < 0 {
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect();
    per_row.into_iter().sum()
}

/// Diagnostic comparison of straight-line crossings with the crossing-lemma
/// shape `X ≥ ĉ · e^(3+1/(t−1)) / n^(2+1/(t−1))`.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingReport {
    pub chart: Chart,
    pub t: u32,
    pub points: usize,
    pub lines: usize,
    pub incidences: usize,
    /// Vertices of the matching graph (`n`).
    pub vertices: usize,
    /// Lines supporting the matching edges.
    pub supporting_lines: usize,
    pub edges: usize,
    pub edges_at_least_half_excess: bool,
    pub straight_line_crossings: u64,
    /// `C(supporting_lines, 2)`.
    pub crossing_upper_bound: u64,
    pub within_upper_bound: bool,
    pub c_hat: f64,
    pub precondition_met: bool,
    pub flag: Option<String>,
    pub shear: Option<i64>,
}

pub fn crossing_inequality_report(
    c: &Configuration,
    t: u32,
    chart: Chart,
) -> Result<CrossingReport, ConfigError> {
    if t < 2 {
        return Err(ConfigError::Invalid(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let incidences = c.incidence_list()?;
    let (drawn, shear) = match chart {
        Chart::Primal => (c.clone(), None),
        Chart::Dual => {
            let d = dualize(&c.points, &c.lines)?;
            let swapped = incidences.iter().map(|&(p, l)| (l, p)).collect();
            let dual = Configuration::with_incidences(
                d.points,
                d.lines,
                swapped,
                format!("dual of {}", c.provenance),
            )?;
            (dual, d.shear)
        }
    };
    let g = matching_graph(&drawn)?;
    let x = straightline_crossings(&drawn, &g)?;
    let n = g.n_vertices as f64;
    let e = g.edges.len() as f64;
    let r = 1.0 / (t as f64 - 1.0);
    let c_hat = if e > 0.0 {
        x as f64 * n.powf(2.0 + r) / e.powf(3.0 + r)
    } else {
        0.0
    };
    let s = g.n_lines as u64;
    let bound = s * s.saturating_sub(1) / 2;
    let precondition_met = g.edges.len() >= 4 * g.n_vertices;
    Ok(CrossingReport {
        chart,
        t,
        points: c.points.len(),
        lines: c.lines.len(),
        incidences: incidences.len(),
        vertices: g.n_vertices,
        supporting_lines: g.n_lines,
        edges: g.edges.len(),
        edges_at_least_half_excess: g.lower_bound_holds(),
        straight_line_crossings: x,
        crossing_upper_bound: bound,
        within_upper_bound: x <= bound,
        c_hat,
        precondition_met,
        flag: (!precondition_met).then(|| "crossing lemma precondition unmet (e < 4n)".to_string()),
        shear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::{erdos_config, single_line_config};
    use crate::projective::{ProjLine, ProjPoint};

    fn segments(pairs: &[((i64, i64), (i64, i64))]) -> (Configuration, MatchingGraph) {
        let mut points = Vec::new();
        let mut lines = Vec::new();
        for (a, b) in pairs {
            let pa = ProjPoint::from_ints(a.0, a.1, 1).unwrap();
            let pb = ProjPoint::from_ints(b.0, b.1, 1).unwrap();
            lines.push(crate::projective::line_through(&pa, &pb).unwrap());
            points.push(pa);
            points.push(pb);
        }
        let c = Configuration::from_geometry(points, lines, "segments").unwrap();
        let g = matching_graph(&c).unwrap();
        (c, g)
    }

    #[test]
    fn crossing_examples() {
        let (c, g) = segments(&[((0, 0), (2, 2)), ((0, 2), (2, 0))]);
        assert_eq!(straightline_crossings(&c, &g).unwrap(), 1);
        let (c, g) = segments(&[((0, 0), (2, 0)), ((0, 1), (2, 1))]);
        assert_eq!(straightline_crossings(&c, &g).unwrap(), 0);
    }

    #[test]
    fn single_line_rule() {
        let c = single_line_config(5).unwrap();
        let g = matching_graph(&c).unwrap();
        let pairs: Vec<_> = g.edges.iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
        let g = matching_graph(&single_line_config(4).unwrap()).unwrap();
        assert_eq!(g.edges.len(), 2);
        assert!(g.same_line_edges_disjoint());
    }

    #[test]
    fn erdos_two() {
        let c = erdos_config(2).unwrap();
        let g = matching_graph(&c).unwrap();
        assert_eq!(g.edges.len(), 7);
        assert!(g.lower_bound_holds() && g.upper_bound_holds());
    }

    #[test]
    fn vertical_line_order_uses_y() {
        let pts: Vec<ProjPoint> = [3, 1, 2]
            .iter()
            .map(|&y| ProjPoint::from_ints(0, y, 1).unwrap())
            .collect();
        let c = Configuration::from_geometry(
            pts,
            vec![ProjLine::from_ints(1, 0, 0).unwrap()],
            "vertical",
        )
        .unwrap();
        let g = matching_graph(&c).unwrap();
        assert_eq!((g.edges[0].u, g.edges[0].v), (1, 2));
    }

    #[test]
    fn report_flags_sparse_graphs() {
        let r = crossing_inequality_report(&erdos_config(4).unwrap(), 2, Chart::Dual).unwrap();
        assert!(r.within_upper_bound);
        assert_eq!(r.crossing_upper_bound, 64 * 63 / 2);
        assert!(!r.precondition_met);
        assert!(r.flag.is_some());
    }
}
