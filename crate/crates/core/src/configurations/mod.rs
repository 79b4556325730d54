//! Concrete point-line configurations: generators, incidence bookkeeping,
//! matching graphs, crossing statistics and figure export.

mod builders;
mod common;
mod export;
mod matching;
mod structure;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::ScalarKind;
use crate::projective::{
    incidence_with_tol, Incidence, ProjLine, ProjPoint, ProjectiveError, INCIDENCE_TOL,
};

pub use builders::{
    extended_gon_config, grid_host, hexagon_embedded_host, single_line_config,
    subdivided_clique_realization,
};
pub use common::{common_neighbor_max, CommonNeighborReport};
pub use export::{degree_csv, write_svg, SvgOptions};
pub use matching::{
    crossing_inequality_report, matching_graph, straightline_crossings, Chart, CrossingReport,
    MatchingEdge, MatchingGraph,
};
pub use structure::IncidenceStructure;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Geometry(#[from] ProjectiveError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("degenerate drawing: {0}")]
    DegenerateDrawing(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Points, lines and the incidences between them.
///
/// Incidences are stored sorted as `(point index, line index)`; when built
/// from exact geometry they agree with the geometric predicate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Configuration {
    pub scalar_kind: ScalarKind,
    pub points: Vec<ProjPoint>,
    pub lines: Vec<ProjLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidences: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub point_labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub line_labels: Vec<String>,
}

/// Incidences found geometrically, with float near-misses counted apart.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IncidenceCount {
    pub incidences: usize,
    pub ambiguous: usize,
}

/// All `(point, line)` pairs that are incident, plus the number of float
/// pairs whose residual falls just above tolerance.
pub fn geometric_incidences(
    points: &[ProjPoint],
    lines: &[ProjLine],
    tol: f64,
) -> Result<(Vec<(usize, usize)>, usize), ConfigError> {
    let small_pts: Vec<Option<[i64; 3]>> = points.iter().map(ProjPoint::small_ints).collect();
    let small_lns: Vec<Option<[i64; 3]>> = lines.iter().map(ProjLine::small_ints).collect();
    let rows: Vec<Result<(Vec<(usize, usize)>, usize), ConfigError>> = (0..points.len())
        .into_par_iter()
        .map(|pi| {
            let mut hits = Vec::new();
            let mut ambiguous = 0;
            for li in 0..lines.len() {
                let verdict = match (&small_pts[pi], &small_lns[li]) {
                    (Some(a), Some(b)) => {
                        let d: i128 = a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum();
                        if d == 0 {
                            Incidence::On
                        } else {
                            Incidence::Off
                        }
                    }
                    _ => incidence_with_tol(&points[pi], &lines[li], tol)?,
                };
                match verdict {
                    Incidence::On => hits.push((pi, li)),
                    Incidence::Ambiguous => ambiguous += 1,
                    Incidence::Off => {}
                }
            }
            Ok((hits, ambiguous))
        })
        .collect();
    let mut all = Vec::new();
    let mut ambiguous = 0;
    for r in rows {
        let (h, a) = r?;
        all.extend(h);
        ambiguous += a;
    }
    Ok((all, ambiguous))
}

impl Configuration {
    /// Builds a configuration and derives its incidences geometrically.
    pub fn from_geometry(
        points: Vec<ProjPoint>,
        lines: Vec<ProjLine>,
        provenance: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        let mut c = Self::unchecked(points, lines, None, provenance.into())?;
        let (inc, _) = geometric_incidences(&c.points, &c.lines, INCIDENCE_TOL)?;
        c.incidences = Some(inc);
        c.validate()?;
        Ok(c)
    }

    /// Builds a configuration with a supplied incidence set.
    pub fn with_incidences(
        points: Vec<ProjPoint>,
        lines: Vec<ProjLine>,
        incidences: Vec<(usize, usize)>,
        provenance: impl Into<String>,
    ) -> Result<Self, ConfigError> {
        let c = Self::unchecked(points, lines, Some(incidences), provenance.into())?;
        c.validate()?;
        Ok(c)
    }

    fn unchecked(
        points: Vec<ProjPoint>,
        lines: Vec<ProjLine>,
        incidences: Option<Vec<(usize, usize)>>,
        provenance: String,
    ) -> Result<Self, ConfigError> {
        let mut kind: Option<ScalarKind> = None;
        for k in points
            .iter()
            .map(ProjPoint::kind)
            .chain(lines.iter().map(ProjLine::kind))
        {
            kind = Some(match kind {
                None => k,
                Some(prev) => prev.join(k).map_err(ProjectiveError::from)?,
            });
        }
        let kind = kind.unwrap_or(ScalarKind::Rational);
        let points = points
            .iter()
            .map(|p| p.promote(kind))
            .collect::<Result<Vec<_>, _>>()?;
        let lines = lines
            .iter()
            .map(|l| l.promote(kind))
            .collect::<Result<Vec<_>, _>>()?;
        let incidences = incidences.map(|mut v| {
            v.sort_unstable();
            v.dedup();
            v
        });
        Ok(Self {
            scalar_kind: kind,
            points,
            lines,
            incidences,
            provenance,
            point_labels: Vec::new(),
            line_labels: Vec::new(),
        })
    }

    pub fn with_labels(
        mut self,
        point_labels: Vec<String>,
        line_labels: Vec<String>,
    ) -> Result<Self, ConfigError> {
        if (!point_labels.is_empty() && point_labels.len() != self.points.len())
            || (!line_labels.is_empty() && line_labels.len() != self.lines.len())
        {
            return Err(ConfigError::Invalid("label count does not match".into()));
        }
        self.point_labels = point_labels;
        self.line_labels = line_labels;
        Ok(self)
    }

    /// Checks index ranges and that no point or line is repeated.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(inc) = &self.incidences {
            if let Some(&(p, l)) = inc
                .iter()
                .find(|(p, l)| *p >= self.points.len() || *l >= self.lines.len())
            {
                return Err(ConfigError::Invalid(format!(
                    "incidence ({p}, {l}) out of range"
                )));
            }
        }
        if self.scalar_kind.is_exact() {
            let mut seen = HashSet::new();
            if let Some(p) = self.points.iter().find(|p| !seen.insert(*p)) {
                return Err(ConfigError::Invalid(format!("duplicate point {p}")));
            }
            let mut seen = HashSet::new();
            if let Some(l) = self.lines.iter().find(|l| !seen.insert(*l)) {
                return Err(ConfigError::Invalid(format!("duplicate line {l}")));
            }
        } else {
            for (i, p) in self.points.iter().enumerate() {
                if self.points[..i].contains(p) {
                    return Err(ConfigError::Invalid(format!("duplicate point {p}")));
                }
            }
            for (i, l) in self.lines.iter().enumerate() {
                if self.lines[..i].contains(l) {
                    return Err(ConfigError::Invalid(format!("duplicate line {l}")));
                }
            }
        }
        Ok(())
    }

    /// The stored incidences, or geometric ones when none were supplied.
    pub fn incidence_list(&self) -> Result<Vec<(usize, usize)>, ConfigError> {
        match &self.incidences {
            Some(v) => Ok(v.clone()),
            None => Ok(geometric_incidences(&self.points, &self.lines, INCIDENCE_TOL)?.0),
        }
    }

    pub fn structure(&self) -> Result<IncidenceStructure, ConfigError> {
        Ok(IncidenceStructure::new(
            self.points.len(),
            self.lines.len(),
            self.incidence_list()?,
        ))
    }

    /// Keeps the listed points and lines (in the given order) and the
    /// incidences among them.
    pub fn restrict(
        &self,
        keep_points: &[usize],
        keep_lines: &[usize],
    ) -> Result<Configuration, ConfigError> {
        let mut pmap = vec![usize::MAX; self.points.len()];
        for (new, &old) in keep_points.iter().enumerate() {
            pmap[old] = new;
        }
        let mut lmap = vec![usize::MAX; self.lines.len()];
        for (new, &old) in keep_lines.iter().enumerate() {
            lmap[old] = new;
        }
        let inc = self
            .incidence_list()?
            .into_iter()
            .filter(|(p, l)| pmap[*p] != usize::MAX && lmap[*l] != usize::MAX)
            .map(|(p, l)| (pmap[p], lmap[l]))
            .collect();
        let pick = |labels: &[String], keep: &[usize]| -> Vec<String> {
            if labels.is_empty() {
                Vec::new()
            } else {
                keep.iter().map(|&i| labels[i].clone()).collect()
            }
        };
        Ok(Configuration {
            scalar_kind: self.scalar_kind,
            points: keep_points
                .iter()
                .map(|&i| self.points[i].clone())
                .collect(),
            lines: keep_lines.iter().map(|&i| self.lines[i].clone()).collect(),
            incidences: Some(inc),
            provenance: self.provenance.clone(),
            point_labels: pick(&self.point_labels, keep_points),
            line_labels: pick(&self.line_labels, keep_lines),
        })
    }

    pub fn to_json(&self) -> Result<String, ConfigError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Configuration, ConfigError> {
        let mut c: Configuration = serde_json::from_str(s)?;
        let kind = c.scalar_kind;
        c.points = c
            .points
            .iter()
            .map(|p| p.promote(kind))
            .collect::<Result<_, _>>()?;
        c.lines = c
            .lines
            .iter()
            .map(|l| l.promote(kind))
            .collect::<Result<_, _>>()?;
        if c.incidences.is_none() {
            c.incidences = Some(geometric_incidences(&c.points, &c.lines, INCIDENCE_TOL)?.0);
        } else if let Some(v) = c.incidences.as_mut() {
            v.sort_unstable();
            v.dedup();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<(), ConfigError> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Configuration, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Number of incidences; geometric recomputation also reports float
/// near-misses.
pub fn count_incidences(c: &Configuration) -> Result<IncidenceCount, ConfigError> {
    match &c.incidences {
        Some(v) if c.scalar_kind.is_exact() => Ok(IncidenceCount {
            incidences: v.len(),
            ambiguous: 0,
        }),
        _ => {
            let (v, ambiguous) = geometric_incidences(&c.points, &c.lines, INCIDENCE_TOL)?;
            let incidences = c.incidences.as_ref().map_or(v.len(), Vec::len);
            Ok(IncidenceCount {
                incidences,
                ambiguous,
            })
        }
    }
}

/// `A⁴ − (A(A−1)/2)²`, the incidence count of [`erdos_config`].
pub fn erdos_incidence_formula(a: u64) -> u64 {
    let t = a * (a - 1) / 2;
    a.pow(4) - t * t
}

/// Points `(a, b)` with `0 ≤ a < A`, `0 ≤ b < A²` and lines `y = a·x + b`
/// over the same ranges. Index of `(a, b)` is `a·A² + b` on both sides.
pub fn erdos_config(a: usize) -> Result<Configuration, ConfigError> {
    if a < 2 {
        return Err(ConfigError::Invalid(format!(
            "the standard configuration needs A >= 2, got {a}"
        )));
    }
    let a2 = a * a;
    let mut points = Vec::with_capacity(a * a2);
    let mut lines = Vec::with_capacity(a * a2);
    for x in 0..a {
        for y in 0..a2 {
            points.push(ProjPoint::from_ints(x as i64, y as i64, 1)?);
            lines.push(ProjLine::from_ints(x as i64, -1, y as i64)?);
        }
    }
    let mut incidences = Vec::new();
    for slope in 0..a {
        for icpt in 0..a2 {
            for x in 0..a {
                let y = slope * x + icpt;
                if y < a2 {
                    incidences.push((x * a2 + y, slope * a2 + icpt));
                }
            }
        }
    }
    let c = Configuration::unchecked(points, lines, Some(incidences), format!("erdos A={a}"))?;
    Ok(c)
}

/// Per-point and per-line degrees.
pub fn degrees(
    n_points: usize,
    n_lines: usize,
    incidences: &[(usize, usize)],
) -> (Vec<usize>, Vec<usize>) {
    let mut pd = vec![0; n_points];
    let mut ld = vec![0; n_lines];
    for &(p, l) in incidences {
        pd[p] += 1;
        ld[l] += 1;
    }
    (pd, ld)
}

/// Incidence pairs as a set, convenient for comparisons.
pub fn incidence_set(c: &Configuration) -> Result<BTreeSet<(usize, usize)>, ConfigError> {
    Ok(c.incidence_list()?.into_iter().collect())
}
