use serde::Serialize;

use super::geometry::{ProjLine, ProjMap, ProjPoint};
use super::ProjectiveError;
use crate::algebra::{is_prime, Scalar, ScalarKind};

/// Largest shear denominator tried before giving up.
pub const SHEAR_SEARCH_LIMIT: i64 = 10_007;

/// The line `y = a·x − b` dual to the point `(a, b)`; homogeneously
/// `[a : b : c] ↦ [a : −c : −b]`.
pub fn dual_line(p: &ProjPoint) -> ProjLine {
    let [a, b, c] = p.coords().clone();
    ProjLine::new(a, -&c, -&b).expect("nonzero input stays nonzero")
}

/// The point `(a, −d)` dual to the line `y = a·x + d`; homogeneously
/// `[A : B : C] ↦ [A : −C : −B]`.
pub fn dual_point(l: &ProjLine) -> ProjPoint {
    let [a, b, c] = l.coords().clone();
    ProjPoint::new(a, -&c, -&b).expect("nonzero input stays nonzero")
}

fn scalar_in(kind: ScalarKind, num: i64, den: i64) -> Result<Scalar, ProjectiveError> {
    match kind {
        ScalarKind::Float => Ok(Scalar::Float(num as f64 / den as f64)),
        _ => Ok(Scalar::ratio(num, den).promote(kind)?),
    }
}

/// The shear `(x, y) ↦ (x + y/q, y)`.
pub fn shear_map(q: i64, kind: ScalarKind) -> Result<ProjMap, ProjectiveError> {
    let one = || scalar_in(kind, 1, 1);
    let zero = || scalar_in(kind, 0, 1);
    ProjMap::new([
        [one()?, scalar_in(kind, 1, q)?, zero()?],
        [zero()?, one()?, zero()?],
        [zero()?, zero()?, one()?],
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct Dualized {
    /// Point `j` is dual to input line `j`.
    pub points: Vec<ProjPoint>,
    /// Line `i` is dual to input point `i`.
    pub lines: Vec<ProjLine>,
    /// Denominator of the shear applied first, if any line was vertical.
    pub shear: Option<i64>,
}

/// Dualizes a configuration in the chart `(a, b) ↔ y = a·x − b`.
///
/// Vertical lines have no dual point in this chart. When present, the
/// configuration is first sheared by `x ↦ x + y/q` for the smallest prime
/// `q ≥ 7` that leaves no line vertical.
pub fn dualize(points: &[ProjPoint], lines: &[ProjLine]) -> Result<Dualized, ProjectiveError> {
    if lines
        .iter()
        .any(|l| l.coords()[0].is_negligible(1e-12) && l.is_vertical())
    {
        return Err(ProjectiveError::Unrepresentable(
            "the line at infinity has no dual point".into(),
        ));
    }
    let mut shear = None;
    let (pts, lns) = if lines.iter().any(ProjLine::is_vertical) {
        let kind = lines[0].kind();
        let mut q = 7;
        let found = loop {
            if q > SHEAR_SEARCH_LIMIT {
                break None;
            }
            if is_prime(q as u64) {
                let f = shear_map(q, kind)?;
                let sheared: Vec<ProjLine> = lines
                    .iter()
                    .map(|l| f.apply_line(l))
                    .collect::<Result<_, _>>()?;
                if !sheared.iter().any(ProjLine::is_vertical) {
                    break Some((q, f, sheared));
                }
            }
            q += 1;
        };
        let (q, f, sheared) = found.ok_or_else(|| {
            ProjectiveError::Unrepresentable(format!(
                "every shear up to 1/{SHEAR_SEARCH_LIMIT} leaves a vertical line"
            ))
        })?;
        shear = Some(q);
        (
            points
                .iter()
                .map(|p| f.apply(p))
                .collect::<Result<Vec<_>, _>>()?,
            sheared,
        )
    } else {
        (points.to_vec(), lines.to_vec())
    };
    Ok(Dualized {
        points: lns.iter().map(dual_point).collect(),
        lines: pts.iter().map(dual_line).collect(),
        shear,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::incident;

    #[test]
    fn chart_examples() {
        let p = ProjPoint::from_ints(1, 2, 1).unwrap();
        let l = dual_line(&p);
        // y = x − 2
        assert_eq!(l, ProjLine::from_ints(1, -1, -2).unwrap());
        assert_eq!(dual_point(&l), p);
        // y = 3x + 1
        let m = ProjLine::from_ints(3, -1, 1).unwrap();
        assert_eq!(dual_point(&m), ProjPoint::from_ints(3, -1, 1).unwrap());
    }

    #[test]
    fn vertical_lines_are_sheared_away() {
        let pts = vec![
            ProjPoint::from_ints(1, 0, 1).unwrap(),
            ProjPoint::from_ints(1, 5, 1).unwrap(),
        ];
        let lns = vec![
            ProjLine::from_ints(1, 0, -1).unwrap(),
            ProjLine::from_ints(0, 1, 0).unwrap(),
        ];
        let d = dualize(&pts, &lns).unwrap();
        assert_eq!(d.shear, Some(7));
        for (i, p) in pts.iter().enumerate() {
            for (j, l) in lns.iter().enumerate() {
                assert_eq!(incident(p, l), incident(&d.points[j], &d.lines[i]));
            }
        }
    }

    #[test]
    fn skips_shears_that_create_vertical_lines() {
        // 7x + y = 0 turns vertical under q = 7.
        let lns = vec![
            ProjLine::from_ints(1, 0, 0).unwrap(),
            ProjLine::from_ints(7, 1, 0).unwrap(),
        ];
        let d = dualize(&[], &lns).unwrap();
        assert_eq!(d.shear, Some(11));
    }
}
