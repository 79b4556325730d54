use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ProjectiveError;
use crate::algebra::{AlgebraError, Rational, Scalar, ScalarKind};

/// Default relative tolerance for float incidence: `|⟨L,p⟩| ≤ tol·‖L‖·‖p‖`.
pub const INCIDENCE_TOL: f64 = 1e-9;

type Triple = [Scalar; 3];

fn unify(coords: &[Scalar]) -> Result<ScalarKind, AlgebraError> {
    coords
        .iter()
        .skip(1)
        .try_fold(coords[0].kind(), |k, c| k.join(c.kind()))
}

fn promote_all<const N: usize>(
    coords: [Scalar; N],
    kind: ScalarKind,
) -> Result<[Scalar; N], AlgebraError> {
    let mut out = coords;
    for c in out.iter_mut() {
        *c = c.promote(kind)?;
    }
    Ok(out)
}

fn float_norm(t: &Triple) -> f64 {
    t.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
}

fn cross(u: &Triple, v: &Triple) -> Triple {
    [
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

fn dot(u: &Triple, v: &Triple) -> Scalar {
    &(&(&u[0] * &v[0]) + &(&u[1] * &v[1])) + &(&u[2] * &v[2])
}

fn det3(a: &Triple, b: &Triple, c: &Triple) -> Scalar {
    dot(a, &cross(b, c))
}

fn rational_canonical(t: &[Rational; 3]) -> [Rational; 3] {
    let lcm = t.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = t
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    let last = ints
        .iter()
        .rev()
        .find(|n| !n.is_zero())
        .expect("nonzero triple");
    let g = if last.is_negative() { -g } else { g };
    [0, 1, 2].map(|i| Rational::from_integer(&ints[i] / &g))
}

/// Canonical representative of a homogeneous triple.
///
/// Rationals become a primitive integer triple whose last nonzero entry is
/// positive. Quadratic triples are divided by their last nonzero entry and,
/// if that leaves them rational, normalized like rationals. Floats are scaled
/// to unit length with the last clearly nonzero entry positive.
fn canonicalize(t: Triple) -> Result<Triple, ProjectiveError> {
    let kind = unify(&t)?;
    let t = promote_all(t, kind)?;
    match kind {
        ScalarKind::Float => {
            let n = float_norm(&t);
            if !(n > 0.0) || !n.is_finite() {
                return Err(ProjectiveError::Degenerate(
                    "all coordinates are zero".into(),
                ));
            }
            let mut v = [0, 1, 2].map(|i| t[i].to_f64() / n);
            let last = v
                .iter()
                .rev()
                .find(|x| x.abs() > 1e-12)
                .copied()
                .unwrap_or(1.0);
            if last < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            Ok(v.map(Scalar::Float))
        }
        ScalarKind::Rational => {
            if t.iter().all(Scalar::is_zero) {
                return Err(ProjectiveError::Degenerate(
                    "all coordinates are zero".into(),
                ));
            }
            let r = [0, 1, 2].map(|i| t[i].as_rational().expect("rational kind"));
            Ok(rational_canonical(&r).map(Scalar::Rational))
        }
        ScalarKind::Quadratic(_) => {
            let last = t
                .iter()
                .rev()
                .find(|c| !c.is_zero())
                .cloned()
                .ok_or_else(|| ProjectiveError::Degenerate("all coordinates are zero".into()))?;
            let scaled = [0, 1, 2].map(|i| t[i].checked_div(&last).expect("nonzero divisor"));
            if scaled.iter().all(|c| c.as_rational().is_some()) {
                let r = [0, 1, 2].map(|i| scaled[i].as_rational().expect("checked"));
                let c = rational_canonical(&r);
                return Ok([0, 1, 2].map(|i| {
                    Scalar::Rational(c[i].clone())
                        .promote(kind)
                        .expect("rational promotes")
                }));
            }
            Ok(scaled)
        }
    }
}

fn float_parallel(u: &Triple, v: &Triple, tol: f64) -> bool {
    let c = cross(u, v);
    float_norm(&c) <= tol * float_norm(u) * float_norm(v)
}

fn same_projective(u: &Triple, v: &Triple) -> bool {
    match (u[0].kind(), v[0].kind()) {
        (ScalarKind::Float, ScalarKind::Float) => float_parallel(u, v, INCIDENCE_TOL),
        (ScalarKind::Float, _) | (_, ScalarKind::Float) => false,
        _ => u == v,
    }
}

fn fmt_triple(t: &Triple, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(
        f,
        "[{}:{}:{}]",
        t[0].compact(),
        t[1].compact(),
        t[2].compact()
    )
}

fn small_ints(t: &Triple) -> Option<[i64; 3]> {
    let mut out = [0i64; 3];
    for (o, c) in out.iter_mut().zip(t) {
        let r = c.as_rational()?;
        if !r.is_integer() {
            return None;
        }
        *o = r.numer().to_i64()?;
    }
    Some(out)
}

macro_rules! homogeneous {
    ($name:ident, $what:literal) => {
        impl $name {
            pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Result<Self, ProjectiveError> {
                Ok(Self(canonicalize([x, y, z])?))
            }

            pub fn from_ints(x: i64, y: i64, z: i64) -> Result<Self, ProjectiveError> {
                Self::new(Scalar::integer(x), Scalar::integer(y), Scalar::integer(z))
            }

            pub fn from_f64(x: f64, y: f64, z: f64) -> Result<Self, ProjectiveError> {
                Self::new(Scalar::Float(x), Scalar::Float(y), Scalar::Float(z))
            }

            pub fn coords(&self) -> &[Scalar; 3] {
                &self.0
            }

            pub fn kind(&self) -> ScalarKind {
                self.0[0].kind()
            }

            pub fn promote(&self, kind: ScalarKind) -> Result<Self, ProjectiveError> {
                Ok(Self(promote_all(self.0.clone(), kind)?))
            }

            /// Lossy conversion to float coordinates.
            pub fn to_float(&self) -> Self {
                Self(
                    canonicalize(self.0.clone().map(|c| c.to_float()))
                        .expect("canonical input is nonzero"),
                )
            }

            pub fn to_f64(&self) -> [f64; 3] {
                [0, 1, 2].map(|i| self.0[i].to_f64())
            }

            /// Integer coordinates, when exact, rational-valued and small.
            pub fn small_ints(&self) -> Option<[i64; 3]> {
                small_ints(&self.0)
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                same_projective(&self.0, &other.0)
            }
        }

        impl Eq for $name {}

        impl Hash for $name {
            fn hash<H: Hasher>(&self, state: &mut H) {
                if self.kind().is_exact() {
                    self.0.hash(state);
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_triple(&self.0, f)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                self.0.serialize(serializer)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let [x, y, z] = <[Scalar; 3]>::deserialize(deserializer)?;
                Self::new(x, y, z)
                    .map_err(|e| serde::de::Error::custom(format!("invalid {}: {e}", $what)))
            }
        }
    };
}

/// A point of the projective plane in canonical homogeneous coordinates.
#[derive(Clone, Debug)]
pub struct ProjPoint(Triple);

/// The line `a·x + b·y + c·z = 0`, canonicalized like points.
#[derive(Clone, Debug)]
pub struct ProjLine(Triple);

homogeneous!(ProjPoint, "point");
homogeneous!(ProjLine, "line");

impl ProjPoint {
    /// The affine point `(x, y)`.
    pub fn affine(x: Scalar, y: Scalar) -> Result<Self, ProjectiveError> {
        let kind = x.kind().join(y.kind())?;
        Self::new(x, y, Scalar::one(kind))
    }

    pub fn is_at_infinity(&self) -> bool {
        self.0[2].is_negligible(1e-12)
    }

    /// Affine coordinates `(x/z, y/z)`, or `None` at infinity.
    pub fn to_affine(&self) -> Option<(Scalar, Scalar)> {
        if self.0[2].is_zero() {
            return None;
        }
        Some((
            self.0[0].checked_div(&self.0[2]).ok()?,
            self.0[1].checked_div(&self.0[2]).ok()?,
        ))
    }

    pub fn to_affine_f64(&self) -> Option<(f64, f64)> {
        let [x, y, z] = self.to_f64();
        if z.abs() <= 1e-12 * (x.abs() + y.abs()) || z == 0.0 {
            return None;
        }
        Some((x / z, y / z))
    }

    /// Whether the affine coordinates exist and are integers.
    pub fn has_integer_affine_coords(&self) -> bool {
        match self.to_affine() {
            Some((x, y)) => [x, y]
                .iter()
                .all(|c| c.as_rational().is_some_and(|r| r.is_integer())),
            None => false,
        }
    }
}

impl ProjLine {
    pub fn at_infinity(kind: ScalarKind) -> Self {
        Self([Scalar::zero(kind), Scalar::zero(kind), Scalar::one(kind)])
    }

    /// Whether the line is `x = const` (or the line at infinity).
    pub fn is_vertical(&self) -> bool {
        self.0[1].is_negligible(1e-12)
    }
}

/// Outcome of a single point-line incidence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incidence {
    On,
    Off,
    /// Float residual just above tolerance; counted as off, reported apart.
    Ambiguous,
}

/// Incidence with an explicit float tolerance; exact kinds ignore `tol`.
pub fn incidence_with_tol(
    p: &ProjPoint,
    l: &ProjLine,
    tol: f64,
) -> Result<Incidence, ProjectiveError> {
    let kind = p.kind().join(l.kind())?;
    if kind.is_exact() {
        if let (Some(a), Some(b)) = (p.small_ints(), l.small_ints()) {
            let d = a
                .iter()
                .zip(&b)
                .map(|(x, y)| *x as i128 * *y as i128)
                .sum::<i128>();
            return Ok(if d == 0 {
                Incidence::On
            } else {
                Incidence::Off
            });
        }
        let d = dot(&p.promote(kind)?.0, &l.promote(kind)?.0);
        return Ok(if d.is_zero() {
            Incidence::On
        } else {
            Incidence::Off
        });
    }
    let a = p.to_f64();
    let b = l.to_f64();
    let d = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs();
    let scale = float_norm(&p.0) * float_norm(&l.0);
    Ok(if d <= tol * scale {
        Incidence::On
    } else if d <= 1e3 * tol * scale {
        Incidence::Ambiguous
    } else {
        Incidence::Off
    })
}

pub fn incident(p: &ProjPoint, l: &ProjLine) -> bool {
    matches!(incidence_with_tol(p, l, INCIDENCE_TOL), Ok(Incidence::On))
}

fn unified(a: &Triple, b: &Triple) -> Result<(Triple, Triple), ProjectiveError> {
    let kind = a[0].kind().join(b[0].kind())?;
    Ok((promote_all(a.clone(), kind)?, promote_all(b.clone(), kind)?))
}

/// The line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, ProjectiveError> {
    if p == q {
        return Err(ProjectiveError::Degenerate(format!(
            "line through coincident points {p}"
        )));
    }
    let (a, b) = unified(&p.0, &q.0)?;
    Ok(ProjLine(canonicalize(cross(&a, &b))?))
}

/// The common point of two distinct lines.
pub fn meet(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint, ProjectiveError> {
    if l1 == l2 {
        return Err(ProjectiveError::Degenerate(format!(
            "meet of identical lines {l1}"
        )));
    }
    let (a, b) = unified(&l1.0, &l2.0)?;
    Ok(ProjPoint(canonicalize(cross(&a, &b))?))
}

/// Whether three points lie on a common line.
pub fn collinear(a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> Result<bool, ProjectiveError> {
    let kind = a.kind().join(b.kind())?.join(c.kind())?;
    let (a, b, c) = (a.promote(kind)?.0, b.promote(kind)?.0, c.promote(kind)?.0);
    let d = det3(&a, &b, &c);
    if kind.is_exact() {
        Ok(d.is_zero())
    } else {
        Ok(d.to_f64().abs() <= INCIDENCE_TOL * float_norm(&a) * float_norm(&b) * float_norm(&c))
    }
}

/// Cross-ratio `(a,b;c,d) = |ac|·|bd| / (|ad|·|bc|)` of four collinear points.
///
/// Each distance is replaced by `det(p, q, e)` for a fixed `e` off the line;
/// the unknown scale factors cancel, and a point at infinity drops out of
/// the ratio on its own.
pub fn cross_ratio(
    a: &ProjPoint,
    b: &ProjPoint,
    c: &ProjPoint,
    d: &ProjPoint,
) -> Result<Scalar, ProjectiveError> {
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(ProjectiveError::Domain(format!(
                    "cross-ratio of coincident points {}",
                    pts[i]
                )));
            }
        }
    }
    if !collinear(a, b, c)? || !collinear(a, b, d)? {
        return Err(ProjectiveError::Domain(
            "cross-ratio of non-collinear points".into(),
        ));
    }
    let kind = pts
        .iter()
        .skip(1)
        .try_fold(a.kind(), |k, p| k.join(p.kind()))?;
    let t: Vec<Triple> = pts
        .iter()
        .map(|p| p.promote(kind).map(|p| p.0))
        .collect::<Result<_, _>>()?;
    let basis = |i: usize| -> Triple {
        [0, 1, 2].map(|j| {
            if i == j {
                Scalar::one(kind)
            } else {
                Scalar::zero(kind)
            }
        })
    };
    let e = (0..3)
        .map(basis)
        .max_by(|u, v| {
            let du = det3(&t[0], &t[1], u).to_f64().abs();
            let dv = det3(&t[0], &t[1], v).to_f64().abs();
            du.partial_cmp(&dv).unwrap_or(Ordering::Equal)
        })
        .expect("three basis vectors");
    let br = |p: &Triple, q: &Triple| det3(p, q, &e);
    let num = &br(&t[0], &t[2]) * &br(&t[1], &t[3]);
    let den = &br(&t[0], &t[3]) * &br(&t[1], &t[2]);
    Ok(num.checked_div(&den)?.abs())
}

/// A projective transformation given by an invertible 3×3 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMap {
    m: [[Scalar; 3]; 3],
}

impl ProjMap {
    pub fn new(rows: [[Scalar; 3]; 3]) -> Result<Self, ProjectiveError> {
        let flat: Vec<Scalar> = rows.iter().flatten().cloned().collect();
        let kind = unify(&flat)?;
        let m = rows
            .map(|r| promote_all(r, kind))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let m: [[Scalar; 3]; 3] = m.try_into().expect("three rows");
        let map = Self { m };
        let det = map.determinant();
        let singular = match kind {
            ScalarKind::Float => {
                let scale = flat
                    .iter()
                    .map(|c| c.to_f64().abs())
                    .fold(0.0, f64::max)
                    .powi(3);
                det.to_f64().abs() <= INCIDENCE_TOL * scale
            }
            _ => det.is_zero(),
        };
        if singular {
            return Err(ProjectiveError::Singular);
        }
        Ok(map)
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Result<Self, ProjectiveError> {
        Self::new(rows.map(|r| r.map(Scalar::integer)))
    }

    pub fn identity(kind: ScalarKind) -> Self {
        let m = [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                if i == j {
                    Scalar::one(kind)
                } else {
                    Scalar::zero(kind)
                }
            })
        });
        Self { m }
    }

    pub fn kind(&self) -> ScalarKind {
        self.m[0][0].kind()
    }

    pub fn entries(&self) -> &[[Scalar; 3]; 3] {
        &self.m
    }

    pub fn determinant(&self) -> Scalar {
        det3(&self.m[0], &self.m[1], &self.m[2])
    }

    fn promoted(&self, kind: ScalarKind) -> Result<[[Scalar; 3]; 3], ProjectiveError> {
        let rows = self.m.clone().map(|r| promote_all(r, kind));
        let mut out = Vec::with_capacity(3);
        for r in rows {
            out.push(r?);
        }
        Ok(out.try_into().expect("three rows"))
    }

    /// Rows of `det(M)·M^(−T)`, the matrix acting on line coordinates.
    fn cofactors(m: &[[Scalar; 3]; 3]) -> [[Scalar; 3]; 3] {
        [
            cross(&m[1], &m[2]),
            cross(&m[2], &m[0]),
            cross(&m[0], &m[1]),
        ]
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint, ProjectiveError> {
        let kind = self.kind().join(p.kind())?;
        let m = self.promoted(kind)?;
        let v = p.promote(kind)?.0;
        Ok(ProjPoint(canonicalize([0, 1, 2].map(|i| dot(&m[i], &v)))?))
    }

    pub fn apply_line(&self, l: &ProjLine) -> Result<ProjLine, ProjectiveError> {
        let kind = self.kind().join(l.kind())?;
        let m = self.promoted(kind)?;
        let v = l.promote(kind)?.0;
        let c = Self::cofactors(&m);
        let out = [0, 1, 2].map(|i| dot(&c[i], &v));
        Ok(ProjLine(canonicalize(out)?))
    }

    pub fn compose(&self, inner: &ProjMap) -> Result<ProjMap, ProjectiveError> {
        let kind = self.kind().join(inner.kind())?;
        let a = self.promoted(kind)?;
        let b = inner.promoted(kind)?;
        let rows = [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| dot(&a[i], &[b[0][j].clone(), b[1][j].clone(), b[2][j].clone()]))
        });
        ProjMap::new(rows)
    }
}

impl fmt::Display for ProjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(
                f,
                "{} {} {}",
                r[0].compact(),
                r[1].compact(),
                r[2].compact()
            )?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ProjMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = <[[Scalar; 3]; 3]>::deserialize(deserializer)?;
        ProjMap::new(rows).map_err(serde::de::Error::custom)
    }
}
