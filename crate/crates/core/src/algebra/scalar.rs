use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::quad::fmt_rational;
use super::{AlgebraError, QuadExt, Rational};

/// The coordinate algebra a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    /// `Q(√m)` for square-free `m ≥ 2`.
    Quadratic(i64),
    Float,
}

impl ScalarKind {
    /// Smallest kind both operands promote to. Exact and float never mix.
    pub fn join(self, other: ScalarKind) -> Result<ScalarKind, AlgebraError> {
        use ScalarKind::*;
        match (self, other) {
            (Rational, Rational) => Ok(Rational),
            (Float, Float) => Ok(Float),
            (Quadratic(m), Rational) | (Rational, Quadratic(m)) => Ok(Quadratic(m)),
            (Quadratic(m), Quadratic(n)) if m == n => Ok(Quadratic(m)),
            _ => Err(AlgebraError::FieldMismatch(
                self.to_string(),
                other.to_string(),
            )),
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, ScalarKind::Float)
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Quadratic(m) => write!(f, "quadratic({m})"),
            ScalarKind::Float => write!(f, "float"),
        }
    }
}

impl FromStr for ScalarKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "rational" => Ok(ScalarKind::Rational),
            "float" => Ok(ScalarKind::Float),
            other => {
                let m = other
                    .strip_prefix("quadratic(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|r| r.trim().parse::<i64>().ok())
                    .ok_or_else(|| AlgebraError::Parse(format!("unknown scalar kind `{other}`")))?;
                if !super::quad::is_square_free(m) {
                    return Err(AlgebraError::NotSquareFree(m));
                }
                Ok(ScalarKind::Quadratic(m))
            }
        }
    }
}

impl Serialize for ScalarKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A coordinate value: exact rational, exact quadratic irrational, or `f64`.
///
/// Rationals promote to `Q(√m)` implicitly. Going from exact to float is
/// explicit ([`Scalar::to_float`]); mixing the two in arithmetic is an error.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
    Float(f64),
}

impl Scalar {
    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Quad(q) => ScalarKind::Quadratic(q.m()),
            Scalar::Float(_) => ScalarKind::Float,
        }
    }

    pub fn int(kind: ScalarKind, n: i64) -> Scalar {
        match kind {
            ScalarKind::Rational => Scalar::Rational(Rational::from_integer(n.into())),
            ScalarKind::Quadratic(m) => Scalar::Quad(
                QuadExt::from_rational(m, Rational::from_integer(n.into()))
                    .expect("kind carries a square-free m"),
            ),
            ScalarKind::Float => Scalar::Float(n as f64),
        }
    }

    pub fn zero(kind: ScalarKind) -> Scalar {
        Scalar::int(kind, 0)
    }

    pub fn one(kind: ScalarKind) -> Scalar {
        Scalar::int(kind, 1)
    }

    pub fn integer(n: i64) -> Scalar {
        Scalar::Rational(Rational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rational(Rational::new(num.into(), den.into()))
    }

    pub fn promote(&self, kind: ScalarKind) -> Result<Scalar, AlgebraError> {
        match (self, kind) {
            (Scalar::Rational(_), ScalarKind::Rational) | (Scalar::Float(_), ScalarKind::Float) => {
                Ok(self.clone())
            }
            (Scalar::Quad(q), ScalarKind::Quadratic(m)) if q.m() == m => Ok(self.clone()),
            (Scalar::Rational(r), ScalarKind::Quadratic(m)) => {
                Ok(Scalar::Quad(QuadExt::from_rational(m, r.clone())?))
            }
            _ => Err(AlgebraError::FieldMismatch(
                self.kind().to_string(),
                kind.to_string(),
            )),
        }
    }

    /// Explicit, lossy conversion to a float scalar.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Quad(q) => q.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// The rational value, if this scalar is exact and rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Quad(q) if q.is_rational() => Some(q.a().clone()),
            _ => None,
        }
    }

    /// Exact zero test; floats compare against literal `0.0`.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    /// Zero up to `tol` for floats, exactly zero otherwise.
    pub fn is_negligible(&self, tol: f64) -> bool {
        match self {
            Scalar::Float(x) => x.abs() <= tol,
            _ => self.is_zero(),
        }
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Rational(r) => r.cmp(&Rational::zero()),
            Scalar::Quad(q) => q.signum(),
            Scalar::Float(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        binary(self, other, Op::Add)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        binary(self, other, Op::Sub)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        binary(self, other, Op::Mul)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        binary(self, other, Op::Div)
    }

    /// Exact comparison (floats compare by value, NaN as equal).
    pub fn compare(&self, other: &Scalar) -> Result<Ordering, AlgebraError> {
        Ok(self.checked_sub(other)?.signum())
    }

    /// Rendering used for homogeneous coordinates: quadratic values with a
    /// vanishing irrational part print as plain rationals.
    pub fn compact(&self) -> String {
        match self {
            Scalar::Quad(q) if q.is_rational() => fmt_rational(q.a()),
            other => other.to_string(),
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

fn rat_op(a: &Rational, b: &Rational, op: Op) -> Rational {
    match op {
        Op::Add => a + b,
        Op::Sub => a - b,
        Op::Mul => a * b,
        Op::Div => a / b,
    }
}

fn quad_op(a: &QuadExt, b: &QuadExt, op: Op) -> Result<QuadExt, AlgebraError> {
    match op {
        Op::Add => a.checked_add(b),
        Op::Sub => a.checked_sub(b),
        Op::Mul => a.checked_mul(b),
        Op::Div => a.checked_div(b),
    }
}

fn binary(x: &Scalar, y: &Scalar, op: Op) -> Result<Scalar, AlgebraError> {
    match (x, y) {
        (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(rat_op(a, b, op))),
        (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(match op {
            Op::Add => a + b,
            Op::Sub => a - b,
            Op::Mul => a * b,
            Op::Div => a / b,
        })),
        (Scalar::Quad(a), Scalar::Quad(b)) => quad_op(a, b, op).map(Scalar::Quad),
        (Scalar::Quad(a), Scalar::Rational(b)) => {
            quad_op(a, &QuadExt::from_rational(a.m(), b.clone())?, op).map(Scalar::Quad)
        }
        (Scalar::Rational(a), Scalar::Quad(b)) => {
            quad_op(&QuadExt::from_rational(b.m(), a.clone())?, b, op).map(Scalar::Quad)
        }
        _ => Err(AlgebraError::FieldMismatch(
            x.kind().to_string(),
            y.kind().to_string(),
        )),
    }
}

// Operator forms panic on incompatible kinds; callers unify kinds first
// (geometry constructors do this on entry).
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs)
            .expect("scalar kinds must be unified before arithmetic")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs)
            .expect("scalar kinds must be unified before arithmetic")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs)
            .expect("scalar kinds must be unified before arithmetic")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Float(a), Scalar::Float(b)) => a == b,
            (Scalar::Float(_), _) | (_, Scalar::Float(_)) => false,
            (Scalar::Quad(a), Scalar::Quad(b)) if a.m() != b.m() => {
                a.is_rational() && b.is_rational() && a.a() == b.a()
            }
            _ => self
                .checked_sub(other)
                .map(|d| d.is_zero())
                .unwrap_or(false),
        }
    }
}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Quad(q) if q.is_rational() => {
                0u8.hash(state);
                q.a().hash(state);
            }
            Scalar::Quad(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            Scalar::Float(x) => {
                2u8.hash(state);
                x.to_bits().hash(state);
            }
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::Quad(q)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => f.write_str(&fmt_rational(r)),
            Scalar::Quad(q) => write!(f, "{q}"),
            // Debug formatting keeps a decimal point or exponent, which
            // distinguishes floats from integers on the way back in.
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(pos) = s.rfind("*sqrt(") {
            let m: i64 = s[pos + 6..]
                .strip_suffix(')')
                .and_then(|m| m.trim().parse().ok())
                .ok_or_else(|| AlgebraError::Parse(format!("invalid quadratic element `{s}`")))?;
            let head = &s[..pos];
            let bytes = head.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| {
                    (bytes[i] == b'+' || bytes[i] == b'-')
                        && bytes[i - 1] != b'+'
                        && bytes[i - 1] != b'-'
                })
                .ok_or_else(|| AlgebraError::Parse(format!("invalid quadratic element `{s}`")))?;
            let a = parse_rational(&head[..split])?;
            let b_str = head[split..].strip_prefix('+').unwrap_or(&head[split..]);
            let b = parse_rational(b_str)?;
            return Ok(Scalar::Quad(QuadExt::new(m, a, b)?));
        }
        let looks_float = s.contains(['.', 'e', 'E']) || s.contains("inf") || s.contains("NaN");
        if looks_float {
            return s
                .parse::<f64>()
                .map(Scalar::Float)
                .map_err(|_| AlgebraError::Parse(format!("invalid float `{s}`")));
        }
        parse_rational(s).map(Scalar::Rational)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn string_forms() {
        assert_eq!(Scalar::ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(Scalar::integer(7).to_string(), "7");
        assert_eq!(Scalar::Float(1.0).to_string(), "1.0");
        let q = Scalar::Quad(QuadExt::from_ints(5, 3, -1).unwrap());
        assert_eq!(q.to_string(), "3-1*sqrt(5)");
        for s in [
            "-1/2",
            "7",
            "1.0",
            "-2.5e-12",
            "3-1*sqrt(5)",
            "-1/2+3/2*sqrt(3)",
            "0+1*sqrt(2)",
        ] {
            let parsed: Scalar = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
    }

    #[test]
    fn kinds_join_and_reject() {
        let r = Scalar::integer(2);
        let q = Scalar::Quad(QuadExt::sqrt_m(3).unwrap());
        let f = Scalar::Float(2.0);
        assert_eq!((&r * &q).kind(), ScalarKind::Quadratic(3));
        assert!(r.checked_add(&f).is_err());
        let q2 = Scalar::Quad(QuadExt::sqrt_m(2).unwrap());
        assert!(q.checked_mul(&q2).is_err());
        assert_eq!(
            "quadratic(3)".parse::<ScalarKind>().unwrap(),
            ScalarKind::Quadratic(3)
        );
        assert!("quadratic(8)".parse::<ScalarKind>().is_err());
    }

    #[test]
    fn equality_across_representations() {
        let r = Scalar::integer(4);
        let q = Scalar::Quad(QuadExt::from_ints(3, 4, 0).unwrap());
        assert_eq!(r, q);
        assert_ne!(r, Scalar::Float(4.0));
        assert_eq!(q.compact(), "4");
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
    }

    fn quad(m: i64) -> impl Strategy<Value = Scalar> {
        (small_rat(), small_rat())
            .prop_map(move |(a, b)| Scalar::Quad(QuadExt::new(m, a, b).unwrap()))
    }

    proptest! {
        #[test]
        fn quad_arithmetic_tracks_floats((x, y) in prop::sample::select(vec![2i64, 3, 5, 6, 7])
                                            .prop_flat_map(|m| (quad(m), quad(m)))) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            let close = |exact: f64, float: f64| (exact - float).abs() <= 1e-10 * (1.0 + float.abs());
            prop_assert!(close((&x + &y).to_f64(), fx + fy));
            prop_assert!(close((&x - &y).to_f64(), fx - fy));
            prop_assert!(close((&x * &y).to_f64(), fx * fy));
            if !y.is_zero() {
                prop_assert!(close(x.checked_div(&y).unwrap().to_f64(), fx / fy));
            }
            prop_assert_eq!(x.compare(&y).unwrap(), fx.partial_cmp(&fy).unwrap());
        }

        #[test]
        fn quad_field_axioms(a in quad(7), b in quad(7), c in quad(7)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            if !b.is_zero() {
                prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn scalar_strings_round_trip(a in quad(5)) {
            let back: Scalar = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
