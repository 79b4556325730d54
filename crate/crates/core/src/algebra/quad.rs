use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Rational};

/// An element `a + b·√m` of the real quadratic field `Q(√m)`.
///
/// `m` is square-free and at least 2, so the representation is unique and
/// the value is rational exactly when `b == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    m: i64,
    a: Rational,
    b: Rational,
}

pub(crate) fn is_square_free(m: i64) -> bool {
    if m < 2 {
        return false;
    }
    let mut n = m;
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(m: i64, a: Rational, b: Rational) -> Result<Self, AlgebraError> {
        if !is_square_free(m) {
            return Err(AlgebraError::NotSquareFree(m));
        }
        Ok(Self { m, a, b })
    }

    pub fn from_rational(m: i64, a: Rational) -> Result<Self, AlgebraError> {
        Self::new(m, a, Rational::zero())
    }

    /// `√m` itself.
    pub fn sqrt_m(m: i64) -> Result<Self, AlgebraError> {
        Self::new(m, Rational::zero(), Rational::one())
    }

    /// Shorthand for integer parts, `a + b·√m`.
    pub fn from_ints(m: i64, a: i64, b: i64) -> Result<Self, AlgebraError> {
        Self::new(
            m,
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
        )
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            m: self.m,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² − m·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.m)) * &self.b * &self.b
    }

    fn same_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch(
                format!("Q(sqrt({}))", self.m),
                format!("Q(sqrt({}))", other.m),
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_field(other)?;
        let inv = other.inv()?;
        Ok(self.mul_unchecked(&inv))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self {
            m: self.m,
            a: &self.a / &n,
            b: -(&self.b / &n),
        })
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        Self {
            m: self.m,
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        Self {
            m: self.m,
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let m = Rational::from_integer(BigInt::from(self.m));
        Self {
            m: self.m,
            a: &self.a * &other.a + m * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            m: self.m,
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Exact sign of the real number `a + b·√m`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (_, Ordering::Equal) => sa,
            (Ordering::Equal, _) => sb,
            _ if sa == sb => sa,
            _ => {
                let a2 = &self.a * &self.a;
                let mb2 = Rational::from_integer(BigInt::from(self.m)) * &self.b * &self.b;
                // a² = m·b² is impossible for irrational √m unless both vanish
                if a2 > mb2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let root = (self.m as f64).sqrt();
        if self.a.is_positive() == self.b.is_positive() || self.a.is_zero() || self.b.is_zero() {
            a + b * root
        } else {
            // a + b√m = norm / (a − b√m); the denominator has no cancellation.
            let n = self.norm().to_f64().unwrap_or(f64::NAN);
            n / (a - b * root)
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.m != other.m {
            return None;
        }
        Some(self.sub_unchecked(other).signum())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = if self.b.is_negative() {
            format!("-{}", fmt_rational(&-self.b.clone()))
        } else {
            format!("+{}", fmt_rational(&self.b))
        };
        write!(f, "{}{}*sqrt({})", fmt_rational(&self.a), b, self.m)
    }
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
