use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::number_theory::{divisors, is_prime, minpoly_two_cos, square_free_decompose, totient};
use super::{AlgebraError, IntPoly, QuadExt, Rational};

/// Tolerance for matching an exact root against its float evaluation.
pub const ROOT_MATCH_TOL: f64 = 1e-9;

/// `(1 + 2·cos(2π/k))²` in floating point.
pub fn shifted_square_f64(k: u64) -> f64 {
    let t = 1.0 + 2.0 * (2.0 * PI / k as f64).cos();
    t * t
}

/// Integer polynomial vanishing at `y = (1 + 2·cos(2π/n))²`.
///
/// This is `Res_x(m(x), y − (1+x)²)` for the minimal polynomial `m` of
/// `2·cos(2π/n)`. With `y = u²` the resultant factors as
/// `(−1)^D · m(u−1) · m(−u−1)`, which is even in `u`.
pub fn annihilator_shifted_square(n: u64) -> Result<IntPoly, AlgebraError> {
    let m = minpoly_two_cos(n)?;
    let d = m.degree().expect("minimal polynomials are nonzero");
    let left = m.compose(&IntPoly::from_i64s(&[-1, 1]));
    let right = m.compose(&IntPoly::from_i64s(&[-1, -1]));
    let mut prod = left.mul(&right);
    if d % 2 == 1 {
        prod = prod.neg();
    }
    prod.even_in_square()
}

/// Rational roots by the rational root theorem, sorted ascending.
pub fn rational_roots(p: &IntPoly) -> Result<Vec<Rational>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::Domain(
            "the zero polynomial has every root".into(),
        ));
    }
    let mut roots = Vec::new();
    let low = p
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero");
    if low > 0 {
        roots.push(Rational::zero());
    }
    let stripped = IntPoly::from_coeffs(p.coeffs()[low..].to_vec());
    if stripped.degree() == Some(0) {
        return Ok(roots);
    }
    let nums = divisors(&stripped.coeff(0).abs())?;
    let dens = divisors(&stripped.leading().abs())?;
    for s in &dens {
        for r in &nums {
            if !r.gcd(s).is_one() {
                continue;
            }
            for cand in [
                Rational::new(r.clone(), s.clone()),
                Rational::new(-r.clone(), s.clone()),
            ] {
                if stripped.eval_rational(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// The rational value of `(1 + 2·cos(2π/k))²`, if it is rational.
pub fn shifted_square_is_rational(k: u64) -> Result<Option<Rational>, AlgebraError> {
    let target = shifted_square_f64(k);
    let roots = rational_roots(&annihilator_shifted_square(k)?)?;
    Ok(roots
        .into_iter()
        .find(|r| (r.to_f64().unwrap_or(f64::NAN) - target).abs() <= ROOT_MATCH_TOL))
}

/// Minimal polynomial of `(1 + 2·cos(2π/k))²` over `Q`, primitive with
/// positive leading coefficient.
///
/// The field `Q(cos(2π/k))` is Galois over `Q`, so the annihilator is a
/// power of the minimal polynomial and its square-free part is exact.
pub fn minimal_polynomial_shifted_square(k: u64) -> Result<IntPoly, AlgebraError> {
    Ok(annihilator_shifted_square(k)?.square_free_part())
}

pub fn degree_of_shifted_square(k: u64) -> Result<usize, AlgebraError> {
    Ok(minimal_polynomial_shifted_square(k)?
        .degree()
        .expect("nonzero"))
}

/// Lower bound `(p+1)/4` on the degree for prime `k = p`, as a rational.
pub fn prime_degree_lower_bound(p: u64) -> Rational {
    Rational::new(BigInt::from(p + 1), BigInt::from(4))
}

/// `φ(k)/2`, the degree of `2·cos(2π/k)` and an upper bound for the
/// shifted square.
pub fn degree_upper_bound(k: u64) -> Result<u64, AlgebraError> {
    Ok(totient(k)? / 2)
}

/// `(1 + 2·cos(2π/k))²` as an exact element of a real quadratic field,
/// when its degree is exactly 2.
pub fn shifted_square_quadratic(k: u64) -> Result<Option<QuadExt>, AlgebraError> {
    let min = minimal_polynomial_shifted_square(k)?;
    if min.degree() != Some(2) {
        return Ok(None);
    }
    let (c, b, a) = (min.coeff(0), min.coeff(1), min.coeff(2));
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    let (s, f) = square_free_decompose(&disc)?;
    let m = f
        .to_i64()
        .ok_or_else(|| AlgebraError::Domain(format!("discriminant part {f} out of range")))?;
    let two_a = BigInt::from(2) * &a;
    let base = Rational::new(-b, two_a.clone());
    let coef = Rational::new(s, two_a);
    let target = shifted_square_f64(k);
    for sign in [1, -1] {
        let q = QuadExt::new(
            m,
            base.clone(),
            &coef * Rational::from_integer(BigInt::from(sign)),
        )?;
        if (q.to_f64() - target).abs() <= ROOT_MATCH_TOL {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Smallest prime `p ≥ 3` with `(p+1)/4 > d^c`.
///
/// The comparison is exact: with `c = u/v` it reads `((p+1)/4)^v > d^u`.
pub fn k_of_d(d: u64, c: &Rational) -> Result<u64, AlgebraError> {
    if d == 0 || *c < Rational::one() {
        return Err(AlgebraError::Domain(format!(
            "k_of_d needs d >= 1 and c >= 1, got d={d}, c={c}"
        )));
    }
    let u = c
        .numer()
        .to_u32()
        .ok_or_else(|| AlgebraError::Domain("exponent too large".into()))?;
    let v = c
        .denom()
        .to_u32()
        .ok_or_else(|| AlgebraError::Domain("exponent too large".into()))?;
    let rhs = num_traits::pow(BigInt::from(d), u as usize);
    let mut p = 3u64;
    loop {
        if is_prime(p) {
            let lhs = num_traits::pow(prime_degree_lower_bound(p), v as usize);
            if lhs > Rational::from_integer(rhs.clone()) {
                return Ok(p);
            }
        }
        p += 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn annihilator_matches_sylvester_resultant() {
        // Res_x(m(x), y0 − (1+x)²) at integer points y0.
        for n in [5u64, 7, 8, 9, 12] {
            let m = minpoly_two_cos(n).unwrap();
            let a = annihilator_shifted_square(n).unwrap();
            for y0 in -3i64..=6 {
                let g = IntPoly::from_i64s(&[y0 - 1, -2, -1]);
                assert_eq!(
                    m.resultant(&g),
                    a.eval_int(&BigInt::from(y0)),
                    "n={n} y0={y0}"
                );
            }
        }
    }

    #[test]
    fn annihilator_has_expected_roots_and_degree() {
        for (n, root) in [
            (6u64, 4.0),
            (5, (3.0 + 5f64.sqrt()) / 2.0),
            (8, 3.0 + 2.0 * 2f64.sqrt()),
        ] {
            let a = annihilator_shifted_square(n).unwrap();
            assert!(a.eval_f64(root).abs() < 1e-9 * a.abs_eval_f64(root));
            assert_eq!(a.degree().unwrap() as u64, totient(n).unwrap() / 2);
        }
    }

    #[test]
    fn rational_root_examples() {
        assert_eq!(
            rational_roots(&IntPoly::from_i64s(&[-4, 1])).unwrap(),
            vec![r(4, 1)]
        );
        assert!(rational_roots(&IntPoly::from_i64s(&[-2, 0, 1]))
            .unwrap()
            .is_empty());
        assert_eq!(
            rational_roots(&IntPoly::from_i64s(&[-1, -1, 2])).unwrap(),
            vec![r(-1, 2), r(1, 1)]
        );
        assert_eq!(
            rational_roots(&IntPoly::from_i64s(&[0, 0, 3])).unwrap(),
            vec![r(0, 1)]
        );
        assert!(rational_roots(&IntPoly::zero()).is_err());
    }

    #[test]
    fn rational_exceptions() {
        assert_eq!(shifted_square_is_rational(3).unwrap(), Some(r(0, 1)));
        assert_eq!(shifted_square_is_rational(4).unwrap(), Some(r(1, 1)));
        assert_eq!(shifted_square_is_rational(6).unwrap(), Some(r(4, 1)));
        assert_eq!(shifted_square_is_rational(5).unwrap(), None);
        assert_eq!(shifted_square_is_rational(7).unwrap(), None);
    }

    #[test]
    fn degrees() {
        assert_eq!(degree_of_shifted_square(6).unwrap(), 1);
        assert_eq!(degree_of_shifted_square(5).unwrap(), 2);
        // the irreducible cubic's roots stay distinct after shifting and squaring
        assert_eq!(degree_of_shifted_square(7).unwrap(), 3);
        assert_eq!(degree_of_shifted_square(11).unwrap(), 5);
    }

    #[test]
    fn quadratic_values() {
        let q5 = shifted_square_quadratic(5).unwrap().unwrap();
        assert_eq!(q5, QuadExt::new(5, r(3, 2), r(1, 2)).unwrap());
        let q8 = shifted_square_quadratic(8).unwrap().unwrap();
        assert_eq!(q8, QuadExt::from_ints(2, 3, 2).unwrap());
        assert!(shifted_square_quadratic(7).unwrap().is_none());
    }

    #[test]
    fn k_of_d_examples() {
        assert_eq!(k_of_d(1, &r(1, 1)).unwrap(), 5);
        assert_eq!(k_of_d(2, &r(1, 1)).unwrap(), 11);
        assert_eq!(k_of_d(1, &r(3, 1)).unwrap(), 5);
        assert_eq!(k_of_d(2, &r(3, 2)).unwrap(), 11);
        assert_eq!(k_of_d(2, &r(2, 1)).unwrap(), 17);
        assert!(k_of_d(0, &r(1, 1)).is_err());
    }

    #[test]
    fn lehmer_degree_on_small_range() {
        for n in 3u64..=60 {
            let m = minpoly_two_cos(n).unwrap();
            assert_eq!(m.degree().unwrap() as u64, totient(n).unwrap() / 2, "n={n}");
            let x = 2.0 * (2.0 * PI / n as f64).cos();
            assert!(
                m.eval_f64(x).abs() / m.abs_eval_f64(x).max(1.0) < 1e-8,
                "n={n}"
            );
        }
    }
}
