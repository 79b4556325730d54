//! Integer factorization, Euler's totient and cyclotomic polynomials.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, IntPoly};

/// Largest `n` whose cyclotomic polynomial is memoized.
pub const CYCLOTOMIC_CACHE_LIMIT: usize = 256;

/// Trial-division bound used before switching to Pollard's rho.
const TRIAL_BOUND: u64 = 1 << 16;

/// Euler's totient by trial-division factorization.
pub fn totient(n: u64) -> Result<u64, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Domain("totient is defined for n >= 1".into()));
    }
    Ok(factor_u64(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    if n == 0 {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND && p * p <= n {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(n, &mut primes);
    group(primes)
}

fn group(mut primes: Vec<u64>) -> Vec<(u64, u32)> {
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Factorization of `|n|` for arbitrary-size `n`; fails only when a
/// cofactor above `u64` survives trial division.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(BigInt, u32)>, AlgebraError> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(AlgebraError::Domain("cannot factor zero".into()));
    }
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect());
    }
    let mut primes: Vec<u64> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        while (&n % &bp).is_zero() {
            primes.push(p);
            n /= &bp;
        }
        if let Some(small) = n.to_u64() {
            for (q, e) in factor_u64(small) {
                primes.extend(std::iter::repeat_n(q, e as usize));
            }
            return Ok(group(primes)
                .into_iter()
                .map(|(p, e)| (BigInt::from(p), e))
                .collect());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Err(AlgebraError::FactorizationLimit(n.to_string()))
}

/// All positive divisors of `|n|`, ascending.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>, AlgebraError> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factor_bigint(n)? {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Writes `|n| = s² · f` with `f` square-free; returns `(s, f)`.
pub fn square_free_decompose(n: &BigInt) -> Result<(BigInt, BigInt), AlgebraError> {
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    for (p, e) in factor_bigint(n)? {
        s *= num_traits::pow(p.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            f *= p;
        }
    }
    Ok((s, f))
}

fn cyclotomic_cache() -> &'static Mutex<Vec<Option<IntPoly>>> {
    static CACHE: OnceLock<Mutex<Vec<Option<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![None; CYCLOTOMIC_CACHE_LIMIT + 1]))
}

/// The `n`-th cyclotomic polynomial, by exact division of `zⁿ − 1` by
/// `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic(n: u64) -> Result<IntPoly, AlgebraError> {
    if n == 0 {
        return Err(AlgebraError::Domain(
            "cyclotomic polynomials start at n = 1".into(),
        ));
    }
    let idx = n as usize;
    if idx <= CYCLOTOMIC_CACHE_LIMIT {
        if let Some(p) = cyclotomic_cache().lock().expect("cache poisoned")[idx].clone() {
            return Ok(p);
        }
    }
    let mut poly = IntPoly::monomial(BigInt::one(), idx).sub(&IntPoly::one());
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic(d)?;
            poly = poly
                .div_exact(&phi_d)
                .expect("cyclotomic factors divide z^n - 1");
        }
    }
    if idx <= CYCLOTOMIC_CACHE_LIMIT {
        cyclotomic_cache().lock().expect("cache poisoned")[idx] = Some(poly.clone());
    }
    Ok(poly)
}

/// Minimal polynomial of `2·cos(2π/n)` over `Q`, for `n ≥ 3`.
///
/// `Φ_n` is palindromic of degree `2D`, so `z^(−D)·Φ_n(z)` is a polynomial
/// in `x = z + 1/z`; the powers `zⁱ + z⁻ⁱ` follow the recurrence
/// `T_{i+1} = x·T_i − T_{i−1}` with `T_0 = 2`, `T_1 = x`.
pub fn minpoly_two_cos(n: u64) -> Result<IntPoly, AlgebraError> {
    if n < 3 {
        return Err(AlgebraError::Domain(format!(
            "minpoly_two_cos needs n >= 3, got {n}"
        )));
    }
    let phi = cyclotomic(n)?;
    let deg = phi.degree().expect("cyclotomic polynomials are nonzero");
    debug_assert!(deg % 2 == 0);
    let half = deg / 2;
    let mut result = IntPoly::constant(phi.coeff(half));
    let mut prev = IntPoly::constant(BigInt::from(2));
    let mut cur = IntPoly::x();
    for i in 1..=half {
        result = result.add(&cur.scale(&phi.coeff(half + i)));
        let next = IntPoly::x().mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Ok(result)
}
