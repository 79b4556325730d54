//! Exact scalars, integer polynomials and the number theory behind the
//! degree obstruction.

mod degree;
mod number_theory;
mod poly;
mod quad;
mod scalar;

use thiserror::Error;

pub use degree::{
    annihilator_shifted_square, degree_of_shifted_square, degree_upper_bound, k_of_d,
    minimal_polynomial_shifted_square, prime_degree_lower_bound, rational_roots,
    shifted_square_f64, shifted_square_is_rational, shifted_square_quadratic, ROOT_MATCH_TOL,
};
pub use number_theory::{
    cyclotomic, divisors, factor_bigint, factor_u64, is_prime, minpoly_two_cos,
    square_free_decompose, totient, CYCLOTOMIC_CACHE_LIMIT,
};
pub use poly::IntPoly;
pub use quad::QuadExt;
pub use scalar::{Scalar, ScalarKind};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a square-free integer >= 2")]
    NotSquareFree(i64),
    #[error("cannot mix {0} and {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("factorization limit: {0}")]
    FactorizationLimit(String),
}
