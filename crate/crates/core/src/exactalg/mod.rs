//! Exact arithmetic substrate: arbitrary-precision rationals, sparse multivariate
//! polynomials over weighted variable contexts, and exact linear algebra.
//!
//! Nothing in this module (or the crate) ever touches floating point. Rationals are
//! always stored reduced with positive denominator (invariant maintained by the `num`
//! crate). Polynomials store no zero coefficients. Monomial order is graded
//! lexicographic on raw exponent vectors and is independent of variable weights, so
//! basis enumerations are reproducible bit for bit.

mod context;
mod linalg;
mod poly;

pub use context::VariableContext;
pub use linalg::{subspace_dims, Echelon, ExactMatrix, SubspaceDims};
pub use poly::{rational_binomial, rational_power_series, series_mul, Monomial, SparsePoly};

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type Rational = num::BigRational;

/// Arbitrary-precision integer.
pub type Integer = num::BigInt;

/// Shorthand constructor for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand constructor for the rational n/d.
///
/// Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(n.into(), d.into())
}
