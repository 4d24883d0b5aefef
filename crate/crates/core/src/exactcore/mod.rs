//! Exact arithmetic: sparse polynomials and rational functions in `q`, `L`
//! and `Q = q^x` over arbitrary-precision rationals.
//!
//! Rationals come from `num-rational`'s [`BigRational`], which keeps
//! numerator and denominator coprime with a positive denominator.

pub mod budget;
mod format;
mod poly;
mod ratfunc;
mod univariate;

pub use format::parse_bigrational;
pub use num_rational::BigRational;
pub use poly::{Monomial, MultiPoly, Var};
pub use ratfunc::RatFunc;
pub use univariate::UniPoly;

pub(crate) use ratfunc::binomial;

/// Shorthand for the rational `n/d`.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
