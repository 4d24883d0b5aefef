//! Exact Carlitz q-Bernoulli and degenerate Carlitz q-Bernoulli polynomials.
//!
//! Every value is a rational function in three indeterminates: the base `q`,
//! the degeneracy parameter `L` (λ), and `Q`, which stands for `q^x`. With
//! that encoding `[x]_q = (1 - Q)/(1 - q)` and all identities between the
//! families become exact rational-function identities, which [`verify`]
//! checks on parameter grids. [`padic`] provides an independent numeric check
//! through finite Riemann sums of the p-adic q-integral.

pub mod carlitz;
pub mod degenerate;
pub mod error;
pub mod exactcore;
pub mod padic;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use exactcore::{MultiPoly, RatFunc, Var};
