use thiserror::Error;

use crate::exactcore::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("denominator vanishes identically under the substitution {var} -> {image}")]
    VanishingDenominator { var: Var, image: String },

    #[error("pole at {var} = {point}")]
    Pole { var: Var, point: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("term budget exceeded: {terms} terms > {budget}")]
    BudgetExceeded { terms: usize, budget: usize },

    #[error("p-adic division by a value indistinguishable from zero")]
    PadicZeroDivisor,

    #[error("insufficient p-adic precision: {0}")]
    Precision(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
