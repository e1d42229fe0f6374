//! Polynomials with rational exponents in the four variables `x, y, F, G`.

pub mod dense;
mod monomial;
mod numbers;
mod poly;
pub mod upoly;

pub use monomial::{Monomial, Var, WeightVector};
pub use numbers::{format_rational, lcm_denominators, rational_pow, rational_root};
pub use poly::{jacobian, Poly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("non-integral composition: {var} occurs with exponent {exponent}")]
    NonIntegralComposition { var: Var, exponent: String },
    #[error("degree of zero")]
    DegreeOfZero,
    #[error("weight vector is zero")]
    ZeroWeight,
    #[error("evaluation undefined: {0}")]
    Evaluation(String),
    #[error("fractional power of a non-monomial polynomial")]
    FractionalPower,
}
