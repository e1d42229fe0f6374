//! Exact Newton-polygon machinery for pairs of plane polynomials.
//!
//! The crate covers:
//!
//! * [`algebra`]: polynomials with rational exponents over a generic
//!   coefficient type, Jacobians, substitution, weight degrees and leading forms;
//! * [`geometry`]: exact 2D/3D convex hulls with faces and outward normals, plus
//!   the Newton-polygon shape predicates used by the auditor;
//! * [`puiseux`]: Newton–Puiseux branches of `p(x, y) = 0`;
//! * [`series`]: asymptotic series in descending powers of `y`, fractional powers
//!   and the expansion of `g` in rational powers of `f`;
//! * [`dependence`]: the standard-monomial reduction giving the irreducible
//!   relation `P(x, F, G)` between `f` and `g` over `Q(x)`;
//! * [`audit`]: bounds and shape checks on a candidate Jacobian pair;
//! * [`cli`]: expression parsing, printing and the command front end.

pub mod algebra;
pub mod audit;
pub mod cli;
pub mod dependence;
pub mod geometry;
pub mod puiseux;
pub mod scalar;
pub mod series;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Polynomial with rational exponents and exact rational coefficients.
pub type FracPoly = algebra::Poly<Rational>;

/// Polynomial with rational exponents and floating complex coefficients.
pub type ApproxPoly = algebra::Poly<Complex64>;

pub use algebra::{Monomial, Poly, Var, WeightVector};
pub use scalar::{Ring, Scalar};

/// Shorthand for the rational `n / d`.
///
/// Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
