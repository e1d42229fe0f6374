//! Coefficient traits.
//!
//! Polynomials are generic over their coefficient type. [`Ring`] is enough for
//! the arithmetic and the Jacobian; [`Scalar`] adds field division and is what
//! the weight/Newton machinery needs. The exact pipeline runs on
//! [`Rational`](crate::Rational); the approximate Puiseux continuation runs on
//! `Complex<f64>`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Commutative ring with identity.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// A coefficient field.
pub trait Scalar: Ring + Div<Output = Self> + Send + Sync {
    /// Whether equality on this type is exact.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    /// Absolute value as a float, used for pruning approximate cancellation.
    fn magnitude(&self) -> f64;

    /// `true` when the value should be treated as zero relative to `scale`.
    ///
    /// Exact types only ever answer `is_zero()`.
    fn negligible(&self, scale: f64) -> bool;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }

    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

/// Relative threshold under which approximate coefficients are dropped.
pub const APPROX_REL_TOL: f64 = 1e-10;

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= APPROX_REL_TOL * scale.max(1.0)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= APPROX_REL_TOL * scale.max(1.0)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // huge numerator and denominator can both overflow while the ratio is fine
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let (num, den): (BigInt, BigInt) = if shift > 0 {
            (r.numer().clone(), r.denom().clone() << (shift as usize))
        } else {
            (r.numer().clone() << ((-shift) as usize), r.denom().clone())
        };
        let q = BigRational::new(num, den).to_f64().unwrap_or(f64::NAN);
        q * 2f64.powi(shift as i32)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    const _: () = assert!(<BigRational as Scalar>::EXACT && !<Complex64 as Scalar>::EXACT);

    #[test]
    fn negligible_is_relative_for_floats() {
        assert!(Complex64::new(1e-13, 0.0).negligible(10.0));
        assert!(!Complex64::new(1e-3, 0.0).negligible(10.0));
        assert!(!rat(1, 1000000).negligible(1e9));
    }

    #[test]
    fn big_ratio_converts() {
        let big = BigRational::new(BigInt::from(3) << 2000usize, BigInt::from(2) << 2000usize);
        assert!((rational_to_f64(&big) - 1.5).abs() < 1e-12);
    }
}
