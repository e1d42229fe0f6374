//! Dense polynomials in one main variable over `Z[x]`.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::upoly::UPoly;
use super::Var;
use crate::{FracPoly, Rational};

pub type ZPoly = UPoly<BigInt>;

/// `sum_k c_k(x) t^k` with `c_k in Z[x]`; the main variable `t` is chosen by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZxPoly {
    coeffs: Vec<ZPoly>,
}

impl ZxPoly {
    pub fn new(mut coeffs: Vec<ZPoly>) -> Self {
        while coeffs.last().is_some_and(ZPoly::is_zero) {
            coeffs.pop();
        }
        ZxPoly { coeffs }
    }

    pub fn zero() -> Self {
        ZxPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ZPoly::constant(BigInt::from(1)))
    }

    pub fn constant(c: ZPoly) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> ZPoly {
        self.coeffs.last().cloned().unwrap_or_else(ZPoly::zero)
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    pub fn scale(&self, k: &ZPoly) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn div_exact(&self, k: &ZPoly) -> Option<Self> {
        self.coeffs
            .iter()
            .map(|c| c.div_exact(k))
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Converts a polynomial in `x` and `main` with nonnegative integer exponents
    /// and integer coefficients. Returns `None` otherwise or if other variables occur.
    pub fn from_frac(p: &FracPoly, main: Var) -> Option<Self> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (m, c) in p.terms() {
            if !c.is_integer() {
                return None;
            }
            for (v, _) in m.support() {
                if v != Var::X && v != main {
                    return None;
                }
            }
            if !m.is_polynomial_in(Var::X) || !m.is_polynomial_in(main) {
                return None;
            }
            let i = m.exp(Var::X).to_integer().to_usize()?;
            let j = m.exp(main).to_integer().to_usize()?;
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, BigInt::zero());
            }
            rows[j][i] += c.numer();
        }
        Some(Self::new(rows.into_iter().map(ZPoly::new).collect()))
    }

    pub fn to_frac(&self, main: Var) -> FracPoly {
        let mut out = FracPoly::zero();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let m = crate::Monomial::one()
                    .with(Var::X, crate::int(i as i64))
                    .with(main, crate::int(j as i64));
                out.add_term(m, Rational::from_integer(c.clone()));
            }
        }
        out
    }

    /// Evaluates `sum c_k(x) t^k` at `t = q` (Horner).
    pub fn compose(&self, q: &ZxPoly) -> ZxPoly {
        self.coeffs.iter().rev().fold(ZxPoly::zero(), |acc, c| {
            &(&acc * q) + &ZxPoly::constant(c.clone())
        })
    }

    pub fn leading_sign_negative(&self) -> bool {
        self.lc().lc().is_negative()
    }
}

impl Add<&ZxPoly> for &ZxPoly {
    type Output = ZxPoly;
    fn add(self, rhs: &ZxPoly) -> ZxPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ZPoly::zero();
        ZxPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Sub<&ZxPoly> for &ZxPoly {
    type Output = ZxPoly;
    fn sub(self, rhs: &ZxPoly) -> ZxPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ZPoly::zero();
        ZxPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Mul<&ZxPoly> for &ZxPoly {
    type Output = ZxPoly;
    fn mul(self, rhs: &ZxPoly) -> ZxPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZxPoly::zero();
        }
        let mut out = vec![ZPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ZxPoly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_poly;

    #[test]
    fn round_trip_through_frac() {
        let p = parse_poly("3*x^2*y - y^3 + 1 + x").unwrap();
        let d = ZxPoly::from_frac(&p, Var::Y).unwrap();
        assert_eq!(d.degree(), Some(3));
        assert_eq!(d.to_frac(Var::Y), p);
        assert!(ZxPoly::from_frac(&parse_poly("x^(1/2)").unwrap(), Var::Y).is_none());
        assert!(ZxPoly::from_frac(&parse_poly("1/2*y").unwrap(), Var::Y).is_none());
    }

    #[test]
    fn compose_matches_sparse_substitution() {
        let p = parse_poly("y^2 + x*y + 1").unwrap();
        let q = parse_poly("x + y^2").unwrap();
        let dp = ZxPoly::from_frac(&p, Var::Y).unwrap();
        let dq = ZxPoly::from_frac(&q, Var::Y).unwrap();
        let sparse = p.substitute(&[(Var::Y, q)]).unwrap();
        assert_eq!(dp.compose(&dq).to_frac(Var::Y), sparse);
    }
}
