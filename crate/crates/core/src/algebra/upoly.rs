//! Dense univariate polynomials.
//!
//! Used for edge polynomials in the Newton process (over `Q` and `C`) and, over
//! `Z`, as the coefficient ring `Z[x]` of the dependence computation.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Ring, Scalar};

/// `c[0] + c[1] t + ... + c[d] t^d` with `c[d] != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> UPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![C::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(C::one());
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

    pub fn derivative(&self) -> Self {
        let mut k = C::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + C::one();
        }
        Self::new(out)
    }

    pub fn map<D: Ring>(&self, f: impl FnMut(&C) -> D) -> UPoly<D> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Ring> Add<&UPoly<C>> for &UPoly<C> {
    type Output = UPoly<C>;
    fn add(self, rhs: &UPoly<C>) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Ring> Sub<&UPoly<C>> for &UPoly<C> {
    type Output = UPoly<C>;
    fn sub(self, rhs: &UPoly<C>) -> UPoly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Ring> Neg for &UPoly<C> {
    type Output = UPoly<C>;
    fn neg(self) -> UPoly<C> {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<C: Ring> Mul<&UPoly<C>> for &UPoly<C> {
    type Output = UPoly<C>;
    fn mul(self, rhs: &UPoly<C>) -> UPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }
}

impl<C: Scalar> UPoly<C> {
    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &UPoly<C>) -> (UPoly<C>, UPoly<C>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone() / lc.clone();
            if q.is_zero() {
                continue;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * c.clone();
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn monic(&self) -> UPoly<C> {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc();
        UPoly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
    }

    /// Monic gcd (exact types only give meaningful answers).
    pub fn gcd(&self, other: &UPoly<C>) -> UPoly<C> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `[(s_1, 1), (s_2, 2), ...]` with
    /// `self = lc * prod s_k^k`, each `s_k` monic and square-free. Trivial factors omitted.
    pub fn squarefree(&self) -> Vec<(UPoly<C>, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut dd = &c - &b.derivative();
        let mut k = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), k));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            dd = &c - &b.derivative();
            k += 1;
        }
        out
    }
}

/// Operations on `Z[x]`.
impl UPoly<BigInt> {
    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> UPoly<BigInt> {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a / &c).collect(),
        }
    }

    pub fn div_integer(&self, k: &BigInt) -> UPoly<BigInt> {
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a / k).collect(),
        }
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &UPoly<BigInt>) -> UPoly<BigInt> {
        let dd = d.degree().expect("nonzero divisor");
        let lc = d.lc();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let top = rem.len() - 1;
            let t = rem[top].clone();
            for r in rem.iter_mut() {
                *r *= &lc;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[top - dd + i] -= &t * c;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        UPoly::new(rem)
    }

    /// Gcd in `Z[x]`, normalized to positive leading coefficient.
    pub fn gcd_z(&self, other: &UPoly<BigInt>) -> UPoly<BigInt> {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return UPoly::constant(cont);
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont)
    }

    /// Exact quotient `self / d`; `None` if `d` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, d: &UPoly<BigInt>) -> Option<UPoly<BigInt>> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        let lc = d.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let (q, r) = rem[k + dd].div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return None;
        }
        Some(UPoly::new(quot))
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }
}
