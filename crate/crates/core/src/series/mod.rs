//! Asymptotic series in descending integer powers of `y` with Laurent
//! coefficients in fractional powers of `x`.
//!
//! Every series carries a floor: terms at `y`-exponents at or below the floor
//! are unknown. `floor = None` means the series is known exactly.

mod expand;

pub use expand::{
    conjugate_roots, expand_g_in_f, ConjugateSeries, ExpansionMode, ExpansionOptions,
    ExpansionResult, ExpansionStatus,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{format_rational, rational_pow};
use crate::{FracPoly, Monomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("zero series has no leading term")]
    ZeroSeries,
    #[error("radical of non-monomial leading term")]
    NonMonomialLeading,
    #[error("power {0} of the leading coefficient is not rational")]
    IrrationalCoefficient(String),
    #[error("y-exponent {0} is not integral")]
    FractionalYExponent(String),
    #[error("input must be a polynomial in x and y with integer y-exponents")]
    BadInput,
    #[error("J(f, g) = {0}, not 1")]
    NotJacobianPair(String),
    #[error("leading term of f must be a monomial x^m y^n with n >= 1")]
    BadLeadingTerm,
    #[error("non-unimodular obstruction: J(|f|, |g_i|) = {0}")]
    NonUnimodular(String),
    #[error("nonzero c_kappa = {0} with m > 0")]
    NonzeroCKappa(String),
    #[error("phase order {0} does not match the exponent lattice")]
    LatticeMismatch(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymSeries {
    /// `y`-exponent to coefficient in `x`; no zero coefficients.
    terms: BTreeMap<i64, FracPoly>,
    floor: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm {
    pub coeff: FracPoly,
    pub yexp: i64,
}

impl LeadingTerm {
    pub fn to_json(&self) -> Value {
        json!({"coeff": self.coeff.to_string(), "yexp": self.yexp})
    }

    pub fn as_series(&self) -> AsymSeries {
        AsymSeries::monomial(self.coeff.clone(), self.yexp)
    }
}

fn above(floor: Option<i64>, k: i64) -> bool {
    floor.is_none_or(|f| k > f)
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl AsymSeries {
    pub fn zero(floor: Option<i64>) -> Self {
        AsymSeries {
            terms: BTreeMap::new(),
            floor,
        }
    }

    pub fn monomial(coeff: FracPoly, yexp: i64) -> Self {
        let mut s = Self::zero(None);
        s.add_coeff(yexp, coeff);
        s
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(FracPoly::constant(c), 0)
    }

    /// A polynomial in `x, y` (integer `y`-exponents) as a series truncated at `floor`.
    pub fn from_poly(p: &FracPoly, floor: Option<i64>) -> Result<Self, SeriesError> {
        let mut s = Self::zero(floor);
        for (e, c) in p.collect(Var::Y) {
            if c.uses(Var::F) || c.uses(Var::G) || c.uses(Var::Y) {
                return Err(SeriesError::BadInput);
            }
            if !e.is_integer() {
                return Err(SeriesError::FractionalYExponent(e.to_string()));
            }
            let k = e.to_integer().to_i64().ok_or(SeriesError::BadInput)?;
            s.add_coeff(k, c);
        }
        Ok(s)
    }

    /// Back to a polynomial (exact only above the floor).
    pub fn to_poly(&self) -> FracPoly {
        let mut out = FracPoly::zero();
        for (k, c) in &self.terms {
            out = out
                + c.mul_monomial(
                    &Rational::one(),
                    &Monomial::var(Var::Y).pow(&Rational::from_integer(BigInt::from(*k))),
                );
        }
        out
    }

    fn add_coeff(&mut self, k: i64, c: FracPoly) {
        if !above(self.floor, k) || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(FracPoly::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn top(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i64) -> Option<&FracPoly> {
        self.terms.get(&k)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&i64, &FracPoly)> {
        self.terms.iter()
    }

    /// Lcm of the denominators of the `x`-exponents.
    pub fn ramification(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            for m in c.support() {
                l = l.lcm(m.exp(Var::X).denom());
            }
        }
        l
    }

    /// `|a| = y_k y^k`.
    pub fn leading_term(&self) -> Result<LeadingTerm, SeriesError> {
        let (k, c) = self
            .terms
            .iter()
            .next_back()
            .ok_or(SeriesError::ZeroSeries)?;
        Ok(LeadingTerm {
            coeff: c.clone(),
            yexp: *k,
        })
    }

    /// Drops everything at or below `floor` (keeps the higher of the two floors).
    pub fn truncate(&self, floor: Option<i64>) -> Self {
        let floor = max_floor(self.floor, floor);
        AsymSeries {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| above(floor, **k))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            floor,
        }
    }

    pub fn scale(&self, c: &FracPoly) -> Self {
        let mut out = Self::zero(self.floor);
        for (k, a) in &self.terms {
            out.add_coeff(*k, a * c);
        }
        out
    }

    /// Multiplies by `c * y^shift`, moving the floor with it.
    pub fn mul_term(&self, c: &FracPoly, shift: i64) -> Self {
        let mut out = Self::zero(self.floor.map(|f| f + shift));
        for (k, a) in &self.terms {
            out.add_coeff(k + shift, a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(max_floor(self.floor, other.floor));
        for (k, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_coeff(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        AsymSeries {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; unknown terms of one factor times the top of the other bound the result floor.
    pub fn mul(&self, other: &Self) -> Self {
        // an unknown tail of one factor meets at most the top (or the floor) of the other
        let bound = |f: Option<i64>, o: &Self| f.and_then(|f| o.top().or(o.floor).map(|t| f + t));
        let floor = max_floor(bound(self.floor, other), bound(other.floor, self));
        let mut out = Self::zero(floor);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if above(floor, i + j) {
                    out.add_coeff(i + j, a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        let mut out = Self::zero(self.floor);
        for (k, c) in &self.terms {
            out.add_coeff(*k, c.derivative(Var::X));
        }
        out
    }

    pub fn derivative_y(&self) -> Self {
        let mut out = Self::zero(self.floor.map(|f| f - 1));
        for (k, c) in &self.terms {
            if *k != 0 {
                out.add_coeff(k - 1, c.scale(&Rational::from_integer(BigInt::from(*k))));
            }
        }
        out
    }

    /// Equality of all terms above both floors.
    pub fn eq_mod_floor(&self, other: &Self) -> bool {
        let f = max_floor(self.floor, other.floor);
        self.truncate(f).terms == other.truncate(f).terms
    }

    pub fn to_json(&self) -> Value {
        json!({
            "floor": self.floor,
            "terms": self.terms.iter().rev().map(|(k, c)| json!({"coeff": c.to_string(), "yexp": k})).collect::<Vec<_>>(),
        })
    }
}

/// `J(a, b) = a_x b_y - a_y b_x`, termwise with floors.
pub fn jac_series(a: &AsymSeries, b: &AsymSeries) -> AsymSeries {
    a.derivative_x()
        .mul(&b.derivative_y())
        .sub(&a.derivative_y().mul(&b.derivative_x()))
}

/// Generalized binomial coefficient `binom(r, j)`.
pub fn binomial(r: &Rational, j: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc = acc * (r - Rational::from_integer(BigInt::from(i)))
            / Rational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// `a^r = |a|^r * sum_j binom(r, j) u^j` with `u = (a - |a|)/|a|`, truncated above `floor`.
///
/// Requires `|a| = c x^l y^k` with `r k` integral and `c^r` rational.
pub fn binomial_power(a: &AsymSeries, r: &Rational, floor: i64) -> Result<AsymSeries, SeriesError> {
    let lead = a.leading_term()?;
    let (c, mono) = lead
        .coeff
        .as_monomial()
        .ok_or(SeriesError::NonMonomialLeading)?;
    let rk = r * Rational::from_integer(BigInt::from(lead.yexp));
    if !rk.is_integer() {
        return Err(SeriesError::FractionalYExponent(rk.to_string()));
    }
    let rk = rk.to_integer().to_i64().ok_or(SeriesError::BadInput)?;
    let cr = rational_pow(c, r)
        .ok_or_else(|| SeriesError::IrrationalCoefficient(format!("({c})^({r})")))?;
    let inv = Monomial::one().div(mono);
    let inv_c = Rational::one() / c;

    // u has top <= -1; the result needs u-terms above floor - rk
    let rel_floor = floor - rk;
    let mut u = AsymSeries::zero(a.floor.map(|f| f - lead.yexp));
    for (k, y) in a.terms.iter().filter(|(k, _)| **k < lead.yexp) {
        u.add_coeff(k - lead.yexp, y.mul_monomial(&inv_c, &inv));
    }
    let u = u.truncate(Some(rel_floor));
    let mut sum = AsymSeries::constant(Rational::one()).truncate(Some(rel_floor));
    let mut power = AsymSeries::constant(Rational::one());
    let mut j = 0u64;
    loop {
        j += 1;
        if (j as i64) >= rk - floor || u.is_zero() && u.floor.is_none() {
            break;
        }
        power = power.mul(&u).truncate(Some(rel_floor));
        if power.is_zero() && power.floor.is_none() {
            break;
        }
        let b = binomial(r, j);
        sum = sum.add(&power.scale(&FracPoly::constant(b)));
    }
    let coeff = FracPoly::term(cr, mono.pow(r));
    Ok(sum.mul_term(&coeff, rk).truncate(Some(floor)))
}

/// JSON array of `num/den` strings.
pub(crate) fn rational_list(v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_poly;
    use crate::{int, rat};

    fn s(text: &str, floor: Option<i64>) -> AsymSeries {
        AsymSeries::from_poly(&parse_poly(text).unwrap(), floor).unwrap()
    }

    #[test]
    fn leading_terms() {
        let a = s("y^2 + x", None);
        assert_eq!(
            a.leading_term().unwrap(),
            LeadingTerm {
                coeff: FracPoly::one(),
                yexp: 2
            }
        );
        let b = s("-1/2*x*y^(-1) + y^(-3)", Some(-10));
        assert_eq!(
            b.leading_term().unwrap().coeff,
            parse_poly("-1/2*x").unwrap()
        );
        assert_eq!(b.leading_term().unwrap().yexp, -1);
        let c = s("x^3*y^5 + x*y^5", None);
        assert_eq!(
            c.leading_term().unwrap().coeff,
            parse_poly("x^3 + x").unwrap()
        );
        assert_eq!(
            AsymSeries::zero(None).leading_term(),
            Err(SeriesError::ZeroSeries)
        );
    }

    #[test]
    fn square_root_of_y2_plus_x() {
        let a = s("y^2 + x", None);
        let r = binomial_power(&a, &rat(1, 2), -4).unwrap();
        assert_eq!(
            r.to_poly(),
            parse_poly("y + 1/2*x*y^(-1) - 1/8*x^2*y^(-3)").unwrap()
        );
        assert_eq!(r.floor(), Some(-4));
        // squaring gives back a up to the floor
        assert!(r.mul(&r).eq_mod_floor(&a));
    }

    #[test]
    fn simple_powers() {
        let a = s("y^3 - 2*x*y + x^2", None);
        assert!(binomial_power(&a, &int(1), -6).unwrap().eq_mod_floor(&a));
        let m = s("y^2", None);
        assert_eq!(
            binomial_power(&m, &rat(3, 2), -5).unwrap().to_poly(),
            parse_poly("y^3").unwrap()
        );
        assert_eq!(
            binomial_power(&s("x*y^3", None), &rat(1, 2), -3),
            Err(SeriesError::FractionalYExponent("3/2".into()))
        );
        assert_eq!(
            binomial_power(&s("(x+1)*y^2", None), &rat(1, 2), -3),
            Err(SeriesError::NonMonomialLeading)
        );
    }

    #[test]
    fn jacobian_examples() {
        let one = AsymSeries::constant(int(1));
        let j = jac_series(&s("y^2", None), &s("-1/2*x*y^(-1)", None));
        assert_eq!(j.to_poly(), one.to_poly());
        let a = s("x*y^3 + y", Some(-3));
        assert!(jac_series(&a, &a).is_zero());
        let (m, n) = (2, 5);
        let f = s("x^2*y^5", None);
        let g = AsymSeries::monomial(
            FracPoly::term(rat(1, m - n), Monomial::var(Var::X).pow(&int(1 - m))),
            1 - n,
        );
        assert_eq!(jac_series(&f, &g).to_poly(), FracPoly::one());
    }

    #[test]
    fn product_floor() {
        let a = s("y^2 + x", Some(-2));
        let b = s("y + 1", Some(-1));
        let p = a.mul(&b);
        assert_eq!(p.floor(), Some(1));
        assert_eq!(p.to_poly(), parse_poly("y^3 + y^2").unwrap());
    }
}
