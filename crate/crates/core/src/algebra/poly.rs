use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var, WeightVector};
use super::AlgebraError;
use crate::scalar::{Ring, Scalar};
use crate::Rational;

/// Finite sum of monomials with rational exponents.
///
/// Terms are kept in a `BTreeMap` keyed by [`Monomial`], so iteration follows the
/// lexicographic `(x, y, F, G)` order and zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Ring> Poly<C> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    /// The support as a list of monomials.
    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// `Some(c)` if the polynomial is the constant `c` (or zero).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `Some((c, m))` if the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&C, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone())),
        )
    }

    pub fn mul_monomial(&self, c: &C, mono: &Monomial) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, a)| (m.mul(mono), a.clone() * c.clone())),
        )
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

    /// Largest exponent of `v` in the support.
    pub fn degree(&self, v: Var) -> Option<Rational> {
        self.terms.keys().map(|m| m.exp(v).clone()).max()
    }

    /// Smallest exponent of `v` in the support.
    pub fn min_degree(&self, v: Var) -> Option<Rational> {
        self.terms.keys().map(|m| m.exp(v).clone()).min()
    }

    /// Integer degree in `v`, 0 for the zero polynomial. Panics on fractional degrees.
    pub fn deg_int(&self, v: Var) -> i64 {
        use num_traits::ToPrimitive;
        self.degree(v)
            .map(|d| {
                assert!(d.is_integer(), "fractional degree in {v}");
                d.to_integer().to_i64().expect("degree fits i64")
            })
            .unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|m| !m.exp(v).is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(Monomial::is_integral)
    }

    /// Groups terms by the exponent of `v`; each group has `v` removed.
    pub fn collect(&self, v: Var) -> BTreeMap<Rational, Poly<C>> {
        let mut out: BTreeMap<Rational, Poly<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v).clone();
            let rest = m.clone().with(v, Rational::zero());
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Coefficient of `v^e`, as a polynomial in the other variables.
    pub fn coefficient_of(&self, v: Var, e: &Rational) -> Poly<C> {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) == e)
                .map(|(m, c)| (m.clone().with(v, Rational::zero()), c.clone())),
        )
    }

    pub fn map_coeffs<D: Ring>(&self, mut f: impl FnMut(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Monomial) -> Poly<C> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Exact composition `p(v_i -> q_i)`.
    ///
    /// Every substituted variable must occur with nonnegative integer exponents.
    pub fn substitute(&self, bindings: &[(Var, Poly<C>)]) -> Result<Poly<C>, AlgebraError> {
        for m in self.terms.keys() {
            for (v, _) in bindings {
                if !m.is_polynomial_in(*v) {
                    return Err(AlgebraError::NonIntegralComposition {
                        var: *v,
                        exponent: m.exp(*v).to_string(),
                    });
                }
            }
        }
        let mut cache: Vec<Vec<Poly<C>>> = bindings
            .iter()
            .map(|(_, q)| vec![Self::one(), q.clone()])
            .collect();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut prod = Self::one();
            for (k, (v, _)) in bindings.iter().enumerate() {
                let e = exponent_usize(m.exp(*v));
                rest = rest.with(*v, Rational::zero());
                let powers = &mut cache[k];
                while powers.len() <= e {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                if e > 0 {
                    prod = &prod * &powers[e];
                }
            }
            out = out + prod.mul_monomial(c, &rest);
        }
        Ok(out)
    }

    /// `deg_w(p) = max w(mu)` over the support.
    pub fn weight_degree(&self, w: &WeightVector) -> Result<Rational, AlgebraError> {
        self.terms
            .keys()
            .map(|m| m.weight(w))
            .max()
            .ok_or(AlgebraError::DegreeOfZero)
    }

    /// Sum of the terms of maximal weight.
    pub fn leading_form(&self, w: &WeightVector) -> Result<Poly<C>, AlgebraError> {
        let top = self.weight_degree(w)?;
        Ok(Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.weight(w) == top)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }

    /// Sum of the terms of minimal weight.
    pub fn trailing_form(&self, w: &WeightVector) -> Result<Poly<C>, AlgebraError> {
        let bottom = self
            .terms
            .keys()
            .map(|m| m.weight(w))
            .min()
            .ok_or(AlgebraError::DegreeOfZero)?;
        Ok(Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.weight(w) == bottom)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }
}

fn exponent_usize(e: &Rational) -> usize {
    use num_traits::ToPrimitive;
    e.to_integer()
        .to_usize()
        .expect("validated nonnegative integer exponent")
}

impl<C: Scalar> Poly<C> {
    pub fn from_rational(p: &Poly<Rational>) -> Self {
        p.map_coeffs(C::from_rational)
    }

    /// Formal partial derivative; `d(t^r) = r t^(r-1)` for rational `r`.
    pub fn derivative(&self, v: Var) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| !m.exp(v).is_zero())
                .map(|(m, c)| {
                    let e = m.exp(v).clone();
                    let coeff = c.clone() * C::from_rational(&e);
                    (m.clone().with(v, e - Rational::one()), coeff)
                }),
        )
    }

    /// Drops coefficients that are negligible relative to the largest one.
    ///
    /// A no-op for exact coefficient types.
    pub fn prune(&self) -> Self {
        if C::EXACT {
            return self.clone();
        }
        let scale = self
            .terms
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max);
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(_, c)| !c.negligible(scale))
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Evaluates at rational points for variables with integer exponents.
    pub fn eval(&self, values: &[(Var, C)]) -> Result<Poly<C>, AlgebraError> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = m.clone();
            for (v, val) in values {
                let e = m.exp(*v);
                if !e.is_integer() {
                    return Err(AlgebraError::Evaluation(format!(
                        "fractional exponent of {v}"
                    )));
                }
                rest = rest.with(*v, Rational::zero());
                use num_traits::ToPrimitive;
                let k = e
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| AlgebraError::Evaluation("exponent overflow".into()))?;
                let mag = num_traits::pow(val.clone(), k.unsigned_abs() as usize);
                if k < 0 {
                    if val.is_zero() {
                        return Err(AlgebraError::Evaluation(format!(
                            "{v} = 0 in a negative power"
                        )));
                    }
                    coeff = coeff / mag;
                } else {
                    coeff = coeff * mag;
                }
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }
}

/// `J(p, q) = dp/du * dq/dv - dp/dv * dq/du`.
pub fn jacobian<C: Scalar>(p: &Poly<C>, q: &Poly<C>, u: Var, v: Var) -> Poly<C> {
    &(&p.derivative(u) * &q.derivative(v)) - &(&p.derivative(v) * &q.derivative(u))
}

impl<C: Ring> Add<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Ring> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(mut self, rhs: Poly<C>) -> Poly<C> {
        if self.terms.len() < rhs.terms.len() {
            return rhs + self;
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Ring> Sub<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Ring> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Poly<C>) -> Poly<C> {
        &self - &rhs
    }
}

impl<C: Ring> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<C: Ring> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -&self
    }
}

impl<C: Ring> Mul<&Poly<C>> for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Ring> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Poly<C>) -> Poly<C> {
        &self * &rhs
    }
}

impl<C: Ring> Zero for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring> One for Poly<C> {
    fn one() -> Self {
        Poly::one()
    }
}

/// Display key: descending in `G`, then `F`, then `y`, then `x`.
fn display_key(m: &Monomial) -> [Rational; 4] {
    [Var::G, Var::F, Var::Y, Var::X].map(|v| m.exp(v).clone())
}

fn write_power(out: &mut String, v: Var, e: &Rational) {
    out.push_str(v.name());
    if e.is_one() {
        return;
    }
    if e.is_integer() && e.is_positive() {
        out.push('^');
        out.push_str(&e.numer().to_string());
    } else {
        out.push_str("^(");
        out.push_str(&e.to_string());
        out.push(')');
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|t| std::cmp::Reverse(display_key(t.0)));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for (v, e) in m.support() {
                let mut s = String::new();
                write_power(&mut s, v, e);
                factors.push(s);
            }
            out.push_str(&factors.join("*"));
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat, FracPoly};

    fn x() -> FracPoly {
        FracPoly::var(Var::X)
    }
    fn y() -> FracPoly {
        FracPoly::var(Var::Y)
    }
    fn c(n: i64) -> FracPoly {
        FracPoly::constant(int(n))
    }

    #[test]
    fn exponent_addition() {
        assert_eq!(&y().pow(2) * &y().pow(3), y().pow(5));
    }

    #[test]
    fn additive_inverse_is_canonical_zero() {
        let p = &x() + &y();
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn square_of_binomial() {
        let p = (&y() + &c(1)).pow(2);
        let expected = &(&y().pow(2) + &y().scale(&int(2))) + &c(1);
        assert_eq!(p, expected);
        let at2 = p.eval(&[(Var::Y, int(2))]).unwrap();
        assert_eq!(at2.as_constant(), Some(int(9)));
    }

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian(&(&x() + &y().pow(2)), &y(), Var::X, Var::Y), c(1));
        let p = &x().pow(2) + &(&x() * &y());
        assert!(jacobian(&p, &p, Var::X, Var::Y).is_zero());
        assert_eq!(jacobian(&y(), &x(), Var::X, Var::Y), c(-1));
    }

    #[test]
    fn fractional_derivative() {
        let p = FracPoly::term(int(1), Monomial::one().with(Var::X, rat(1, 2)));
        let d = p.derivative(Var::X);
        assert_eq!(
            d,
            FracPoly::term(rat(1, 2), Monomial::one().with(Var::X, rat(-1, 2)))
        );
    }

    #[test]
    fn substitution_examples() {
        let f = FracPoly::var(Var::F);
        let g = FracPoly::var(Var::G);
        let p = &g.pow(2) - &f.pow(3);
        let r = p
            .substitute(&[(Var::F, y().pow(2)), (Var::G, y().pow(3))])
            .unwrap();
        assert!(r.is_zero());

        let p = &(&f - &x()) - &g.pow(2);
        let r = p
            .substitute(&[(Var::F, &x() + &y().pow(2)), (Var::G, y())])
            .unwrap();
        assert!(r.is_zero());

        assert_eq!(f.substitute(&[(Var::F, f.clone())]).unwrap(), f);
    }

    #[test]
    fn substitution_rejects_fractional_exponent() {
        let p = FracPoly::term(int(1), Monomial::one().with(Var::F, rat(1, 2)));
        let err = p.substitute(&[(Var::F, y())]).unwrap_err();
        assert!(err.to_string().contains("non-integral composition"));
    }

    #[test]
    fn weight_degrees_and_leading_forms() {
        let p = &(&x().pow(3) + &y().pow(2)) + &(&x() * &y());
        let w11 = WeightVector::ints(&[(Var::X, 1), (Var::Y, 1)]);
        let w01 = WeightVector::ints(&[(Var::X, 0), (Var::Y, 1)]);
        assert_eq!(p.weight_degree(&w11).unwrap(), int(3));
        assert_eq!(p.weight_degree(&w01).unwrap(), int(2));
        assert_eq!(p.leading_form(&w01).unwrap(), y().pow(2));
        assert_eq!(x().leading_form(&w11).unwrap(), x());

        let f = FracPoly::var(Var::F);
        let g = FracPoly::var(Var::G);
        let q = &(&f - &x()) - &g.pow(2);
        let w = WeightVector::ints(&[(Var::X, 0), (Var::F, 2), (Var::G, 1)]);
        assert_eq!(q.weight_degree(&w).unwrap(), int(2));
        assert_eq!(q.leading_form(&w).unwrap(), &f - &g.pow(2));
    }

    #[test]
    fn degree_of_zero_is_an_error() {
        let w = WeightVector::ints(&[(Var::X, 1)]);
        assert_eq!(
            FracPoly::zero().weight_degree(&w),
            Err(AlgebraError::DegreeOfZero)
        );
        assert!(FracPoly::zero().leading_form(&w).is_err());
    }

    #[test]
    fn display_order() {
        let f = FracPoly::var(Var::F);
        let g = FracPoly::var(Var::G);
        let p = &(&(&g.pow(2) - &f.pow(3)) - &f.pow(2).scale(&int(2))) - &f;
        assert_eq!(p.to_string(), "G^2 - F^3 - 2*F^2 - F");
        let q = FracPoly::term(rat(3, 2), Monomial::from_ints(2, 1, 0, 0)) - y().pow(3) + c(1);
        assert_eq!(q.to_string(), "-y^3 + 3/2*x^2*y + 1");
        let r = FracPoly::term(int(1), Monomial::one().with(Var::X, rat(-1, 2)));
        assert_eq!(r.to_string(), "x^(-1/2)");
    }
}
