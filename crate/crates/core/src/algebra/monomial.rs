use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::Rational;

/// The four variables of the pipeline, in term-order priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
    F,
    G,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::F, Var::G];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::F => "F",
            Var::G => "G",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "F" => Some(Var::F),
            "G" => Some(Var::G),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over `(x, y, F, G)`. Ordered lexicographically in that order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial([Rational; 4]);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Self::one().with(v, Rational::one())
    }

    pub fn from_exponents(exps: [Rational; 4]) -> Self {
        Monomial(exps)
    }

    /// Builds `x^a y^b F^c G^d` from integer exponents.
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Monomial([a, b, c, d].map(crate::int))
    }

    pub fn exp(&self, v: Var) -> &Rational {
        &self.0[v.index()]
    }

    pub fn exponents(&self) -> &[Rational; 4] {
        &self.0
    }

    pub fn with(mut self, v: Var, e: Rational) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([0, 1, 2, 3].map(|i| &self.0[i] + &other.0[i]))
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial([0, 1, 2, 3].map(|i| &self.0[i] - &other.0[i]))
    }

    pub fn pow(&self, e: &Rational) -> Monomial {
        Monomial([0, 1, 2, 3].map(|i| &self.0[i] * e))
    }

    /// Variables with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = (Var, &Rational)> {
        Var::ALL
            .into_iter()
            .filter(|v| !self.0[v.index()].is_zero())
            .map(|v| (v, &self.0[v.index()]))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|e| e.is_integer())
    }

    /// Whether `v` has a nonnegative integer exponent.
    pub fn is_polynomial_in(&self, v: Var) -> bool {
        let e = self.exp(v);
        e.is_integer() && !e.is_negative()
    }

    pub fn weight(&self, w: &WeightVector) -> Rational {
        self.0
            .iter()
            .zip(w.0.iter())
            .fold(Rational::zero(), |acc, (e, a)| acc + e * a)
    }
}

/// Weights attached to the variables; the weight of a monomial is the dot product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct WeightVector([Rational; 4]);

impl WeightVector {
    pub fn new(entries: &[(Var, Rational)]) -> Self {
        let mut w = WeightVector::default();
        for (v, a) in entries {
            w.0[v.index()] = a.clone();
        }
        w
    }

    /// Integer weights, convenient in tests and the CLI.
    pub fn ints(entries: &[(Var, i64)]) -> Self {
        let mut w = WeightVector::default();
        for &(v, a) in entries {
            w.0[v.index()] = crate::int(a);
        }
        w
    }

    pub fn get(&self, v: Var) -> &Rational {
        &self.0[v.index()]
    }

    pub fn set(&mut self, v: Var, a: Rational) {
        self.0[v.index()] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("(")?;
        for v in Var::ALL {
            let a = self.get(v);
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{v}:{a}")?;
        }
        f.write_str(")")
    }
}
