//! Expansion of `g` in fractional powers of `f` driven by the Jacobian of leading terms.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use super::{binomial_power, jac_series, rational_list, AsymSeries, LeadingTerm, SeriesError};
use crate::algebra::{jacobian, rational_pow};
use crate::{FracPoly, Monomial, Rational, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionMode {
    /// Subtract rational multiples of powers of `f` until `J(|f|, |g_i|) = 1`.
    UntilUnimodular,
    /// Subtract `c_i(x) f^(k/n)` for every leading term, down to the floor.
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionStatus {
    TerminatedUnimodular,
    TerminatedZero,
    BudgetExhausted,
}

impl ExpansionStatus {
    pub fn name(self) -> &'static str {
        match self {
            ExpansionStatus::TerminatedUnimodular => "terminated-unimodular",
            ExpansionStatus::TerminatedZero => "terminated-zero",
            ExpansionStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExpansionOptions {
    pub mode: ExpansionMode,
    pub check_jacobian: bool,
    pub budget: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            mode: ExpansionMode::UntilUnimodular,
            check_jacobian: true,
            budget: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    pub lambdas: Vec<Rational>,
    /// Rational constants in the unimodular mode, Laurent polynomials in `x` otherwise.
    pub coeffs: Vec<FracPoly>,
    pub kappa: usize,
    pub remainder: Option<LeadingTerm>,
    pub status: ExpansionStatus,
    /// `|f| = lc * x^m * y^n`
    pub m: Rational,
    pub n: i64,
    pub lc: Rational,
    /// Homogeneous part of `|g_kappa|` (only possible for `m = 0`).
    pub c_kappa: Option<FracPoly>,
    /// The final series `g_kappa`.
    pub tail: AsymSeries,
}

impl ExpansionResult {
    /// `x^(1-m) / (lc (m - n))`, the leading coefficient expected for `g_kappa`.
    pub fn expected_remainder(&self) -> Option<LeadingTerm> {
        let n = Rational::from_integer(BigInt::from(self.n));
        if self.m == n {
            return None;
        }
        let c = Rational::one() / (&self.lc * (&self.m - &n));
        let x = Monomial::var(Var::X).pow(&(Rational::one() - &self.m));
        Some(LeadingTerm {
            coeff: FracPoly::term(c, x),
            yexp: 1 - self.n,
        })
    }

    pub fn formula_holds(&self) -> bool {
        self.status == ExpansionStatus::TerminatedUnimodular
            && self.remainder.is_some()
            && self.remainder == self.expected_remainder()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c_kappa": self.c_kappa.as_ref().map(|c| c.to_string()),
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "kappa": self.kappa,
            "lambdas": rational_list(&self.lambdas),
            "remainder": self.remainder.as_ref().map(LeadingTerm::to_json),
            "status": self.status.name(),
        })
    }
}

fn is_one(s: &AsymSeries) -> bool {
    s.to_poly() == FracPoly::one()
}

/// Writes `g = sum c_i f^(lambda_i) + g_kappa` up to terms at or below `floor`.
pub fn expand_g_in_f(
    f: &FracPoly,
    g: &FracPoly,
    floor: i64,
    opts: &ExpansionOptions,
) -> Result<ExpansionResult, SeriesError> {
    if opts.check_jacobian {
        let j = jacobian(f, g, Var::X, Var::Y);
        if j != FracPoly::one() {
            return Err(SeriesError::NotJacobianPair(j.to_string()));
        }
    }
    let fs = AsymSeries::from_poly(f, Some(floor))?;
    let lf = fs.leading_term()?;
    let (lc, mono) = lf.coeff.as_monomial().ok_or(SeriesError::BadLeadingTerm)?;
    if lf.yexp < 1 {
        return Err(SeriesError::BadLeadingTerm);
    }
    let (lc, m, n) = (lc.clone(), mono.exp(Var::X).clone(), lf.yexp);
    let nq = Rational::from_integer(BigInt::from(n));
    let abs_f = lf.as_series();

    let mut out = ExpansionResult {
        lambdas: Vec::new(),
        coeffs: Vec::new(),
        kappa: 0,
        remainder: None,
        status: ExpansionStatus::BudgetExhausted,
        m: m.clone(),
        n,
        lc: lc.clone(),
        c_kappa: None,
        tail: AsymSeries::zero(Some(floor)),
    };
    let mut gi = AsymSeries::from_poly(g, Some(floor))?;
    for _ in 0..opts.budget {
        if gi.is_zero() {
            out.status = ExpansionStatus::TerminatedZero;
            break;
        }
        let lead = gi.leading_term()?;
        let j = jac_series(&abs_f, &lead.as_series());
        let lambda = Rational::from_integer(BigInt::from(lead.yexp)) / &nq;
        let coeff = match opts.mode {
            ExpansionMode::UntilUnimodular if is_one(&j) => {
                out.status = ExpansionStatus::TerminatedUnimodular;
                let (rem, ck) = split_homogeneous(&lead, &m, n, &lc)?;
                out.remainder = Some(rem);
                out.c_kappa = ck;
                break;
            }
            ExpansionMode::UntilUnimodular => {
                if !j.is_zero() {
                    return Err(SeriesError::NonUnimodular(j.to_poly().to_string()));
                }
                // J = 0 forces |g_i| = d x^(m lambda) y^k
                let (d, _) = lead
                    .coeff
                    .as_monomial()
                    .ok_or_else(|| SeriesError::NonUnimodular(j.to_poly().to_string()))?;
                let lc_pow = rational_pow(&lc, &lambda).ok_or_else(|| {
                    SeriesError::IrrationalCoefficient(format!("({lc})^({lambda})"))
                })?;
                FracPoly::constant(d / lc_pow)
            }
            ExpansionMode::Complete => {
                let lc_pow = rational_pow(&lc, &lambda).ok_or_else(|| {
                    SeriesError::IrrationalCoefficient(format!("({lc})^({lambda})"))
                })?;
                let shift = Monomial::var(Var::X).pow(&-(&m * &lambda));
                lead.coeff.mul_monomial(&(Rational::one() / lc_pow), &shift)
            }
        };
        let power = binomial_power(&fs, &lambda, floor)?;
        let next = gi.sub(&power.scale(&coeff));
        assert!(
            next.top().is_none_or(|t| t < lead.yexp),
            "expansion step did not lower the y-degree"
        );
        out.lambdas.push(lambda);
        out.coeffs.push(coeff);
        gi = next;
    }
    out.kappa = out.lambdas.len();
    if out.status != ExpansionStatus::TerminatedUnimodular && !gi.is_zero() {
        out.remainder = gi.leading_term().ok();
    }
    out.tail = gi;
    Ok(out)
}

/// Splits `|g_kappa|` with `J(|f|, |g_kappa|) = 1` into the particular term
/// `x^(1-m)/(lc (m-n)) y^(1-n)` and a homogeneous part `c x^(m(1-n)/n)`.
fn split_homogeneous(
    lead: &LeadingTerm,
    m: &Rational,
    n: i64,
    lc: &Rational,
) -> Result<(LeadingTerm, Option<FracPoly>), SeriesError> {
    let nq = Rational::from_integer(BigInt::from(n));
    if lead.yexp != 1 - n || *m == nq {
        return Ok((lead.clone(), None));
    }
    let c = Rational::one() / (lc * (m - &nq));
    let particular = FracPoly::term(c, Monomial::var(Var::X).pow(&(Rational::one() - m)));
    let rest = &lead.coeff - &particular;
    if rest.is_zero() {
        return Ok((lead.clone(), None));
    }
    if m.is_positive() {
        // a homogeneous term would make m/n integral
        return Err(SeriesError::NonzeroCKappa(rest.to_string()));
    }
    Ok((
        LeadingTerm {
            coeff: particular,
            yexp: lead.yexp,
        },
        Some(rest),
    ))
}

/// One conjugate of a complete expansion: `F^(1/n) -> eps^j F^(1/n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateSeries {
    pub j: u64,
    pub n: u64,
    /// `(lambda_i, c_i, phase exponent)`; the term is `eps^phase c_i F^lambda_i`.
    pub terms: Vec<(Rational, FracPoly, u64)>,
}

impl ConjugateSeries {
    /// For `n <= 2` the phases are `+-1`, so the coefficients are exact.
    pub fn signed_coeffs(&self) -> Option<Vec<FracPoly>> {
        if self.n > 2 {
            return None;
        }
        Some(
            self.terms
                .iter()
                .map(|(_, c, p)| if *p == 0 { c.clone() } else { -c })
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j,
            "n": self.n,
            "terms": self.terms.iter().map(|(l, c, p)| json!({"coeff": c.to_string(), "lambda": rational_list(std::slice::from_ref(l))[0], "phase": p})).collect::<Vec<_>>(),
        })
    }
}

pub fn conjugate_roots(e: &ExpansionResult, n: i64) -> Result<Vec<ConjugateSeries>, SeriesError> {
    if n < 1 {
        return Err(SeriesError::LatticeMismatch(n));
    }
    let nq = Rational::from_integer(BigInt::from(n));
    let mut numerators = Vec::new();
    for l in &e.lambdas {
        let k = l * &nq;
        if !k.is_integer() {
            return Err(SeriesError::LatticeMismatch(n));
        }
        numerators.push(
            k.to_integer()
                .to_i64()
                .ok_or(SeriesError::LatticeMismatch(n))?,
        );
    }
    Ok((0..n)
        .map(|j| ConjugateSeries {
            j: j as u64,
            n: n as u64,
            terms: e
                .lambdas
                .iter()
                .zip(&e.coeffs)
                .zip(&numerators)
                .map(|((l, c), k)| (l.clone(), c.clone(), (j * k).rem_euclid(n) as u64))
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_poly;
    use crate::{int, rat};

    fn p(s: &str) -> FracPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn square_root_expansion() {
        let e = expand_g_in_f(&p("x + y^2"), &p("y"), -6, &ExpansionOptions::default()).unwrap();
        assert_eq!(e.status, ExpansionStatus::TerminatedUnimodular);
        assert_eq!(e.lambdas, vec![rat(1, 2)]);
        assert_eq!(e.coeffs, vec![FracPoly::one()]);
        assert_eq!(e.kappa, 1);
        assert_eq!(
            e.remainder,
            Some(LeadingTerm {
                coeff: p("-1/2*x"),
                yexp: -1
            })
        );
        assert!(e.formula_holds());
    }

    #[test]
    fn exact_power_terminates_zero() {
        let opts = ExpansionOptions {
            check_jacobian: false,
            ..Default::default()
        };
        let e = expand_g_in_f(&p("y^2"), &p("y^3"), -6, &opts).unwrap();
        assert_eq!(e.status, ExpansionStatus::TerminatedZero);
        assert_eq!(e.lambdas, vec![rat(3, 2)]);
        assert!(e.remainder.is_none());
    }

    #[test]
    fn immediate_unimodular() {
        let e = expand_g_in_f(&p("y"), &p("-x"), -4, &ExpansionOptions::default()).unwrap();
        assert_eq!(e.kappa, 0);
        assert_eq!(
            e.remainder,
            Some(LeadingTerm {
                coeff: p("-x"),
                yexp: 0
            })
        );
        assert!(e.formula_holds());
    }

    #[test]
    fn constant_homogeneous_part_is_kept() {
        // g = 5 - x: |g| = (5 - x) y^0 has Jacobian 1 with |f| = y
        let e = expand_g_in_f(&p("y"), &p("5 - x"), -4, &ExpansionOptions::default()).unwrap();
        assert_eq!(e.c_kappa, Some(FracPoly::constant(int(5))));
        assert!(e.formula_holds());
    }

    #[test]
    fn rejects_bad_input() {
        let opts = ExpansionOptions::default();
        assert!(matches!(
            expand_g_in_f(&p("y^2"), &p("y^3"), -4, &opts),
            Err(SeriesError::NotJacobianPair(_))
        ));
        let off = ExpansionOptions {
            check_jacobian: false,
            ..Default::default()
        };
        assert_eq!(
            expand_g_in_f(&p("(x+1)*y^2"), &p("y"), -4, &off).unwrap_err(),
            SeriesError::BadLeadingTerm
        );
        assert_eq!(
            expand_g_in_f(&p("x"), &p("y"), -4, &off).unwrap_err(),
            SeriesError::BadLeadingTerm
        );
    }

    #[test]
    fn complete_mode_reaches_floor() {
        let opts = ExpansionOptions {
            mode: ExpansionMode::Complete,
            ..Default::default()
        };
        let e = expand_g_in_f(&p("x + y^2"), &p("y"), -6, &opts).unwrap();
        assert_eq!(e.status, ExpansionStatus::TerminatedZero);
        // y = (F - x)^(1/2): only F^(1/2) and a pure x correction at y^(-1)...
        assert_eq!(e.lambdas[0], rat(1, 2));
        let conj = conjugate_roots(&e, 2).unwrap();
        assert_eq!(conj.len(), 2);
        assert_eq!(conj[1].signed_coeffs().unwrap()[0], -FracPoly::one());
    }

    #[test]
    fn conjugate_phases() {
        let e = ExpansionResult {
            lambdas: vec![rat(2, 3), rat(1, 3)],
            coeffs: vec![FracPoly::one(), FracPoly::one()],
            kappa: 2,
            remainder: None,
            status: ExpansionStatus::TerminatedZero,
            m: int(0),
            n: 3,
            lc: int(1),
            c_kappa: None,
            tail: AsymSeries::zero(None),
        };
        let c = conjugate_roots(&e, 3).unwrap();
        let phases: Vec<u64> = c[1].terms.iter().map(|t| t.2).collect();
        assert_eq!(phases, vec![2, 1]);
        assert_eq!(
            conjugate_roots(&e, 1).unwrap_err(),
            SeriesError::LatticeMismatch(1)
        );
        assert_eq!(
            conjugate_roots(&e, 6).unwrap()[0]
                .terms
                .iter()
                .map(|t| t.2)
                .collect::<Vec<_>>(),
            vec![0, 0]
        );
    }
}
