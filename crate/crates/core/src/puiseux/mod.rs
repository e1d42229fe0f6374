//! Newton-Puiseux branches of `p(x, y) = 0`.
//!
//! Everything is computed for `x -> 0` (increasing exponents). The decreasing
//! direction is handled by the substitution `x -> 1/x`: the branch exponents are
//! negated on the way in and on the way out, and the truncation order then bounds
//! the exponents from below by `-order`.

mod roots;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::upoly::UPoly;
use crate::algebra::{format_rational, AlgebraError};
use crate::scalar::Scalar;
use crate::{ApproxPoly, FracPoly, Monomial, Poly, Rational, Var};

use roots::{cluster_roots, rational_edge_roots};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuiseuxError {
    #[error("no branches: polynomial is independent of y")]
    NoBranches,
    #[error("y must occur with nonnegative integer exponents")]
    FractionalY,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a valid partial branch: {0}")]
    InvalidBranch(String),
    #[error("term budget of {0} steps exceeded")]
    Budget(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "inc" | "increasing" => Some(Direction::Increasing),
            "dec" | "decreasing" => Some(Direction::Decreasing),
            _ => None,
        }
    }

    fn sign(self, e: &Rational) -> Rational {
        match self {
            Direction::Increasing => e.clone(),
            Direction::Decreasing => -e.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValue {
    Exact(Rational),
    /// A numerically computed value with an error radius.
    Approx {
        value: Complex64,
        radius: f64,
    },
}

impl CoeffValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, CoeffValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            CoeffValue::Exact(r) => Some(r),
            CoeffValue::Approx { .. } => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            CoeffValue::Exact(r) => Complex64::from_rational(r),
            CoeffValue::Approx { value, .. } => *value,
        }
    }

    fn total_cmp(&self, other: &CoeffValue) -> Ordering {
        match (self, other) {
            (CoeffValue::Exact(a), CoeffValue::Exact(b)) => a.cmp(b),
            (CoeffValue::Exact(_), _) => Ordering::Less,
            (_, CoeffValue::Exact(_)) => Ordering::Greater,
            (CoeffValue::Approx { value: a, .. }, CoeffValue::Approx { value: b, .. }) => {
                a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CoeffValue::Exact(r) => Value::String(format_rational(r)),
            CoeffValue::Approx { value, radius } => {
                json!({"im": value.im, "radius": radius, "re": value.re})
            }
        }
    }
}

impl std::fmt::Display for CoeffValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoeffValue::Exact(r) => write!(f, "{r}"),
            CoeffValue::Approx { value, radius } => {
                write!(f, "~({:.12}{:+.12}i ± {radius:.1e})", value.re, value.im)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxTerm {
    pub coeff: CoeffValue,
    /// Exponent of `x`.
    pub exponent: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxBranch {
    /// Ordered by the direction: increasing or decreasing exponents.
    pub terms: Vec<PuiseuxTerm>,
    pub multiplicity: usize,
    /// Lcm of the exponent denominators.
    pub ramification: u64,
    pub exact: bool,
    /// `true` when the truncation is an exact root.
    pub terminated: bool,
    pub direction: Direction,
}

impl PuiseuxBranch {
    fn new(
        terms: Vec<PuiseuxTerm>,
        multiplicity: usize,
        terminated: bool,
        direction: Direction,
    ) -> Self {
        let ram = terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.exponent.denom()));
        let exact = terms.iter().all(|t| t.coeff.is_exact());
        PuiseuxBranch {
            terms,
            multiplicity,
            ramification: ram.to_u64().unwrap_or(u64::MAX),
            exact,
            terminated,
            direction,
        }
    }

    /// The truncated solution as a polynomial in `x`, when all coefficients are exact.
    pub fn truncation(&self) -> Option<FracPoly> {
        let mut out = FracPoly::zero();
        for t in &self.terms {
            out.add_term(
                Monomial::var(Var::X).pow(&t.exponent),
                t.coeff.exact()?.clone(),
            );
        }
        Some(out)
    }

    pub fn approx_truncation(&self) -> ApproxPoly {
        let mut out = ApproxPoly::zero();
        for t in &self.terms {
            out.add_term(Monomial::var(Var::X).pow(&t.exponent), t.coeff.to_complex());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact,
            "mult": self.multiplicity,
            "ram": self.ramification,
            "terminated": self.terminated,
            "terms": self.terms.iter().map(|t| json!({
                "coeff": t.coeff.to_json(),
                "exp": format_rational(&t.exponent),
            })).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for PuiseuxBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}*x^({})", t.coeff, t.exponent)?;
        }
        write!(
            f,
            "  [mult {}, ram {}{}]",
            self.multiplicity,
            self.ramification,
            if self.terminated { ", exact root" } else { "" }
        )
    }
}

/// How the residual `p(x, y_t)` of a truncation behaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Zero,
    /// Order in the branch direction: the least `x`-exponent for increasing
    /// branches, minus the greatest one for decreasing branches.
    Order(Rational),
}

impl Residual {
    pub fn beyond(&self, order: &Rational) -> bool {
        match self {
            Residual::Zero => true,
            Residual::Order(r) => r > order,
        }
    }
}

/// Maximum number of extension steps in one call.
pub const STEP_BUDGET: usize = 10_000;

fn to_frame<C: Scalar>(p: &Poly<C>, dir: Direction) -> Poly<C> {
    match dir {
        Direction::Increasing => p.clone(),
        Direction::Decreasing => p.map_monomials(|m| {
            let e = -m.exp(Var::X).clone();
            m.clone().with(Var::X, e)
        }),
    }
}

fn check_input(p: &FracPoly) -> Result<usize, PuiseuxError> {
    if p.support().any(|m| !m.is_polynomial_in(Var::Y)) {
        return Err(PuiseuxError::FractionalY);
    }
    let n = p.degree(Var::Y).unwrap_or_else(Rational::zero);
    if n.is_zero() {
        return Err(PuiseuxError::NoBranches);
    }
    Ok(n.to_integer().to_usize().expect("small y-degree"))
}

struct Segment<C> {
    gamma: Rational,
    phi: UPoly<C>,
    span: usize,
}

struct Analysis<C> {
    /// Multiplicity of `y = 0` as a root of `q`.
    zero_mult: usize,
    segments: Vec<Segment<C>>,
    /// Largest `j <= max_j` present.
    top_j: Option<usize>,
    /// Order of `q(x, 0)`; `None` when it vanishes.
    residual_order: Option<Rational>,
}

/// Lower Newton polygon of `q` over `j <= max_j`, in the plane `(j, ord_x)`.
fn analyze<C: Scalar>(q: &Poly<C>, max_j: usize) -> Analysis<C> {
    let by_j: BTreeMap<usize, Poly<C>> = q
        .collect(Var::Y)
        .into_iter()
        .filter_map(|(e, c)| {
            let j = e.to_integer().to_usize()?;
            (j <= max_j).then_some((j, c))
        })
        .collect();
    let points: Vec<(usize, Rational)> = by_j
        .iter()
        .map(|(j, c)| (*j, c.min_degree(Var::X).expect("nonzero coefficient")))
        .collect();
    let zero_mult = points.first().map_or(max_j, |p| p.0);
    let residual_order = by_j.get(&0).and_then(|c| c.min_degree(Var::X));
    let top_j = points.last().map(|p| p.0);

    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // keep only strict left turns
            let cross = Rational::from_integer(BigInt::from(b.0 - a.0)) * (&pt.1 - &a.1)
                - Rational::from_integer(BigInt::from(pt.0 - a.0)) * (&b.1 - &a.1);
            if cross > Rational::zero() {
                break;
            }
            hull.pop();
        }
        hull.push(pt);
    }

    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let ((ja, ia), (jb, ib)) = (&w[0], &w[1]);
        let span = jb - ja;
        let slope = (ib - ia) / Rational::from_integer(BigInt::from(span));
        let coeffs: Vec<C> = (0..=span)
            .map(|k| {
                let e = ia + &slope * Rational::from_integer(BigInt::from(k));
                by_j.get(&(ja + k))
                    .and_then(|c| c.coeff(&Monomial::var(Var::X).pow(&e)).cloned())
                    .unwrap_or_else(C::zero)
            })
            .collect();
        segments.push(Segment {
            gamma: -slope,
            phi: UPoly::new(coeffs),
            span,
        });
    }
    Analysis {
        zero_mult,
        segments,
        top_j,
        residual_order,
    }
}

/// Rounding residue left by the substitution. With the last term of
/// exponent `gamma` and multiplicity `mult` correct, every point `(j, e)` with
/// `j < mult` lies strictly above the line of slope `-gamma` through
/// `(mult, ord q_mult)`; whatever the floating arithmetic left on or below it
/// is noise. Large leftovers mean the root itself was too inaccurate.
fn drop_cancelled<C: Scalar>(
    q: &Poly<C>,
    bound: &Poly<f64>,
    mult: usize,
    gamma: &Rational,
) -> Result<Poly<C>, PuiseuxError> {
    let jm = Rational::from_integer(BigInt::from(mult));
    let Some(base) = q
        .terms()
        .filter(|(m, _)| m.exp(Var::Y) == &jm)
        .map(|(m, _)| m.exp(Var::X).clone())
        .min()
    else {
        return Ok(q.clone());
    };
    let level = base + &jm * gamma;
    let mut kept = Vec::new();
    for (m, c) in q.terms() {
        let below = m.exp(Var::Y) < &jm && m.exp(Var::X) + m.exp(Var::Y) * gamma <= level;
        if !below {
            kept.push((m.clone(), c.clone()));
        } else if c.magnitude() > CANCEL_TOL * bound.coeff(m).copied().unwrap_or(0.0).max(1.0) {
            return Err(PuiseuxError::PrecisionExhausted(format!(
                "residue {:.3e} at x^{} y^{} after cancellation",
                c.magnitude(),
                m.exp(Var::X),
                m.exp(Var::Y)
            )));
        }
    }
    Ok(Poly::from_terms(kept))
}

/// How large a supposedly cancelled coefficient may be, relative to what was summed into it.
const CANCEL_TOL: f64 = 1e-6;

/// Coefficient fields the solver runs over.
trait Field: Scalar {
    /// Roots of an edge polynomial; `None` means the root is not representable
    /// in `Self` and the branch must continue numerically.
    fn edge_roots(
        phi: &UPoly<Self>,
    ) -> Result<Vec<(Option<Self>, CoeffValue, usize)>, PuiseuxError>;
}

impl Field for Rational {
    fn edge_roots(
        phi: &UPoly<Self>,
    ) -> Result<Vec<(Option<Self>, CoeffValue, usize)>, PuiseuxError> {
        let (exact, approx) = rational_edge_roots(phi);
        let mut out: Vec<_> = exact
            .into_iter()
            .map(|(r, k)| (Some(r.clone()), CoeffValue::Exact(r), k))
            .collect();
        out.extend(approx.into_iter().map(|r| {
            (
                None,
                CoeffValue::Approx {
                    value: r.value,
                    radius: r.radius,
                },
                r.mult,
            )
        }));
        Ok(out)
    }
}

impl Field for Complex64 {
    fn edge_roots(
        phi: &UPoly<Self>,
    ) -> Result<Vec<(Option<Self>, CoeffValue, usize)>, PuiseuxError> {
        let roots = cluster_roots(phi.coeffs()).map_err(PuiseuxError::PrecisionExhausted)?;
        Ok(roots
            .into_iter()
            .map(|r| {
                (
                    Some(r.value),
                    CoeffValue::Approx {
                        value: r.value,
                        radius: r.radius,
                    },
                    r.mult,
                )
            })
            .collect())
    }
}

struct Solver<'a> {
    approx_p: ApproxPoly,
    exact_p: &'a FracPoly,
    order: Rational,
    steps: usize,
    /// Branches found, with exponents in the increasing frame.
    out: Vec<(Vec<PuiseuxTerm>, usize, bool)>,
}

/// A partial branch in the working field: native coefficients plus their reported values.
type Partial<C> = Vec<(C, CoeffValue, Rational)>;

impl Solver<'_> {
    /// `p(x, y_t + y)` where `y_t` is the partial branch. In the approximate
    /// field this also returns, per monomial, the sum of the magnitudes that
    /// were added into it; rounding error is measured against that, not the
    /// largest coefficient overall (which is dominated by irrelevant high powers).
    fn shifted<C: Field>(
        p: &Poly<C>,
        terms: &Partial<C>,
    ) -> Result<(Poly<C>, Option<Poly<f64>>), PuiseuxError> {
        if terms.is_empty() {
            return Ok((p.clone(), None));
        }
        let mut yt = Poly::<C>::var(Var::Y);
        for (c, _, e) in terms {
            yt.add_term(Monomial::var(Var::X).pow(e), c.clone());
        }
        let q = p.substitute(&[(Var::Y, yt.clone())])?;
        if C::EXACT {
            return Ok((q, None));
        }
        let abs = |poly: &Poly<C>| poly.map_coeffs(|c| c.magnitude());
        let bound = abs(p).substitute(&[(Var::Y, abs(&yt))])?;
        let kept = q
            .into_terms()
            .filter(|(m, c)| !c.negligible(bound.coeff(m).copied().unwrap_or(0.0)));
        Ok((Poly::from_terms(kept), Some(bound)))
    }

    fn grow<C: Field>(
        &mut self,
        p: &Poly<C>,
        terms: Partial<C>,
        mult: usize,
        gamma_last: Option<&Rational>,
    ) -> Result<(), PuiseuxError> {
        self.steps += 1;
        if self.steps > STEP_BUDGET {
            return Err(PuiseuxError::Budget(STEP_BUDGET));
        }
        let (mut q, bound) = Self::shifted(p, &terms)?;
        if let (Some(bound), Some(g)) = (&bound, gamma_last) {
            q = drop_cancelled(&q, bound, mult, g)?;
        }
        let an = analyze(&q, mult);
        if an.top_j != Some(mult) {
            return Err(PuiseuxError::InvalidBranch(format!(
                "no support point at y-degree {mult}"
            )));
        }
        let reported = |terms: &Partial<C>| -> Vec<PuiseuxTerm> {
            terms
                .iter()
                .map(|(_, v, e)| PuiseuxTerm {
                    coeff: v.clone(),
                    exponent: e.clone(),
                })
                .collect()
        };
        if an.zero_mult > 0 {
            self.out.push((reported(&terms), an.zero_mult, true));
        }
        let remaining = mult - an.zero_mult;
        if remaining == 0 {
            return Ok(());
        }
        if let Some(g) = gamma_last {
            if an.segments.iter().any(|s| &s.gamma <= g) {
                return Err(PuiseuxError::InvalidBranch(
                    "edge exponents do not increase".into(),
                ));
            }
        }
        debug_assert_eq!(an.segments.iter().map(|s| s.span).sum::<usize>(), remaining);
        let min_gamma = an.segments.iter().map(|s| &s.gamma).min().expect("segment");
        let residual_done = an.residual_order.as_ref().is_none_or(|r| r > &self.order);
        if residual_done && min_gamma > &self.order {
            self.out.push((reported(&terms), remaining, false));
            return Ok(());
        }
        for seg in &an.segments {
            for (native, value, k) in C::edge_roots(&seg.phi)? {
                match native {
                    Some(c) => {
                        let mut next = terms.clone();
                        next.push((c, value, seg.gamma.clone()));
                        self.grow(p, next, k, Some(&seg.gamma))?;
                    }
                    None => {
                        let mut next: Partial<Complex64> = terms
                            .iter()
                            .map(|(_, v, e)| (v.to_complex(), v.clone(), e.clone()))
                            .collect();
                        next.push((value.to_complex(), value, seg.gamma.clone()));
                        let ap = self.approx_p.clone();
                        self.grow(&ap, next, k, Some(&seg.gamma))?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn finish(raw: Vec<(Vec<PuiseuxTerm>, usize, bool)>, dir: Direction) -> Vec<PuiseuxBranch> {
    let mut out: Vec<PuiseuxBranch> = raw
        .into_iter()
        .map(|(terms, mult, terminated)| {
            let terms = terms
                .into_iter()
                .map(|t| PuiseuxTerm {
                    exponent: dir.sign(&t.exponent),
                    coeff: t.coeff,
                })
                .collect();
            PuiseuxBranch::new(terms, mult, terminated, dir)
        })
        .collect();
    out.sort_by(compare_branches);
    out
}

fn compare_branches(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Ordering {
    for (s, t) in a.terms.iter().zip(&b.terms) {
        let ord = a
            .direction
            .sign(&s.exponent)
            .cmp(&b.direction.sign(&t.exponent))
            .then_with(|| s.coeff.total_cmp(&t.coeff));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

/// First terms `c x^gamma` of every nonzero branch, with multiplicities.
pub fn edge_roots(p: &FracPoly, dir: Direction) -> Result<Vec<(PuiseuxTerm, usize)>, PuiseuxError> {
    let n = check_input(p)?;
    let an = analyze(&to_frame(p, dir), n);
    let mut out = Vec::new();
    for seg in &an.segments {
        for (_, value, k) in Rational::edge_roots(&seg.phi)? {
            out.push((
                PuiseuxTerm {
                    coeff: value,
                    exponent: dir.sign(&seg.gamma),
                },
                k,
            ));
        }
    }
    out.sort_by(|(s, _), (t, _)| {
        dir.sign(&s.exponent)
            .cmp(&dir.sign(&t.exponent))
            .then_with(|| s.coeff.total_cmp(&t.coeff))
    });
    Ok(out)
}

/// All branches of `p = 0` in the given direction, truncated at `order`.
///
/// Terms are added until the next exponent passes `order` and the residual
/// `p(x, y_t)` has order beyond it (see [`Residual`]); the latter can require a
/// few terms past `order`.
pub fn all_branches(
    p: &FracPoly,
    dir: Direction,
    order: &Rational,
) -> Result<Vec<PuiseuxBranch>, PuiseuxError> {
    let n = check_input(p)?;
    let frame = to_frame(p, dir);
    let mut solver = Solver {
        approx_p: ApproxPoly::from_rational(&frame),
        exact_p: &frame,
        order: order.clone(),
        steps: 0,
        out: Vec::new(),
    };
    let start = solver.exact_p.clone();
    solver.grow(&start, Vec::new(), n, None)?;
    Ok(finish(solver.out, dir))
}

/// Refines a partial branch to `order`. Returns every refinement: a multiple
/// branch can split into several.
pub fn extend_branch(
    p: &FracPoly,
    branch: &PuiseuxBranch,
    order: &Rational,
) -> Result<Vec<PuiseuxBranch>, PuiseuxError> {
    check_input(p)?;
    let dir = branch.direction;
    let frame = to_frame(p, dir);
    let mut solver = Solver {
        approx_p: ApproxPoly::from_rational(&frame),
        exact_p: &frame,
        order: order.clone(),
        steps: 0,
        out: Vec::new(),
    };
    let gamma_last = branch.terms.last().map(|t| dir.sign(&t.exponent));
    if branch.exact {
        let terms: Partial<Rational> = branch
            .terms
            .iter()
            .map(|t| {
                let c = t.coeff.exact().expect("exact branch").clone();
                (c, t.coeff.clone(), dir.sign(&t.exponent))
            })
            .collect();
        let start = solver.exact_p.clone();
        solver.grow(&start, terms, branch.multiplicity, gamma_last.as_ref())?;
    } else {
        let terms: Partial<Complex64> = branch
            .terms
            .iter()
            .map(|t| (t.coeff.to_complex(), t.coeff.clone(), dir.sign(&t.exponent)))
            .collect();
        let start = solver.approx_p.clone();
        solver.grow(&start, terms, branch.multiplicity, gamma_last.as_ref())?;
    }
    Ok(finish(solver.out, dir))
}

/// A one-term branch from a first term returned by [`edge_roots`].
pub fn branch_from_term(term: PuiseuxTerm, multiplicity: usize, dir: Direction) -> PuiseuxBranch {
    PuiseuxBranch::new(vec![term], multiplicity, false, dir)
}

/// Residual of an exact branch: `p(x, y_t)`.
pub fn residual(p: &FracPoly, branch: &PuiseuxBranch) -> Option<Residual> {
    let yt = branch.truncation()?;
    let r = p.substitute(&[(Var::Y, yt)]).ok()?;
    Some(residual_of(&r, branch.direction))
}

/// Residual of any branch, computed in floating point with relative pruning.
pub fn approx_residual(p: &FracPoly, branch: &PuiseuxBranch) -> Result<Residual, PuiseuxError> {
    let r = ApproxPoly::from_rational(p)
        .substitute(&[(Var::Y, branch.approx_truncation())])?
        .prune();
    Ok(residual_of(&r, branch.direction))
}

fn residual_of<C: Scalar>(r: &Poly<C>, dir: Direction) -> Residual {
    if r.is_zero() {
        return Residual::Zero;
    }
    match dir {
        Direction::Increasing => Residual::Order(r.min_degree(Var::X).expect("nonzero")),
        Direction::Decreasing => Residual::Order(-r.degree(Var::X).expect("nonzero")),
    }
}
