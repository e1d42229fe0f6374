//! The irreducible relation `P(x, F, G) = 0` between `F = f` and `G = g` over `Q(x)`,
//! found by reducing powers of `g` against standard monomials.
//!
//! All arithmetic is fraction-free over `Z[x]`: instead of subtracting
//! `k m` with `k in Q(x)`, both sides are cross-multiplied by leading coefficients
//! and the common content is removed after each step.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::dense::{ZPoly, ZxPoly};
use crate::algebra::{format_rational, lcm_denominators};
use crate::geometry::{dependence_polytope, LatticePoint, LatticePolytope};
use crate::{FracPoly, Monomial, Rational, Var, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DependenceError {
    #[error("{0} is not a polynomial in x, y")]
    NotPolynomial(&'static str),
    #[error("{0} does not depend on y")]
    ConstantInY(&'static str),
    #[error("reduction stuck: no standard monomial of y-degree {ydeg} at step {s}")]
    Stuck { s: usize, ydeg: usize },
    #[error("step budget of {0} reductions exceeded")]
    Budget(usize),
}

/// `f^i g_0^(j_0) ... g_s^(j_s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardMonomial {
    pub i: usize,
    pub j: Vec<usize>,
}

impl StandardMonomial {
    pub fn to_json(&self) -> Value {
        json!({"i": self.i, "j": self.j})
    }
}

/// Polynomial in `F, G` with coefficients in `Z[x]`, keyed by `(deg_F, deg_G)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Expr(BTreeMap<(usize, usize), ZPoly>);

impl Expr {
    fn var(fg: (usize, usize)) -> Self {
        Expr(BTreeMap::from([(fg, ZPoly::constant(BigInt::one()))]))
    }

    fn one() -> Self {
        Self::var((0, 0))
    }

    fn mul(&self, other: &Expr) -> Expr {
        let mut out = BTreeMap::new();
        for ((a, b), c) in &self.0 {
            for ((d, e), k) in &other.0 {
                let entry = out.entry((a + d, b + e)).or_insert_with(ZPoly::zero);
                *entry = &*entry + &(c * k);
            }
        }
        out.retain(|_, c: &mut ZPoly| !c.is_zero());
        Expr(out)
    }

    fn pow(&self, e: usize) -> Expr {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `u * self - v * other`
    fn combine(&self, u: &ZPoly, other: &Expr, v: &ZPoly) -> Expr {
        let mut out: BTreeMap<(usize, usize), ZPoly> =
            self.0.iter().map(|(k, c)| (*k, c * u)).collect();
        for (k, c) in &other.0 {
            let entry = out.entry(*k).or_insert_with(ZPoly::zero);
            *entry = &*entry - &(c * v);
        }
        out.retain(|_, c| !c.is_zero());
        Expr(out)
    }

    fn div_exact(&self, d: &ZPoly) -> Expr {
        Expr(
            self.0
                .iter()
                .map(|(k, c)| (*k, c.div_exact(d).expect("content divides")))
                .collect(),
        )
    }

    fn to_frac(&self) -> FracPoly {
        let mut out = FracPoly::zero();
        for ((a, b), c) in &self.0 {
            for (k, coeff) in c.coeffs().iter().enumerate() {
                if !coeff.is_zero() {
                    out.add_term(
                        Monomial::from_ints(k as i64, 0, *a as i64, *b as i64),
                        Rational::from_integer(coeff.clone()),
                    );
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Generator {
    poly: ZxPoly,
    expr: Expr,
}

/// The data of the reduction after `s` steps: `g_0 .. g_s`, their `y`-degrees,
/// the gcd chain and the multipliers `a_i = d_(i-1) / d_i`.
#[derive(Debug, Clone)]
pub struct ReductionState {
    f: Generator,
    n: usize,
    gens: Vec<Generator>,
    degrees: Vec<usize>,
    d: Vec<usize>,
    a: Vec<usize>,
}

impl ReductionState {
    fn new(f: ZxPoly, g: ZxPoly) -> Self {
        let n = f.degree().unwrap_or(0);
        let mut state = ReductionState {
            f: Generator {
                poly: f,
                expr: Expr::var((1, 0)),
            },
            n,
            gens: Vec::new(),
            degrees: Vec::new(),
            d: Vec::new(),
            a: Vec::new(),
        };
        state.push(Generator {
            poly: g,
            expr: Expr::var((0, 1)),
        });
        state
    }

    /// Degrees-only state, for exploring the standard-monomial search.
    pub fn from_degrees(n: usize, degrees: &[usize]) -> Self {
        let mono = |k: usize| {
            let mut c = vec![ZPoly::zero(); k + 1];
            c[k] = ZPoly::constant(BigInt::one());
            ZxPoly::new(c)
        };
        let mut state = ReductionState::new(mono(n), mono(degrees[0]));
        for &m in &degrees[1..] {
            state.push(Generator {
                poly: mono(m),
                expr: Expr::one(),
            });
        }
        state
    }

    fn push(&mut self, g: Generator) {
        let m = g.poly.degree().unwrap_or(0);
        let prev = self.d.last().copied().unwrap_or(self.n);
        let d = prev.gcd(&m);
        self.degrees.push(m);
        self.d.push(d);
        self.a.push(prev / d);
        self.gens.push(g);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `d_0 .. d_s` (with `d_(-1) = n` implicit).
    pub fn gcd_chain(&self) -> &[usize] {
        &self.d
    }

    pub fn multipliers(&self) -> &[usize] {
        &self.a
    }

    fn evaluate(&self, m: &StandardMonomial) -> Generator {
        let mut poly = self.f.poly.pow(m.i as u32);
        let mut expr = self.f.expr.pow(m.i);
        for (k, &j) in m.j.iter().enumerate() {
            if j > 0 {
                poly = &poly * &self.gens[k].poly.pow(j as u32);
                expr = expr.mul(&self.gens[k].expr.pow(j));
            }
        }
        Generator { poly, expr }
    }
}

/// The lexicographically least (in `j_s, .., j_0, i`) `s`-standard monomial of
/// `y`-degree `target`, together with its `y`-leading coefficient.
///
/// `s` counts how many of the `g_k` may be used: `s = 0` means powers of `f` only.
pub fn find_standard_monomial(
    state: &ReductionState,
    target: usize,
    s: usize,
) -> Result<(StandardMonomial, ZPoly), DependenceError> {
    let stuck = DependenceError::Stuck { s, ydeg: target };
    let mut j = vec![0usize; s];
    loop {
        let used: usize = j.iter().zip(&state.degrees).map(|(j, m)| j * m).sum();
        if used <= target && state.n > 0 && (target - used).is_multiple_of(state.n) {
            let m = StandardMonomial {
                i: (target - used) / state.n,
                j: j.clone(),
            };
            let lc = state.evaluate(&m).poly.lc();
            return Ok((m, lc));
        }
        if state.n == 0 {
            return Err(stuck);
        }
        // odometer with j_0 varying fastest so higher indices stay smallest
        let mut k = 0;
        loop {
            if k == s {
                return Err(stuck);
            }
            j[k] += 1;
            if j[k] < state.a[k] {
                break;
            }
            j[k] = 0;
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    /// `g_s^(a_s)` reduced by an `(s-1)`-standard monomial.
    Head,
    Reduce,
    /// The remainder's degree is not divisible by `d_s`: it becomes `g_(s+1)`.
    NewGenerator,
    /// The remainder vanished: a relation is found.
    Relation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptStep {
    pub s: usize,
    pub kind: StepKind,
    pub ydeg: usize,
    pub monomial: Option<StandardMonomial>,
}

impl TranscriptStep {
    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            StepKind::Head => "head",
            StepKind::Reduce => "reduce",
            StepKind::NewGenerator => "new-generator",
            StepKind::Relation => "relation",
        };
        json!({"kind": kind, "monomial": self.monomial.as_ref().map(StandardMonomial::to_json), "s": self.s, "ydeg": self.ydeg})
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeFailure {
    /// No `G`-degree divisible by `a0`, or `F`-degree not `b0 nu`.
    DegreeMismatch,
    /// `c (G^a0 - t F^b0)^nu` with `t != 1`.
    ScaledBinomial(Rational),
    NotPureBinomialPower,
}

impl EdgeFailure {
    pub fn message(&self) -> String {
        match self {
            EdgeFailure::DegreeMismatch => "degrees of the leading form do not match a0, b0".into(),
            EdgeFailure::ScaledBinomial(t) => format!(
                "scaled binomial power with F-coefficient {}",
                format_rational(t)
            ),
            EdgeFailure::NotPureBinomialPower => "not a pure binomial power".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeVerdict {
    /// `form = c (G^a0 - F^b0)^nu`
    Binomial {
        a0: u64,
        b0: u64,
        nu: u64,
        c: FracPoly,
        edge: [LatticePoint; 2],
        form: FracPoly,
    },
    Failure {
        reason: EdgeFailure,
        form: FracPoly,
    },
}

impl EdgeVerdict {
    pub fn is_binomial(&self) -> bool {
        matches!(self, EdgeVerdict::Binomial { .. })
    }

    pub fn form(&self) -> &FracPoly {
        match self {
            EdgeVerdict::Binomial { form, .. } | EdgeVerdict::Failure { form, .. } => form,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EdgeVerdict::Binomial {
                a0,
                b0,
                nu,
                c,
                edge,
                form,
            } => json!({
                "a0": a0, "b0": b0, "c": c.to_string(),
                "edge": [edge[0].to_json(), edge[1].to_json()],
                "form": form.to_string(), "nu": nu, "verdict": "binomial",
            }),
            EdgeVerdict::Failure { reason, form } => {
                json!({"form": form.to_string(), "verdict": reason.message()})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MonicVerdict {
    Monic(FracPoly),
    /// `p_0(x)` is not a monomial `c x^d`.
    NotMonomial(FracPoly),
}

#[derive(Debug, Clone)]
pub struct DependencePoly {
    /// Primitive over `Z[x]`, integer exponents in `x, F, G`.
    pub p: FracPoly,
    pub ny_f: usize,
    pub ny_g: usize,
    pub edge: EdgeVerdict,
    pub polytope: Option<LatticePolytope>,
    pub transcript: Vec<TranscriptStep>,
    /// `d_0, d_1, ..` of the final reduction state.
    pub gcd_chain: Vec<usize>,
}

impl DependencePoly {
    pub fn deg(&self, v: Var) -> i64 {
        self.p.deg_int(v)
    }

    /// Terms as `[i, j, k, coeff]` for `F^i G^j x^k`, sorted by exponent.
    pub fn terms_json(&self) -> Value {
        let mut rows: Vec<(Vec<i64>, String)> = self
            .p
            .terms()
            .map(|(m, c)| {
                let e = |v| m.exp(v).to_integer().to_i64().unwrap_or(0);
                (vec![e(Var::F), e(Var::G), e(Var::X)], format_rational(c))
            })
            .collect();
        rows.sort();
        Value::Array(
            rows.into_iter()
                .map(|(e, c)| json!([e[0], e[1], e[2], c]))
                .collect(),
        )
    }

    pub fn to_json(&self) -> Value {
        let (a0, b0, nu) = match &self.edge {
            EdgeVerdict::Binomial { a0, b0, nu, .. } => (Some(*a0), Some(*b0), Some(*nu)),
            EdgeVerdict::Failure { .. } => (None, None, None),
        };
        json!({
            "P": self.terms_json(),
            "a0": a0,
            "b0": b0,
            "edge": self.edge.to_json(),
            "nu": nu,
            "poly": self.p.to_string(),
            "transcript": self.transcript.iter().map(TranscriptStep::to_json).collect::<Vec<_>>(),
        })
    }
}

fn integral(p: &FracPoly, name: &'static str) -> Result<(ZxPoly, BigInt), DependenceError> {
    let l = lcm_denominators(p.terms().map(|(_, c)| c));
    let scaled = p.scale(&Rational::from_integer(l.clone()));
    let z = ZxPoly::from_frac(&scaled, Var::Y).ok_or(DependenceError::NotPolynomial(name))?;
    if z.degree().unwrap_or(0) == 0 {
        return Err(DependenceError::ConstantInY(name));
    }
    Ok((z, l))
}

fn content_of(polys: impl IntoIterator<Item = ZPoly>) -> ZPoly {
    polys
        .into_iter()
        .fold(ZPoly::zero(), |acc, c| acc.gcd_z(&c))
}

/// Builds the irreducible relation between `f` and `g` over `Q(x)`.
pub fn build_dependence(f: &FracPoly, g: &FracPoly) -> Result<DependencePoly, DependenceError> {
    let (fz, lf) = integral(f, "f")?;
    let (gz, lg) = integral(g, "g")?;
    let (n, m) = (fz.degree().unwrap_or(0), gz.degree().unwrap_or(0));
    let cap = 10 * n * m;
    let mut state = ReductionState::new(fz, gz);
    let mut transcript = Vec::new();
    let mut steps = 0usize;

    let relation = 's: loop {
        let s = state.gens.len() - 1;
        let a = state.a[s];
        let gs = &state.gens[s];
        let mut h = Generator {
            poly: gs.poly.pow(a as u32),
            expr: gs.expr.pow(a),
        };
        let mut head = true;
        loop {
            let Some(deg) = h.poly.degree() else {
                transcript.push(TranscriptStep {
                    s,
                    kind: StepKind::Relation,
                    ydeg: 0,
                    monomial: None,
                });
                break 's h.expr;
            };
            if !head && deg % state.d[s] != 0 {
                transcript.push(TranscriptStep {
                    s,
                    kind: StepKind::NewGenerator,
                    ydeg: deg,
                    monomial: None,
                });
                state.push(h);
                continue 's;
            }
            steps += 1;
            if steps > cap {
                return Err(DependenceError::Budget(cap));
            }
            let usable = if head { s } else { s + 1 };
            let (mono, lc_m) = find_standard_monomial(&state, deg, usable)?;
            let mval = state.evaluate(&mono);
            let lc_h = h.poly.lc();
            let common = lc_h.gcd_z(&lc_m);
            let u = lc_m.div_exact(&common).expect("gcd divides");
            let v = lc_h.div_exact(&common).expect("gcd divides");
            let poly = &h.poly.scale(&u) - &mval.poly.scale(&v);
            let expr = h.expr.combine(&u, &mval.expr, &v);
            let c = content_of(
                poly.coeffs()
                    .iter()
                    .cloned()
                    .chain(expr.0.values().cloned()),
            );
            let (poly, expr) = if c.is_zero() || c.is_unit() {
                (poly, expr)
            } else {
                (
                    poly.div_exact(&c).expect("content divides"),
                    expr.div_exact(&c),
                )
            };
            transcript.push(TranscriptStep {
                s,
                kind: if head {
                    StepKind::Head
                } else {
                    StepKind::Reduce
                },
                ydeg: deg,
                monomial: Some(mono),
            });
            assert!(
                poly.degree().is_none_or(|d| d < deg),
                "reduction did not lower the y-degree"
            );
            h = Generator { poly, expr };
            head = false;
        }
    };

    // undo the denominator clearing: P(x, F, G) = P^(x, lf F, lg G)
    let lf = Rational::from_integer(lf);
    let lg = Rational::from_integer(lg);
    let mut p = FracPoly::zero();
    for (mono, c) in relation.to_frac().terms() {
        let i = mono.exp(Var::F).to_integer().to_u32().unwrap_or(0);
        let j = mono.exp(Var::G).to_integer().to_u32().unwrap_or(0);
        p.add_term(
            mono.clone(),
            c * num_traits::pow(lf.clone(), i as usize) * num_traits::pow(lg.clone(), j as usize),
        );
    }
    let p = make_primitive(&p);
    let edge = leading_edge_data(&p, n as i64, m as i64);
    Ok(DependencePoly {
        polytope: dependence_polytope(&p).ok(),
        p,
        ny_f: n,
        ny_g: m,
        edge,
        transcript,
        gcd_chain: state.d.clone(),
    })
}

/// Divides by the content over `Z[x]` and makes the top term in `(G, F, x)` positive.
fn make_primitive(p: &FracPoly) -> FracPoly {
    let negative = p
        .terms()
        .max_by_key(|(m, _)| {
            (
                m.exp(Var::G).clone(),
                m.exp(Var::F).clone(),
                m.exp(Var::X).clone(),
            )
        })
        .is_some_and(|(_, c)| c.is_negative());
    let mut rows: BTreeMap<(Rational, Rational), Vec<BigInt>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let k = m.exp(Var::X).to_integer().to_usize().unwrap_or(0);
        let row = rows
            .entry((m.exp(Var::F).clone(), m.exp(Var::G).clone()))
            .or_default();
        if row.len() <= k {
            row.resize(k + 1, BigInt::zero());
        }
        row[k] = if negative {
            -c.to_integer()
        } else {
            c.to_integer()
        };
    }
    let rows: Vec<_> = rows.into_iter().map(|(k, r)| (k, ZPoly::new(r))).collect();
    let content = content_of(rows.iter().map(|(_, r)| r.clone()));
    let mut out = FracPoly::zero();
    for ((fe, ge), row) in rows {
        let q = row.div_exact(&content).expect("content divides");
        for (k, c) in q.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let m = Monomial::one()
                    .with(Var::X, crate::int(k as i64))
                    .with(Var::F, fe.clone())
                    .with(Var::G, ge.clone());
                out.add_term(m, Rational::from_integer(c.clone()));
            }
        }
    }
    out
}

/// `P / p_0(x)` when the coefficient `p_0` of the top power of `G` is a monomial.
pub fn normalize_monic(p: &FracPoly) -> MonicVerdict {
    let top = p.degree(Var::G).unwrap_or_else(Rational::zero);
    let p0 = p.coefficient_of(Var::G, &top);
    match p0.as_monomial() {
        Some((c, mono)) if mono.exp(Var::F).is_zero() => {
            let inv = Monomial::one().div(mono);
            MonicVerdict::Monic(p.mul_monomial(&(Rational::one() / c), &inv))
        }
        _ => MonicVerdict::NotMonomial(p0),
    }
}

/// `P(x, f, g) == 0` exactly.
pub fn verify_dependence(p: &FracPoly, f: &FracPoly, g: &FracPoly) -> bool {
    p.substitute(&[(Var::F, f.clone()), (Var::G, g.clone())])
        .is_ok_and(|r| r.is_zero())
}

/// The leading form of `P` for `w(x) = 0, w(F) = ny_f, w(G) = ny_g`, decomposed as
/// `c (G^a0 - F^b0)^nu` when possible.
pub fn leading_edge_data(p: &FracPoly, ny_f: i64, ny_g: i64) -> EdgeVerdict {
    let w = WeightVector::ints(&[(Var::X, 0), (Var::F, ny_f), (Var::G, ny_g)]);
    let form = p.leading_form(&w).unwrap_or_else(|_| FracPoly::zero());
    let fail = |reason| EdgeVerdict::Failure {
        reason,
        form: form.clone(),
    };
    let gcd = ny_f.gcd(&ny_g);
    if form.is_zero() || gcd == 0 {
        return fail(EdgeFailure::DegreeMismatch);
    }
    let (a0, b0) = (ny_f / gcd, ny_g / gcd);
    let dg = form.deg_int(Var::G);
    if dg % a0 != 0 || dg == 0 {
        return fail(EdgeFailure::DegreeMismatch);
    }
    let nu = dg / a0;
    if form.deg_int(Var::F) != b0 * nu {
        return fail(EdgeFailure::DegreeMismatch);
    }
    let q = |k: i64| crate::int(k);
    let c = form.coefficient_of(Var::G, &q(a0 * nu));
    if c.uses(Var::F) {
        return fail(EdgeFailure::NotPureBinomialPower);
    }
    let gpow = Monomial::var(Var::G).pow(&q(a0));
    let fpow = Monomial::var(Var::F).pow(&q(b0));
    let binomial = |t: &Rational| {
        let base =
            FracPoly::term(Rational::one(), gpow.clone()) - FracPoly::term(t.clone(), fpow.clone());
        &c * &base.pow(nu as u32)
    };
    if form == binomial(&Rational::one()) {
        let edge = [
            LatticePoint::ints(&[b0 * nu, 0, 0]),
            LatticePoint::ints(&[0, a0 * nu, 0]),
        ];
        return EdgeVerdict::Binomial {
            a0: a0 as u64,
            b0: b0 as u64,
            nu: nu as u64,
            c,
            edge,
            form: form.clone(),
        };
    }
    // coefficient of G^(a0(nu-1)) F^b0 is -nu t c
    let next = form
        .coefficient_of(Var::G, &q(a0 * (nu - 1)))
        .coefficient_of(Var::F, &q(b0));
    let minus_nu_c = c.scale(&-q(nu));
    if let Some(t) = ratio(&next, &minus_nu_c) {
        if !t.is_zero() && form == binomial(&t) {
            return fail(EdgeFailure::ScaledBinomial(t));
        }
    }
    fail(EdgeFailure::NotPureBinomialPower)
}

/// `t` with `a = t b`, if it is a rational constant.
fn ratio(a: &FracPoly, b: &FracPoly) -> Option<Rational> {
    let (m, c) = b.terms().next()?;
    let t = a.coeff(m).cloned().unwrap_or_else(Rational::zero) / c;
    (b.scale(&t) == *a).then_some(t)
}
