//! Constraint checks on a candidate Jacobian pair and the bounds they imply.
//!
//! Checks never abort the report; each one is evaluated on its own and carries a witness.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{format_rational, jacobian};
use crate::dependence::{
    build_dependence, normalize_monic, DependencePoly, EdgeVerdict, MonicVerdict,
};
use crate::geometry::{
    newton_polygon, shape_audit_polytope, trapezoid_membership, LatticePoint, ShapeReport,
};
use crate::{int, FracPoly, Monomial, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("{0} is zero")]
    ZeroInput(&'static str),
    #[error("{0} violated")]
    Precondition(String),
    #[error("vertex outside the supporting cone")]
    OutsideCone,
    #[error("{stage}: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl CheckStatus {
    pub fn name(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not-applicable",
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

pub const CHECK_JACOBIAN: &str = "jacobian_is_one";
pub const CHECK_TRAPEZOID: &str = "trapezoid_f";
pub const CHECK_BISECTRIX: &str = "no_bisectrix_edge";
pub const CHECK_ORIGIN: &str = "origin_is_vertex";
pub const CHECK_SIMILAR: &str = "similar_polygons";
pub const CHECK_LEADING: &str = "leading_coefficients_one";
pub const CHECK_DIVIDES: &str = "deg_f_does_not_divide_deg_g";
pub const CHECK_GAP: &str = "n_minus_m_gt_6";
pub const CHECK_RESTRICTED: &str = "restricted_dependence_not_edge";

impl AuditReport {
    fn push(&mut self, name: &'static str, status: CheckStatus, witness: Value) {
        self.checks.push(Check {
            name,
            status,
            witness,
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.check(name).map(|c| c.status)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| json!({"name": c.name, "status": c.status.name(), "witness": c.witness}))
                .collect(),
        )
    }
}

/// `(i, j)` of the support point maximizing `y`-degree, then `x`-degree.
pub fn leading_vertex(p: &FracPoly) -> Option<(Monomial, Rational)> {
    p.terms()
        .max_by_key(|(m, _)| (m.exp(Var::Y).clone(), m.exp(Var::X).clone()))
        .map(|(m, c)| (m.clone(), c.clone()))
}

fn vertex_set(p: &FracPoly, scale: &Rational) -> Option<BTreeSet<LatticePoint>> {
    let poly = newton_polygon(p).ok()?;
    Some(
        poly.vertices
            .iter()
            .map(|v| LatticePoint(v.0.iter().map(|c| c * scale).collect()))
            .collect(),
    )
}

fn points_json(s: &BTreeSet<LatticePoint>) -> Value {
    Value::Array(s.iter().map(|p| Value::String(p.to_string())).collect())
}

/// Runs every pair-level check.
pub fn audit_pair(f: &FracPoly, g: &FracPoly) -> Result<AuditReport, AuditError> {
    if f.is_zero() {
        return Err(AuditError::ZeroInput("f"));
    }
    if g.is_zero() {
        return Err(AuditError::ZeroInput("g"));
    }
    let mut r = AuditReport::default();

    let j = jacobian(f, g, Var::X, Var::Y);
    r.push(
        CHECK_JACOBIAN,
        CheckStatus::from_bool(j == FracPoly::one()),
        json!(j.to_string()),
    );

    match trapezoid_membership(f) {
        Ok(t) => {
            r.push(
                CHECK_TRAPEZOID,
                CheckStatus::from_bool(t.passes()),
                json!(t.violations),
            );
            let edge = t
                .bisectrix_edge
                .as_ref()
                .map(|(a, b)| vec![a.to_string(), b.to_string()]);
            r.push(
                CHECK_BISECTRIX,
                CheckStatus::from_bool(edge.is_none()),
                json!(edge),
            );
        }
        Err(e) => {
            r.push(
                CHECK_TRAPEZOID,
                CheckStatus::NotApplicable,
                json!(e.to_string()),
            );
            r.push(
                CHECK_BISECTRIX,
                CheckStatus::NotApplicable,
                json!(e.to_string()),
            );
        }
    }

    let one = Rational::one();
    let origin = LatticePoint::ints(&[0, 0]);
    match (vertex_set(f, &one), vertex_set(g, &one)) {
        (Some(vf), Some(vg)) => {
            let missing: Vec<&str> = [("f", &vf), ("g", &vg)]
                .iter()
                .filter(|(_, v)| !v.contains(&origin))
                .map(|(n, _)| *n)
                .collect();
            r.push(
                CHECK_ORIGIN,
                CheckStatus::from_bool(missing.is_empty()),
                json!(missing),
            );
        }
        _ => r.push(
            CHECK_ORIGIN,
            CheckStatus::NotApplicable,
            json!("integer exponents in x, y required"),
        ),
    }

    let (nf, ng) = (f.deg_int(Var::Y), g.deg_int(Var::Y));
    if nf > 0 {
        let ratio = Rational::new(BigInt::from(ng), BigInt::from(nf));
        match (vertex_set(f, &ratio), vertex_set(g, &one)) {
            (Some(scaled), Some(vg)) => {
                let ok = scaled == vg;
                let witness = if ok {
                    json!(format_rational(&ratio))
                } else {
                    json!({"expected": points_json(&scaled), "found": points_json(&vg)})
                };
                r.push(CHECK_SIMILAR, CheckStatus::from_bool(ok), witness);
            }
            _ => r.push(
                CHECK_SIMILAR,
                CheckStatus::NotApplicable,
                json!("integer exponents in x, y required"),
            ),
        }
    } else {
        r.push(
            CHECK_SIMILAR,
            CheckStatus::NotApplicable,
            json!("deg_y(f) = 0"),
        );
    }

    let lf = leading_vertex(f).map(|(_, c)| c);
    let lg = leading_vertex(g).map(|(_, c)| c);
    let bad: Vec<String> = [("f", &lf), ("g", &lg)]
        .iter()
        .filter(|(_, c)| c.as_ref() != Some(&one))
        .map(|(n, c)| {
            format!(
                "{n}: {}",
                c.as_ref().map(format_rational).unwrap_or_default()
            )
        })
        .collect();
    r.push(
        CHECK_LEADING,
        CheckStatus::from_bool(bad.is_empty()),
        json!(bad),
    );

    if nf > 0 {
        r.push(
            CHECK_DIVIDES,
            CheckStatus::from_bool(ng % nf != 0),
            json!([nf, ng]),
        );
    } else {
        r.push(CHECK_DIVIDES, CheckStatus::NotApplicable, json!([nf, ng]));
    }

    match leading_vertex(f) {
        Some((m, _)) => {
            let gap = m.exp(Var::Y) - m.exp(Var::X);
            r.push(
                CHECK_GAP,
                CheckStatus::from_bool(gap > int(6)),
                json!(format_rational(&gap)),
            );
        }
        None => r.push(CHECK_GAP, CheckStatus::NotApplicable, Value::Null),
    }

    let (status, witness) = restricted_check(f, g);
    r.push(CHECK_RESTRICTED, status, witness);
    Ok(r)
}

/// `g(x,0)^b` against `c f(x,0)^a` for the reduced degree ratio `a/b`.
fn restricted_check(f: &FracPoly, g: &FracPoly) -> (CheckStatus, Value) {
    let y0 = [(Var::Y, int(0))];
    let (Ok(f0), Ok(g0)) = (f.eval(&y0), g.eval(&y0)) else {
        return (
            CheckStatus::NotApplicable,
            json!("cannot restrict to y = 0"),
        );
    };
    let (df, dg) = (f0.deg_int(Var::X), g0.deg_int(Var::X));
    if f0.is_zero() || g0.is_zero() || df <= 0 || dg <= 0 {
        return (
            CheckStatus::NotApplicable,
            json!({"f0": f0.to_string(), "g0": g0.to_string()}),
        );
    }
    let d = df.gcd(&dg);
    let (a, b) = ((dg / d) as u32, (df / d) as u32);
    let lhs = g0.pow(b);
    let rhs = f0.pow(a);
    let (m, c) = rhs.terms().next_back().expect("nonzero");
    let k = lhs.coeff(m).cloned().unwrap_or_else(Rational::zero) / c;
    let edge = !k.is_zero() && lhs == rhs.scale(&k);
    let witness = json!({"a": a, "b": b, "f0": f0.to_string(), "g0": g0.to_string()});
    (CheckStatus::from_bool(!edge), witness)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet {
    pub rho_upper: Rational,
    pub sigma_upper: Rational,
    pub degx_upper: Rational,
    pub zhang_bound: Rational,
    pub nm_gap_ok: bool,
}

impl BoundSet {
    pub fn to_json(&self) -> Value {
        json!({
            "degx_upper": format_rational(&self.degx_upper),
            "nm_gap_ok": self.nm_gap_ok,
            "rho_upper": format_rational(&self.rho_upper),
            "sigma_upper": format_rational(&self.sigma_upper),
            "zhang_bound": format_rational(&self.zhang_bound),
        })
    }
}

/// Lower bound on `[C(x,y) : C(f,g)]` for a Jacobian pair, used for the `n - m` gap.
pub const EXTENSION_DEGREE_LOWER: i64 = 6;

fn require(ok: bool, what: &str) -> Result<(), AuditError> {
    if ok {
        Ok(())
    } else {
        Err(AuditError::Precondition(what.to_string()))
    }
}

/// Strict upper bounds for `rho`, `sigma` and `deg_x(P)` from the data `m, n, a0, b0`.
pub fn bounds_from_data(m: i64, n: i64, a0: i64, b0: i64) -> Result<BoundSet, AuditError> {
    require(n > m, "n > m")?;
    require(m > 0, "m > 0")?;
    require(a0 > 0 && b0 > 0, "a0, b0 > 0")?;
    require(a0.gcd(&b0) == 1, "gcd(a0, b0) = 1")?;
    require(a0 < b0, "a0 < b0")?;
    let denom = int(n * (a0 + b0) - a0);
    let gap = int(n - m);
    Ok(BoundSet {
        rho_upper: &gap * int(a0) / &denom,
        sigma_upper: &gap * int(b0) / &denom,
        degx_upper: &gap * int(n * b0) / &denom,
        zhang_bound: int(m + n),
        nm_gap_ok: n - m > EXTENSION_DEGREE_LOWER,
    })
}

/// `rho >= k / (lambda0 (n - j) - i)` contributed by the vertex `(i, j, k)` of `N(P)`.
pub fn vertex_rho_bound(
    i: i64,
    j: i64,
    k: i64,
    lambda0: &Rational,
    n: i64,
) -> Result<Rational, AuditError> {
    require(k >= 0, "k >= 0")?;
    let denom = lambda0 * int(n - j) - int(i);
    if !denom.is_positive() {
        return Err(AuditError::OutsideCone);
    }
    Ok(int(k) / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharPairVerdict {
    pub a: i64,
    pub b: i64,
    pub a0: i64,
    pub b0: i64,
    pub rho_lower: Rational,
    pub rho_upper: Rational,
    pub contradiction: bool,
    /// Solution of `a0 i + b0 j = 1 - a0 b + b0 (a0 - 1) b` with `0 <= j < a0`.
    pub i: i64,
    pub j: i64,
}

impl CharPairVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a, "a0": self.a0, "b": self.b, "b0": self.b0,
            "contradiction": self.contradiction,
            "i": self.i, "j": self.j,
            "rho_lower": format_rational(&self.rho_lower),
            "rho_upper": format_rational(&self.rho_upper),
        })
    }
}

/// The two bounds on `rho` in the case of two characteristic pairs.
pub fn char_pair_contradiction(
    a: i64,
    b: i64,
    a0: i64,
    b0: i64,
) -> Result<CharPairVerdict, AuditError> {
    require(0 < a && a < b, "0 < a < b")?;
    require(a0 >= 1, "a0 >= 1")?;
    require(b0 > a0, "b0 > a0")?;
    require(a0.gcd(&b0) == 1, "gcd(a0, b0) = 1")?;
    let num = int((b - a) * a0);
    let rho_lower = &num / int(b * a0 + b * b0 - 1);
    let rho_upper = &num / int(b * (a0 + b0) - 1);
    let rhs = 1 - a0 * b + b0 * (a0 - 1) * b;
    let j = (0..a0)
        .find(|j| (rhs - b0 * j) % a0 == 0)
        .expect("gcd(a0, b0) = 1");
    let i = (rhs - b0 * j) / a0;
    Ok(CharPairVerdict {
        a,
        b,
        a0,
        b0,
        contradiction: rho_lower >= rho_upper,
        rho_lower,
        rho_upper,
        i,
        j,
    })
}

#[derive(Debug, Clone, Default)]
pub struct AuditOptions {
    /// `f -> f - c1, g -> g - c2` before the dependence and polytope stages.
    pub shift: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone)]
pub struct FullReport {
    pub audit: AuditReport,
    pub dependence: Result<DependencePoly, AuditError>,
    pub monic: Option<MonicVerdict>,
    pub shape: Option<Result<ShapeReport, AuditError>>,
    pub bounds: Option<Result<BoundSet, AuditError>>,
    /// `deg_x(P)`, which is `[C(x,y) : C(f,g)]` when `deg_G(P) = deg_y(f)`.
    pub extension_degree: Option<i64>,
    /// `deg_x(P) < degx_upper`, when both are known.
    pub degree_estimate_ok: Option<bool>,
}

fn err_json(e: &AuditError) -> Value {
    match e {
        AuditError::Stage { stage, message } => {
            json!({"error": {"message": message, "stage": stage}})
        }
        other => json!({"error": {"message": other.to_string(), "stage": "audit"}}),
    }
}

impl FullReport {
    /// Whether every check that could be evaluated passed.
    pub fn all_pass(&self) -> bool {
        self.audit.all_pass()
            && self
                .shape
                .as_ref()
                .is_none_or(|s| s.as_ref().is_ok_and(ShapeReport::passes))
            && self.degree_estimate_ok != Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bounds": self.bounds.as_ref().map(|b| b.as_ref().map_or_else(err_json, BoundSet::to_json)),
            "checks": self.audit.to_json(),
            "degree_estimate_ok": self.degree_estimate_ok,
            "dependence": self.dependence.as_ref().map_or_else(err_json, DependencePoly::to_json),
            "extension_degree": self.extension_degree,
            "monic": self.monic.as_ref().map(|m| match m {
                MonicVerdict::Monic(p) => json!({"monic": p.to_string()}),
                MonicVerdict::NotMonomial(p0) => json!({"verdict": "p_0 not a monomial", "p0": p0.to_string()}),
            }),
            "shape": self.shape.as_ref().map(|s| s.as_ref().map_or_else(err_json, ShapeReport::to_json)),
        })
    }
}

/// Audit, dependence, normalization, edge data, polytope shape and bounds in one pass.
pub fn full_report(
    f: &FracPoly,
    g: &FracPoly,
    opts: &AuditOptions,
) -> Result<FullReport, AuditError> {
    let audit = audit_pair(f, g)?;
    let (fs, gs) = match &opts.shift {
        Some((c1, c2)) => (
            f - &FracPoly::constant(c1.clone()),
            g - &FracPoly::constant(c2.clone()),
        ),
        None => (f.clone(), g.clone()),
    };
    let dependence = build_dependence(&fs, &gs).map_err(|e| AuditError::Stage {
        stage: "dependence",
        message: e.to_string(),
    });
    let mut report = FullReport {
        audit,
        dependence: Err(AuditError::OutsideCone),
        monic: None,
        shape: None,
        bounds: None,
        extension_degree: None,
        degree_estimate_ok: None,
    };
    if let Ok(d) = &dependence {
        report.monic = Some(normalize_monic(&d.p));
        report.shape = Some(match &d.polytope {
            Some(poly) => shape_audit_polytope(poly).map_err(|e| AuditError::Stage {
                stage: "shape",
                message: e.to_string(),
            }),
            None => Err(AuditError::Stage {
                stage: "polytope",
                message: "no polytope".into(),
            }),
        });
        if d.deg(Var::G) == d.ny_f as i64 {
            report.extension_degree = Some(d.deg(Var::X));
        }
        if let (EdgeVerdict::Binomial { a0, b0, .. }, Some((lv, _))) =
            (&d.edge, leading_vertex(&fs))
        {
            let ints = (
                lv.exp(Var::X).to_integer().to_i64(),
                lv.exp(Var::Y).to_integer().to_i64(),
            );
            if let (Some(m), Some(n)) = ints {
                let b =
                    bounds_from_data(m, n, *a0 as i64, *b0 as i64).map_err(|e| AuditError::Stage {
                        stage: "bounds",
                        message: e.to_string(),
                    });
                if let Ok(b) = &b {
                    report.degree_estimate_ok = Some(int(d.deg(Var::X)) < b.degx_upper);
                }
                report.bounds = Some(b);
            }
        }
    }
    report.dependence = dependence;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_poly;
    use crate::rat;

    fn p(s: &str) -> FracPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn audit_of_elementary_automorphism() {
        let r = audit_pair(&p("x + y^2"), &p("y")).unwrap();
        assert_eq!(r.status(CHECK_JACOBIAN), Some(CheckStatus::Pass));
        assert_eq!(r.status(CHECK_TRAPEZOID), Some(CheckStatus::Fail));
        assert_eq!(
            r.check(CHECK_TRAPEZOID).unwrap().witness,
            json!(["m = 0", "support point (1,0) outside trapezoid"])
        );
        assert_eq!(r.status(CHECK_DIVIDES), Some(CheckStatus::Pass));
        assert_eq!(r.status(CHECK_GAP), Some(CheckStatus::Fail));
    }

    #[test]
    fn self_pair_has_zero_jacobian() {
        let f = p("x^2*y^3 + x*y + 1");
        let r = audit_pair(&f, &f).unwrap();
        assert_eq!(r.status(CHECK_JACOBIAN), Some(CheckStatus::Fail));
        assert_eq!(r.check(CHECK_JACOBIAN).unwrap().witness, json!("0"));
        assert_eq!(r.status(CHECK_DIVIDES), Some(CheckStatus::Fail));
    }

    #[test]
    fn similarity_by_exact_scaling() {
        let r = audit_pair(&p("1 + x^2 + y^2"), &p("1 + x^3 + y^3")).unwrap();
        assert_eq!(r.status(CHECK_SIMILAR), Some(CheckStatus::Pass));
        assert_eq!(r.status(CHECK_ORIGIN), Some(CheckStatus::Pass));
        let r = audit_pair(&p("1 + x^2 + y^2"), &p("1 + x^2 + y^3")).unwrap();
        assert_eq!(r.status(CHECK_SIMILAR), Some(CheckStatus::Fail));
    }

    #[test]
    fn restricted_pair() {
        // f(x,0) = x^2, g(x,0) = x^3: g0^2 = f0^3, an edge
        let r = audit_pair(&p("x^2 + y"), &p("x^3 + y^2")).unwrap();
        assert_eq!(r.status(CHECK_RESTRICTED), Some(CheckStatus::Fail));
        let r = audit_pair(&p("x^2 + x + y"), &p("x^3 + y^2")).unwrap();
        assert_eq!(r.status(CHECK_RESTRICTED), Some(CheckStatus::Pass));
    }

    #[test]
    fn bounds() {
        let b = bounds_from_data(1, 4, 2, 3).unwrap();
        assert_eq!(
            (b.rho_upper, b.sigma_upper, b.degx_upper, b.zhang_bound),
            (rat(1, 3), rat(1, 2), int(2), int(5))
        );
        assert!(!b.nm_gap_ok);
        let b = bounds_from_data(1, 8, 2, 3).unwrap();
        assert_eq!(
            (b.rho_upper, b.sigma_upper, b.degx_upper, b.zhang_bound),
            (rat(7, 19), rat(21, 38), rat(84, 19), int(9))
        );
        assert_eq!(
            bounds_from_data(3, 3, 2, 3),
            Err(AuditError::Precondition("n > m".into()))
        );
        assert_eq!(
            bounds_from_data(3, 3, 2, 3).unwrap_err().to_string(),
            "n > m violated"
        );
    }

    #[test]
    fn vertex_bounds() {
        assert_eq!(vertex_rho_bound(0, 0, 1, &rat(3, 2), 4).unwrap(), rat(1, 6));
        assert_eq!(vertex_rho_bound(1, 1, 2, &rat(3, 2), 4).unwrap(), rat(4, 7));
        assert_eq!(vertex_rho_bound(0, 0, 0, &rat(3, 2), 4).unwrap(), int(0));
        assert_eq!(
            vertex_rho_bound(6, 0, 1, &rat(3, 2), 4),
            Err(AuditError::OutsideCone)
        );
    }

    #[test]
    fn char_pairs() {
        let v = char_pair_contradiction(1, 2, 2, 3).unwrap();
        assert_eq!(
            (v.rho_lower.clone(), v.rho_upper.clone(), v.contradiction),
            (rat(2, 9), rat(2, 9), true)
        );
        assert_eq!(2 * v.i + 3 * v.j, 1 - 2 * 2 + 3 * 2);
        let v = char_pair_contradiction(2, 3, 3, 4).unwrap();
        assert_eq!((v.rho_lower, v.contradiction), (rat(3, 20), true));
        assert!(char_pair_contradiction(2, 2, 2, 3).is_err());
        assert!(char_pair_contradiction(1, 2, 2, 4).is_err());
    }

    #[test]
    fn full_report_with_shift() {
        let r = full_report(&p("x + y^2"), &p("y"), &AuditOptions::default()).unwrap();
        assert_eq!(r.dependence.as_ref().unwrap().p, p("G^2 - F + x"));
        assert_eq!(r.extension_degree, Some(1));
        let opts = AuditOptions {
            shift: Some((int(1), int(1))),
        };
        let r = full_report(&p("x + y^2"), &p("y"), &opts).unwrap();
        assert_eq!(r.dependence.as_ref().unwrap().p, p("(G+1)^2 - (F+1) + x"));
        let r = full_report(&p("y^2"), &p("y^3 + y"), &AuditOptions::default()).unwrap();
        assert_eq!(r.audit.status(CHECK_JACOBIAN), Some(CheckStatus::Fail));
        assert!(r.dependence.is_ok());
    }
}
