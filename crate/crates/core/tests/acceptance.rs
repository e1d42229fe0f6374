//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with `harness = false`; exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use jacpoly::audit::{bounds_from_data, char_pair_contradiction};
use jacpoly::dependence::{build_dependence, verify_dependence, EdgeVerdict};
use jacpoly::geometry::{
    convex_hull, shape_audit_polytope, LatticePoint, CHECK_SLANTED, CHECK_VERTICES,
};
use jacpoly::puiseux::{all_branches, residual, Direction};
use jacpoly::series::{
    binomial_power, expand_g_in_f, AsymSeries, ExpansionOptions, ExpansionStatus, LeadingTerm,
};
use jacpoly::{int, rat, Monomial, Rational, Var};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn c1_dependence() -> Outcome {
    let start = Instant::now();
    let random = random_corpus(25);
    let auto = automorphic_pairs();
    for (k, (f, g)) in random.iter().chain(&auto).enumerate() {
        let d = build_dependence(f, g).map_err(|e| format!("pair {k}: {e}"))?;
        ensure(verify_dependence(&d.p, f, g), || {
            format!("pair {k}: P(f, g) != 0")
        })?;
        ensure(relation_vanishes_at_points(&d.p, f, g), || {
            format!("pair {k}: pointwise check failed")
        })?;
        let (dg, ny) = (d.deg(Var::G), f.deg_int(Var::Y));
        ensure(ny % dg == 0, || {
            format!("pair {k}: deg_G(P) = {dg} does not divide deg_y(f) = {ny}")
        })?;
        if k >= random.len() {
            ensure(dg == ny, || {
                format!("automorphic pair {k}: deg_G(P) = {dg} != {ny}")
            })?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} pairs verified in {:.2?}",
        random.len() + auto.len(),
        start.elapsed()
    ))
}

fn c2_leading_edge() -> Outcome {
    let (mut decomposed, mut failures) = (0, 0);
    let random = random_corpus(25);
    let auto = automorphic_pairs();
    for (k, (f, g)) in random.iter().chain(&auto).enumerate() {
        let d = build_dependence(f, g).map_err(|e| format!("pair {k}: {e}"))?;
        match &d.edge {
            EdgeVerdict::Binomial { a0, b0, nu, .. } => {
                ensure(
                    (b0 * nu) as i64 == d.deg(Var::F) && (a0 * nu) as i64 == d.deg(Var::G),
                    || {
                        format!(
                            "pair {k}: a0={a0} b0={b0} nu={nu} against degrees of {}",
                            d.p
                        )
                    },
                )?;
                decomposed += 1;
            }
            EdgeVerdict::Failure { .. } => {
                ensure(k < random.len(), || {
                    format!("automorphic pair {k}: no decomposition")
                })?;
                failures += 1;
            }
        }
    }
    Ok(format!(
        "{decomposed} decomposed, {failures} structured failures"
    ))
}

fn c3_puiseux() -> Outcome {
    let start = Instant::now();
    let order = int(8);
    let mut exact = 0;
    for q in puiseux_polys() {
        let ny = q.deg_int(Var::Y);
        let bs =
            all_branches(&q, Direction::Increasing, &order).map_err(|e| format!("{q}: {e}"))?;
        let total: usize = bs.iter().map(|b| b.multiplicity).sum();
        ensure(total as i64 == ny, || {
            format!("{q}: multiplicities sum to {total}")
        })?;
        for b in &bs {
            ensure(b.ramification as i64 <= ny, || {
                format!("{q}: ramification {} of {b}", b.ramification)
            })?;
            for t in &b.terms {
                let den = t.exponent.denom().to_i64().unwrap_or(i64::MAX);
                ensure(den <= ny, || format!("{q}: exponent denominator {den}"))?;
            }
            if b.exact {
                let r = residual(&q, b).ok_or_else(|| format!("{q}: no residual for {b}"))?;
                ensure(r.beyond(&order), || {
                    format!("{q}: residual {r:?} of {b} not beyond 8")
                })?;
                exact += 1;
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "10 polynomials, {exact} exact branches checked, {:.2?}",
        start.elapsed()
    ))
}

fn random_series(rng: &mut ChaCha8Rng, r: &Rational) -> AsymSeries {
    // leading term d^q x^e y^k with r k integral, so |a|^r is rational
    let q = r.denom().to_i64().unwrap();
    let step = q / num_integer::gcd(q, r.numer().to_i64().unwrap());
    let ks: Vec<i64> = (-6..=3).filter(|k| k % step == 0).collect();
    let k = ks[rng.gen_range(0..ks.len())];
    let d: i64 = rng.gen_range(1..=2);
    let mut a = jacpoly::FracPoly::zero();
    a.add_term(
        Monomial::from_ints(rng.gen_range(-2..=2), k, 0, 0),
        int(d.pow(q as u32)),
    );
    for _ in 0..3 {
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        a.add_term(
            Monomial::from_ints(rng.gen_range(-2..=2), k - rng.gen_range(1..=4), 0, 0),
            int(c),
        );
    }
    AsymSeries::from_poly(&a, None).unwrap()
}

fn c4_fractional_powers() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..100 {
        let r = loop {
            let (pn, q) = (rng.gen_range(-5i64..=5), rng.gen_range(1i64..=4));
            if pn != 0 {
                break rat(pn, q);
            }
        };
        let a = random_series(&mut rng, &r);
        let (pn, q) = (
            r.numer().to_i64().unwrap(),
            r.denom().to_i64().unwrap() as u32,
        );
        let top = a.top().unwrap();
        let rk = (&r * int(top)).to_integer().to_i64().unwrap();
        let floor = rk - 8;
        let b = binomial_power(&a, &r, floor).map_err(|e| format!("trial {trial}: {e}"))?;
        // compare b^q with a^p, or b^q a^|p| with 1
        let (lhs, rhs) = if pn > 0 {
            (b.pow(q), a.pow(pn as u32))
        } else {
            (
                b.pow(q).mul(&a.pow((-pn) as u32)),
                AsymSeries::constant(int(1)),
            )
        };
        let known = lhs.floor().unwrap();
        ensure(known < rhs.top().unwrap(), || {
            format!("trial {trial}: floor {known} leaves nothing to compare")
        })?;
        ensure(lhs.eq_mod_floor(&rhs), || {
            format!("trial {trial}: r = {r}, a = {}", a.to_poly())
        })?;
    }
    Ok("100 series, exact agreement above the floor".into())
}

fn c5_expansions() -> Outcome {
    let opts = ExpansionOptions::default();
    let e = expand_g_in_f(&p("x + y^2"), &p("y"), -8, &opts).map_err(|e| e.to_string())?;
    ensure(
        e.status == ExpansionStatus::TerminatedUnimodular && e.kappa == 1,
        || format!("{e:?}"),
    )?;
    ensure(
        e.lambdas == vec![rat(1, 2)] && e.coeffs == vec![p("1")],
        || format!("{e:?}"),
    )?;
    ensure(
        e.remainder
            == Some(LeadingTerm {
                coeff: p("-1/2*x"),
                yexp: -1,
            }),
        || format!("{:?}", e.remainder),
    )?;
    ensure(e.formula_holds(), || "formula (m,n) = (0,2)".into())?;
    let e = expand_g_in_f(&p("y"), &p("-x"), -8, &opts).map_err(|e| e.to_string())?;
    ensure(
        e.kappa == 0
            && e.remainder
                == Some(LeadingTerm {
                    coeff: p("-x"),
                    yexp: 0,
                }),
        || format!("{e:?}"),
    )?;
    ensure(e.formula_holds(), || "formula (m,n) = (0,1)".into())?;
    Ok("both worked pairs match (1/(m-n)) x^(1-m) y^(1-n)".into())
}

fn c6_char_pairs() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for b in 2..=20 {
        for a in 1..b {
            for b0 in 2..=20 {
                for a0 in 1..b0 {
                    if num_integer::gcd(a0, b0) != 1 {
                        continue;
                    }
                    let v = char_pair_contradiction(a, b, a0, b0).map_err(|e| e.to_string())?;
                    ensure(v.rho_lower == v.rho_upper && v.contradiction, || {
                        format!("{v:?}")
                    })?;
                    ensure(
                        a0 * v.i + b0 * v.j == 1 - a0 * b + b0 * (a0 - 1) * b
                            && (0..a0).contains(&v.j),
                        || format!("bad witness {v:?}"),
                    )?;
                    count += 1;
                }
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{count} tuples, all contradictory, {:.2?}",
        start.elapsed()
    ))
}

fn hull_agrees(points: &[Vec<i64>]) -> Result<(), String> {
    let d = points[0].len();
    let lattice: Vec<LatticePoint> = points.iter().map(|q| LatticePoint::ints(q)).collect();
    let hull = convex_hull(&lattice, d).map_err(|e| e.to_string())?;
    let oracle = oracle_hull(points);
    let verts: std::collections::BTreeSet<Vec<i64>> = hull
        .vertices
        .iter()
        .map(|v| v.0.iter().map(to_i64).collect())
        .collect();
    ensure(verts == oracle.vertices, || {
        format!("vertices {verts:?} vs {:?} for {points:?}", oracle.vertices)
    })?;
    let normals: std::collections::BTreeSet<Vec<i64>> = hull
        .faces
        .iter()
        .map(|f| {
            f.normal
                .as_ref()
                .expect("facet normal")
                .iter()
                .map(|a| a.to_i64().unwrap())
                .collect()
        })
        .collect();
    ensure(normals == oracle.normals, || {
        format!("normals {normals:?} vs {:?} for {points:?}", oracle.normals)
    })?;
    ensure(hull.faces.len() == oracle.normals.len(), || {
        "duplicate facets".into()
    })
}

fn c7_hull_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(3..=12);
        hull_agrees(&random_points(&mut rng, 2, n, 6))?;
    }
    for _ in 0..100 {
        let n = rng.gen_range(4..=12);
        hull_agrees(&random_points(&mut rng, 3, n, 4))?;
    }
    Ok("200 planar and 100 spatial point sets agree".into())
}

fn c8_shape_audit() -> Outcome {
    let tetra = ["0,0,0", "3,0,0", "0,2,0", "0,0,1"];
    let pts = |extra: &[&str]| -> Vec<LatticePoint> {
        tetra
            .iter()
            .chain(extra)
            .map(|s| {
                LatticePoint::ints(
                    &s.split(',')
                        .map(|a| a.parse().unwrap())
                        .collect::<Vec<i64>>(),
                )
            })
            .collect()
    };
    let poly = convex_hull(&pts(&[]), 3).map_err(|e| e.to_string())?;
    let r = shape_audit_polytope(&poly).map_err(|e| e.to_string())?;
    ensure(r.passes(), || format!("{:?}", r.checks))?;
    let poly = convex_hull(&pts(&["2,2,1"]), 3).map_err(|e| e.to_string())?;
    let r = shape_audit_polytope(&poly).map_err(|e| e.to_string())?;
    let v = r.check(CHECK_VERTICES).ok_or("missing check")?;
    ensure(!v.pass && v.witness == vec!["(2,2,1)".to_string()], || {
        format!("{v:?}")
    })?;
    let s = r.check(CHECK_SLANTED).ok_or("missing check")?;
    ensure(!s.pass && !s.witness.is_empty(), || format!("{s:?}"))?;
    // every slanted edge must touch the new vertex and have no zero coordinate
    for w in &s.witness {
        let ends: Vec<Vec<i64>> = w
            .split('-')
            .map(|e| {
                e.trim_matches(|c| c == '(' || c == ')')
                    .split(',')
                    .map(|a| a.parse().unwrap())
                    .collect()
            })
            .collect();
        ensure(ends.contains(&vec![2, 2, 1]), || {
            format!("edge {w} does not touch (2,2,1)")
        })?;
        ensure((0..3).all(|k| ends[0][k] != ends[1][k]), || {
            format!("edge {w} is not slanted")
        })?;
    }
    Ok(format!(
        "tetrahedron passes; extra vertex flagged with {} slanted edges",
        s.witness.len()
    ))
}

fn c9_bounds() -> Outcome {
    let b = bounds_from_data(1, 8, 2, 3).map_err(|e| e.to_string())?;
    ensure(
        b.rho_upper == rat(7, 19) && b.sigma_upper == rat(21, 38),
        || format!("{b:?}"),
    )?;
    ensure(
        b.degx_upper == rat(84, 19) && b.zhang_bound == int(9),
        || format!("{b:?}"),
    )?;
    ensure(b.degx_upper < b.zhang_bound, || {
        "not sharper than m + n".into()
    })?;
    Ok("7/19, 21/38, 84/19 < 9".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 dependence correctness", c1_dependence),
        ("2 leading edge form", c2_leading_edge),
        ("3 puiseux branches", c3_puiseux),
        ("4 fractional powers", c4_fractional_powers),
        ("5 expansion of g", c5_expansions),
        ("6 two characteristic pairs", c6_char_pairs),
        ("7 hull oracle", c7_hull_oracle),
        ("8 shape audit", c8_shape_audit),
        ("9 bounds", c9_bounds),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match std::panic::catch_unwind(run) {
            Ok(Ok(msg)) => println!("criterion {name}: PASS ({msg})"),
            Ok(Err(msg)) => {
                failed += 1;
                println!("criterion {name}: FAIL ({msg})");
            }
            Err(_) => {
                failed += 1;
                println!("criterion {name}: FAIL (panicked)");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
