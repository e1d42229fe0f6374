//! Shared fixtures and test-side oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use jacpoly::cli::parse_poly;
use jacpoly::{int, FracPoly, Monomial, Rational, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_2026;

pub fn p(s: &str) -> FracPoly {
    parse_poly(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// A random polynomial with `deg_y = ny` exactly, `deg_x <= 3`, integer coefficients in `[-3, 3]`.
pub fn random_poly(rng: &mut impl Rng, ny: i64, terms: usize) -> FracPoly {
    let coeff = |rng: &mut dyn rand::RngCore| loop {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            return c;
        }
    };
    let mut out = FracPoly::zero();
    out.add_term(
        Monomial::from_ints(rng.gen_range(0..=3), ny, 0, 0),
        int(coeff(rng)),
    );
    for _ in 1..terms {
        let m = Monomial::from_ints(rng.gen_range(0..=3), rng.gen_range(0..ny), 0, 0);
        out.add_term(m, int(coeff(rng)));
    }
    if out.deg_int(Var::Y) != ny {
        out.add_term(Monomial::from_ints(0, ny, 0, 0), int(1));
    }
    out
}

/// The seeded corpus of random pairs.
pub fn random_corpus(count: usize) -> Vec<(FracPoly, FracPoly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..count)
        .map(|_| {
            let (nf, ng) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let (tf, tg) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
            (random_poly(&mut rng, nf, tf), random_poly(&mut rng, ng, tg))
        })
        .collect()
}

/// Hand-built automorphisms of the plane (compositions of triangular maps), `J = 1`.
pub fn automorphic_pairs() -> Vec<(FracPoly, FracPoly)> {
    vec![
        (p("x + y^2"), p("y")),
        (p("y"), p("-x + y^3")),
        (p("x + y^2"), p("y + (x + y^2)^2")),
        (p("x + y^3 - 2*y"), p("y + (x + y^3 - 2*y)^2")),
        (p("x + (y + x^2)^2"), p("y + x^2")),
    ]
}

/// Exact value of a polynomial in `x, y` (or `x, F, G`) at integer points.
pub fn eval_at(q: &FracPoly, values: &[(Var, Rational)]) -> Rational {
    let r = q.eval(values).expect("evaluable");
    r.as_constant()
        .unwrap_or_else(|| panic!("not constant after evaluation: {r}"))
}

/// Pointwise check `P(x0, f(x0,y0), g(x0,y0)) = 0` at a few integer points;
/// independent of symbolic substitution.
pub fn relation_vanishes_at_points(pp: &FracPoly, f: &FracPoly, g: &FracPoly) -> bool {
    for (x0, y0) in [(2, 3), (-1, 5), (3, -2), (7, 1)] {
        let xy = [(Var::X, int(x0)), (Var::Y, int(y0))];
        let fv = eval_at(f, &xy);
        let gv = eval_at(g, &xy);
        let v = eval_at(pp, &[(Var::X, int(x0)), (Var::F, fv), (Var::G, gv)]);
        if v != int(0) {
            return false;
        }
    }
    true
}

// ---- brute-force hull oracle on i64 points

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0, |g, &a| gcd(g, a));
    v.into_iter().map(|a| a / g).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn rank(vectors: &[Vec<i64>]) -> usize {
    // fraction-free elimination
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&a| a as i128).collect())
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x = *x * a - p * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| {
                    let (mut a, mut b) = (g.abs(), x.abs());
                    while b != 0 {
                        (a, b) = (b, a % b);
                    }
                    a
                });
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

pub fn affine_rank(points: &[Vec<i64>]) -> usize {
    let diffs: Vec<Vec<i64>> = points.iter().map(|q| sub(q, &points[0])).collect();
    rank(&diffs)
}

/// Facet normals and vertices of the hull of full-dimensional `points` (2D or 3D),
/// by trying every line/plane through 2 or 3 points.
pub struct OracleHull {
    pub vertices: BTreeSet<Vec<i64>>,
    pub normals: BTreeSet<Vec<i64>>,
}

pub fn oracle_hull(points: &[Vec<i64>]) -> OracleHull {
    let d = points[0].len();
    let mut normals = BTreeSet::new();
    let n = points.len();
    let mut candidates = Vec::new();
    if d == 2 {
        for i in 0..n {
            for j in 0..n {
                let e = sub(&points[j], &points[i]);
                if e.iter().any(|&a| a != 0) {
                    candidates.push((i, vec![e[1], -e[0]]));
                }
            }
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (u, v) = (sub(&points[j], &points[i]), sub(&points[k], &points[i]));
                    let c = vec![
                        u[1] * v[2] - u[2] * v[1],
                        u[2] * v[0] - u[0] * v[2],
                        u[0] * v[1] - u[1] * v[0],
                    ];
                    if c.iter().any(|&a| a != 0) {
                        candidates.push((i, c.clone()));
                        candidates.push((i, c.iter().map(|a| -a).collect()));
                    }
                }
            }
        }
    }
    for (i, c) in candidates {
        let h = dot(&c, &points[i]);
        if points.iter().all(|q| dot(&c, q) <= h) {
            normals.insert(primitive(c));
        }
    }
    let vertices = points
        .iter()
        .filter(|q| {
            let through: Vec<Vec<i64>> = normals
                .iter()
                .filter(|c| points.iter().all(|r| dot(c, r) <= dot(c, q)))
                .cloned()
                .collect();
            rank(&through) == d
        })
        .cloned()
        .collect();
    OracleHull { vertices, normals }
}

/// Random full-dimensional point set on a small grid.
pub fn random_points(rng: &mut impl Rng, d: usize, count: usize, extent: i64) -> Vec<Vec<i64>> {
    loop {
        let pts: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..d).map(|_| rng.gen_range(0..=extent)).collect())
            .collect();
        if affine_rank(&pts) == d {
            return pts;
        }
    }
}

pub fn to_i64(r: &Rational) -> i64 {
    assert!(r.is_integer());
    r.to_integer().try_into().expect("small")
}

/// The ten fixed Puiseux test polynomials.
pub fn puiseux_polys() -> Vec<FracPoly> {
    [
        "y^2 - x",
        "y^3 - x^2",
        "(y - x)^2 - x^3",
        "y^3 - y^2 + x",
        "(y^2 - x)^2 - x^5",
        "y^2 - 2*x^2",
        "y^3 - 3*x*y + x^3",
        "y^5 - x^2*y - x^3",
        "x*y^3 + y - 1",
        "y^4 + x*y^2 - x^2*y + x^4",
    ]
    .iter()
    .map(|s| p(s))
    .collect()
}
