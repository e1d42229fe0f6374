//! Roots of edge polynomials: exact rational roots first, numerical roots otherwise.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::algebra::upoly::UPoly;
use crate::scalar::rational_to_f64;
use crate::Rational;

/// A numerically located root with an error radius and multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ApproxRoot {
    pub value: Complex64,
    pub radius: f64,
    pub mult: usize,
}

/// Relative distance under which numerical roots are merged into one cluster.
const CLUSTER_TOL: f64 = 1e-4;
/// Relative radius beyond which a root is considered unresolved.
const RADIUS_LIMIT: f64 = 1e-3;

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::zero(), |acc, c| acc * z + c)
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * k as f64;
    }
    acc
}

/// All complex roots of `sum coeffs[k] z^k` (Durand-Kerner, then Newton polishing).
pub(crate) fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lc).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let turn = std::f64::consts::TAU / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound, turn * k as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for k in 0..n {
            let mut denom = Complex64::one();
            for j in 0..n {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-300, 0.0);
            }
            let step = horner(&monic, z[k]) / denom;
            z[k] -= step;
            delta = delta.max(step.norm() / z[k].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        for _ in 0..3 {
            let d = horner_derivative(&monic, *r);
            if d.norm() < 1e-300 {
                break;
            }
            let step = horner(&monic, *r) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    z
}

/// Simple roots with a Newton-style error radius.
fn simple_roots(coeffs: &[Complex64]) -> Vec<ApproxRoot> {
    let n = coeffs.len() - 1;
    durand_kerner(coeffs)
        .into_iter()
        .map(|z| {
            let d = horner_derivative(coeffs, z).norm();
            let v = horner(coeffs, z).norm();
            let radius = if d > 0.0 {
                n as f64 * v / d
            } else {
                f64::INFINITY
            };
            ApproxRoot {
                value: z,
                radius: radius.max(f64::EPSILON * z.norm()),
                mult: 1,
            }
        })
        .collect()
}

/// Roots of a complex polynomial, with numerically detected multiplicities.
pub(crate) fn cluster_roots(coeffs: &[Complex64]) -> Result<Vec<ApproxRoot>, String> {
    let raw = durand_kerner(coeffs);
    let mut used = vec![false; raw.len()];
    let mut out = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        let scale = raw[i].norm().max(1.0);
        let members: Vec<usize> = (i..raw.len())
            .filter(|&j| !used[j] && (raw[j] - raw[i]).norm() <= CLUSTER_TOL * scale)
            .collect();
        for &j in &members {
            used[j] = true;
        }
        let mean = members.iter().map(|&j| raw[j]).sum::<Complex64>() / members.len() as f64;
        let spread = members
            .iter()
            .map(|&j| (raw[j] - mean).norm())
            .fold(0.0, f64::max);
        let radius = if members.len() == 1 {
            let d = horner_derivative(coeffs, mean).norm();
            let v = horner(coeffs, mean).norm();
            if d > 0.0 {
                (coeffs.len() - 1) as f64 * v / d
            } else {
                f64::INFINITY
            }
        } else {
            spread * 2.0
        };
        let radius = radius.max(f64::EPSILON * mean.norm());
        // also rejects NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(radius <= RADIUS_LIMIT * scale) {
            return Err(format!("root near {mean} has error radius {radius:e}"));
        }
        out.push(ApproxRoot {
            value: mean,
            radius,
            mult: members.len(),
        });
    }
    Ok(out)
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
pub(crate) fn convergents(x: f64, max_den: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let Some(ai) = num_traits::FromPrimitive::from_f64(a) else {
            break;
        };
        let ai: BigInt = ai;
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if &k2 > max_den {
            break;
        }
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-18 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

/// Roots of `phi` over `Q`: the rational ones exactly, the rest numerically.
///
/// Multiplicities come from the square-free decomposition, so they are exact
/// even for irrational roots.
pub(crate) fn rational_edge_roots(
    phi: &UPoly<Rational>,
) -> (Vec<(Rational, usize)>, Vec<ApproxRoot>) {
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    for (factor, k) in phi.squarefree() {
        let mut rest = factor;
        loop {
            match rest.degree() {
                Some(0) | None => break,
                Some(1) => {
                    exact.push((-rest.coeff(0) / rest.coeff(1), k));
                    rest = UPoly::constant(Rational::one());
                }
                Some(2) => {
                    let (a, b, c) = (rest.coeff(2), rest.coeff(1), rest.coeff(0));
                    let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &a * &c;
                    if let Some(s) = crate::algebra::rational_root(&disc, 2) {
                        let two_a = &a * Rational::from_integer(BigInt::from(2));
                        exact.push(((-&b + &s) / &two_a, k));
                        exact.push(((-&b - &s) / &two_a, k));
                        rest = UPoly::constant(Rational::one());
                    }
                    break;
                }
                Some(_) => match find_rational_root(&rest) {
                    Some(r) => {
                        exact.push((r.clone(), k));
                        let linear = UPoly::new(vec![-r, Rational::one()]);
                        rest = rest.div_rem(&linear).0;
                    }
                    None => break,
                },
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            let coeffs: Vec<Complex64> = rest
                .coeffs()
                .iter()
                .map(|c| Complex64::new(rational_to_f64(c), 0.0))
                .collect();
            for mut r in simple_roots(&coeffs) {
                r.mult = k;
                approx.push(r);
            }
        }
    }
    (exact, approx)
}

/// Searches for one rational root of a square-free polynomial of degree at least 3.
fn find_rational_root(p: &UPoly<Rational>) -> Option<Rational> {
    // clear denominators to get the leading coefficient bound on root denominators
    let l = crate::algebra::lcm_denominators(p.coeffs().iter());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let lc = ints.last().expect("nonzero").abs();
    let coeffs: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(rational_to_f64(c), 0.0))
        .collect();
    for z in durand_kerner(&coeffs) {
        if z.im.abs() > 1e-6 * z.norm().max(1.0) {
            continue;
        }
        for cand in convergents(z.re, &lc) {
            if (rational_to_f64(&cand) - z.re).abs() > 1e-6 * z.norm().max(1.0) {
                continue;
            }
            if lc.clone() % cand.denom() != BigInt::zero() {
                continue;
            }
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}
