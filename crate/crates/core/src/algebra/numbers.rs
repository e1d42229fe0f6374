use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of `r` if it is rational (real root, sign preserved for odd `k`).
pub fn rational_root(r: &Rational, k: u32) -> Option<Rational> {
    if k == 0 {
        return None;
    }
    let num = int_root(r.numer(), k)?;
    let den = int_root(r.denom(), k)?;
    Some(Rational::new(num, den))
}

/// `base^exp` for rational `exp` when the result is rational.
pub fn rational_pow(base: &Rational, exp: &Rational) -> Option<Rational> {
    if exp.is_zero() {
        return Some(Rational::one());
    }
    if base.is_zero() {
        return if exp.is_positive() {
            Some(Rational::zero())
        } else {
            None
        };
    }
    let q = exp.denom().to_u32()?;
    let p = exp.numer().to_i64()?;
    let root = rational_root(base, q)?;
    let mag = num_traits::pow(root, p.unsigned_abs() as usize);
    Some(if p < 0 { mag.recip() } else { mag })
}

/// `num/den`, with the denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
