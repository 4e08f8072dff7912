//! Checked 128-bit helpers shared by every module.
//!
//! Nothing here wraps: each operation either returns the exact value or an
//! [`Error::ArithmeticOverflow`] tagged with what was being computed.

use crate::error::{Error, Result};

pub fn add(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_add(b).ok_or(Error::ArithmeticOverflow(what))
}

pub fn sub(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::ArithmeticOverflow(what))
}

pub fn mul(a: i128, b: i128, what: &'static str) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::ArithmeticOverflow(what))
}

pub fn pow(base: i128, exp: u32, what: &'static str) -> Result<i128> {
    base.checked_pow(exp).ok_or(Error::ArithmeticOverflow(what))
}

pub fn sum(values: &[i128], what: &'static str) -> Result<i128> {
    values.iter().try_fold(0i128, |acc, &v| add(acc, v, what))
}

pub fn product(values: &[i128], what: &'static str) -> Result<i128> {
    values.iter().try_fold(1i128, |acc, &v| mul(acc, v, what))
}

pub fn factorial(k: u32) -> Result<i128> {
    (2..=k as i128).try_fold(1i128, |acc, v| mul(acc, v, "factorial"))
}

/// `x^k <= bound`, treating overflow of `x^k` as "greater".
fn pow_at_most(x: i128, k: u32, bound: i128) -> bool {
    match x.checked_pow(k) {
        Some(p) => p <= bound,
        None => false,
    }
}

/// Largest `r >= 0` with `r^k <= x`.
pub fn floor_root(x: i128, k: u32) -> i128 {
    assert!(x >= 0, "floor_root of a negative number");
    assert!(k >= 1, "zeroth root");
    if k == 1 || x < 2 {
        return x;
    }
    // Float estimate, then walk to the exact answer.
    let mut r = (x as f64).powf(1.0 / k as f64).round() as i128;
    r = r.max(0);
    while r > 0 && !pow_at_most(r, k, x) {
        r -= 1;
    }
    while pow_at_most(r + 1, k, x) {
        r += 1;
    }
    r
}

/// Smallest `r >= 0` with `r^k >= x`.
pub fn ceil_root(x: i128, k: u32) -> i128 {
    let r = floor_root(x, k);
    if r.checked_pow(k) == Some(x) {
        r
    } else {
        r + 1
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    num_integer::gcd(a, b)
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i128, 0i128);
    let (mut old_y, mut y) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_x, x) = (x, old_x - q * x);
        (old_y, y) = (y, old_y - q * y);
    }
    if old_r < 0 {
        (-old_r, -old_x, -old_y)
    } else {
        (old_r, old_x, old_y)
    }
}
