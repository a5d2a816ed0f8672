//! Dense truncated power series kernels over ℤ, ℚ and 𝔽_p, indexed from exponent 0.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::modp;
use crate::exact::Rational;

pub fn mul_int(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    c
}

/// Inverse of a series with constant term ±1.
pub fn inv_int_unit(a: &[BigInt], len: usize) -> Vec<BigInt> {
    assert!(a[0].abs().is_one(), "constant term must be a unit");
    let u = a[0].clone();
    let mut b = vec![BigInt::zero(); len];
    if len == 0 {
        return b;
    }
    b[0] = u.clone();
    for n in 1..len {
        let mut s = BigInt::zero();
        for i in 1..=n.min(a.len() - 1) {
            if !a[i].is_zero() {
                s += &a[i] * &b[n - i];
            }
        }
        b[n] = -s * &u;
    }
    b
}

pub fn pow_int(a: &[BigInt], e: i64, len: usize) -> Vec<BigInt> {
    let base = if e < 0 { inv_int_unit(a, len) } else { a.iter().take(len).cloned().collect() };
    let mut r = vec![BigInt::zero(); len];
    if len > 0 {
        r[0] = BigInt::one();
    }
    let mut p = base;
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            r = mul_int(&r, &p, len);
        }
        k >>= 1;
        if k > 0 {
            p = mul_int(&p, &p, len);
        }
    }
    r
}

/// f(q) ↦ f(q^d).
pub fn dilate<T: Clone + Zero>(a: &[T], d: usize, len: usize) -> Vec<T> {
    let mut c = vec![T::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if i * d >= len {
            break;
        }
        c[i * d] = x.clone();
    }
    c
}

pub fn mul_rat(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut c = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                c[i + j] += x * y;
            }
        }
    }
    c
}

pub fn inv_rat(a: &[Rational], len: usize) -> Vec<Rational> {
    assert!(!a[0].is_zero(), "constant term must be nonzero");
    let u = a[0].recip();
    let mut b = vec![Rational::zero(); len];
    if len == 0 {
        return b;
    }
    b[0] = u.clone();
    for n in 1..len {
        let mut s = Rational::zero();
        for i in 1..=n.min(a.len() - 1) {
            if !a[i].is_zero() {
                s += &a[i] * &b[n - i];
            }
        }
        b[n] = -s * &u;
    }
    b
}

pub fn mul_modp(a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
    let mut c = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y != 0 {
                c[i + j] = modp::add(c[i + j], modp::mul(x, y));
            }
        }
    }
    c
}

pub fn inv_modp(a: &[u64], len: usize) -> Vec<u64> {
    let u = modp::inv(a[0]);
    let mut b = vec![0u64; len];
    if len == 0 {
        return b;
    }
    b[0] = u;
    for n in 1..len {
        let mut s = 0u64;
        for i in 1..=n.min(a.len() - 1) {
            if a[i] != 0 {
                s = modp::add(s, modp::mul(a[i], b[n - i]));
            }
        }
        b[n] = modp::mul(modp::sub(0, s), u);
    }
    b
}

pub fn to_modp(a: &[BigInt]) -> Vec<u64> {
    a.iter().map(modp::from_bigint).collect()
}

pub fn to_rat(a: &[BigInt]) -> Vec<Rational> {
    a.iter().map(|x| Rational::from_integer(x.clone())).collect()
}
