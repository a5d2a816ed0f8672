//! Bernoulli numbers and two-character Eisenstein series E_k^{ψ,φ}.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::DirichletChar;
use crate::arith::modp;
use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::qseries::QSeries;

fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// B_0, …, B_k with B_1 = −1/2.
pub fn bernoulli_numbers(k: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=k {
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-s / int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(k: usize) -> Rational {
    bernoulli_numbers(k).pop().unwrap()
}

/// B_k(x) = Σ_j C(k, j) B_j x^{k−j}.
pub fn bernoulli_poly(k: usize, x: &Rational) -> Rational {
    let b = bernoulli_numbers(k);
    let mut s = Rational::zero();
    for (j, bj) in b.iter().enumerate() {
        s += Rational::from_integer(binomial(k as u64, j as u64)) * bj * Pow::pow(x, (k - j) as u32);
    }
    s
}

/// B_{k,χ} = f^{k−1} Σ_{a=1}^{f} χ(a) B_k(a/f) for the primitive character attached to χ.
pub fn gen_bernoulli(k: usize, chi: &DirichletChar) -> Rational {
    let chi = chi.primitive();
    let f = chi.conductor() as i64;
    let mut s = Rational::zero();
    for a in 1..=f {
        let c = if f == 1 { 1 } else { chi.eval(a) };
        if c != 0 {
            s += bernoulli_poly(k, &Rational::new(a.into(), f.into())) * int(c as i64);
        }
    }
    s * Pow::pow(&int(f), (k - 1) as u32)
}

fn validate(psi: &DirichletChar, phi: &DirichletChar, k: i64, t: u64, level: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::UnsupportedWeight(k));
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    if psi.parity() * phi.parity() != sign {
        return Err(Error::ParityMismatch(format!(
            "ψ(−1)φ(−1) = {} but (−1)^k = {}",
            psi.parity() * phi.parity(),
            sign
        )));
    }
    if level % (psi.conductor() * phi.conductor() * t) != 0 {
        return Err(Error::InvalidInput(format!(
            "cond(ψ)·cond(φ)·t = {} does not divide the level {}",
            psi.conductor() * phi.conductor() * t,
            level
        )));
    }
    if k == 2 && psi.is_trivial() && phi.is_trivial() {
        return Err(Error::InvalidInput("E_2 with trivial characters is not modular".into()));
    }
    Ok(())
}

fn constant_term(psi: &DirichletChar, phi: &DirichletChar, k: i64) -> Rational {
    if psi.is_trivial() {
        -gen_bernoulli(k as usize, phi) / int(2 * k)
    } else if k == 1 && phi.is_trivial() {
        -gen_bernoulli(1, psi) / int(2)
    } else {
        Rational::zero()
    }
}

fn prim_value(chi: &DirichletChar, n: i64) -> i32 {
    if chi.is_trivial() {
        1
    } else {
        chi.primitive().eval(n)
    }
}

/// Integer coefficients σ_{k−1}^{ψ,φ}(n) for 1 ≤ n < len.
fn divisor_sums(psi: &DirichletChar, phi: &DirichletChar, k: i64, len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    for d in 1..len {
        let fd = prim_value(phi, d as i64);
        if fd == 0 {
            continue;
        }
        let pw = Pow::pow(BigInt::from(d), (k - 1) as u32) * fd;
        let mut e = 1;
        while d * e < len {
            let fe = prim_value(psi, e as i64);
            if fe != 0 {
                c[d * e] += &pw * fe;
            }
            e += 1;
        }
    }
    c
}

/// Dense coefficients of E_k^{ψ,φ}(tτ) at exponents 0..len.
pub fn eisenstein_dense(psi: &DirichletChar, phi: &DirichletChar, k: i64, t: u64, len: usize) -> Vec<Rational> {
    let m = (len + t as usize - 1) / t as usize;
    let sums = divisor_sums(psi, phi, k, m.max(1));
    let mut out = vec![Rational::zero(); len];
    if len > 0 {
        out[0] = constant_term(psi, phi, k);
    }
    for (n, v) in sums.into_iter().enumerate().skip(1) {
        let idx = n * t as usize;
        if idx < len {
            out[idx] = Rational::from_integer(v);
        }
    }
    out
}

/// Same series reduced modulo 2^61 − 1.
pub fn eisenstein_dense_modp(psi: &DirichletChar, phi: &DirichletChar, k: i64, t: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    if len == 0 {
        return out;
    }
    out[0] = modp::from_rational(&constant_term(psi, phi, k));
    let m = (len + t as usize - 1) / t as usize;
    let pows: Vec<u64> = (0..m).map(|d| modp::pow(d as u64 % modp::P, (k - 1) as u64)).collect();
    let mut c = vec![0u64; m];
    for d in 1..m {
        let fd = prim_value(phi, d as i64);
        if fd == 0 {
            continue;
        }
        let pw = if fd > 0 { pows[d] } else { modp::sub(0, pows[d]) };
        let mut e = 1;
        while d * e < m {
            match prim_value(psi, e as i64) {
                1 => c[d * e] = modp::add(c[d * e], pw),
                -1 => c[d * e] = modp::sub(c[d * e], pw),
                _ => {}
            }
            e += 1;
        }
    }
    for n in 1..m {
        let idx = n * t as usize;
        if idx < len {
            out[idx] = c[n];
        }
    }
    out
}

/// E_k^{ψ,φ}(τ) = const + Σ_{n≥1} (Σ_{d|n} ψ(n/d)φ(d)d^{k−1}) qⁿ, known below `prec`.
pub fn eisenstein_pair(psi: &DirichletChar, phi: &DirichletChar, k: i64, prec: i64) -> Result<QSeries> {
    eisenstein_pair_scaled(psi, phi, k, 1, prec)
}

/// E_k^{ψ,φ}(tτ) regarded on Γ₀(ψ.modulus).
pub fn eisenstein_pair_scaled(
    psi: &DirichletChar,
    phi: &DirichletChar,
    k: i64,
    t: u64,
    prec: i64,
) -> Result<QSeries> {
    validate(psi, phi, k, t, psi.modulus.max(phi.modulus))?;
    let len = prec.max(0) as usize;
    Ok(QSeries::from_dense(0, &eisenstein_dense(psi, phi, k, t, len), Some(prec)))
}

/// Checks the validity conditions without building the series.
pub fn eisenstein_valid(psi: &DirichletChar, phi: &DirichletChar, k: i64, t: u64, level: u64) -> bool {
    validate(psi, phi, k, t, level).is_ok()
}
