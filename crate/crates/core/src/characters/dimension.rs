//! Dimensions of M_k(Γ₀(N), χ) and S_k(Γ₀(N), χ) by the Cohen–Oesterlé formula,
//! congruence subgroup indices and Sturm bounds.

use num_traits::{One, Zero};
use serde::Serialize;

use super::DirichletChar;
use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::exact::{int, rat, rat_to_string, Rational};
use crate::qseries::QSeries;

/// [SL₂(ℤ) : Γ₀(M)] = M ∏_{p|M} (1 + 1/p).
pub fn index_gamma0(m: u64) -> u64 {
    factorize(m).into_iter().fold(m, |acc, (p, _)| acc / p * (p + 1))
}

/// [SL₂(ℤ) : Γ₁(M)] = M² ∏_{p|M} (1 − 1/p²), the convention under which Γ₁(17) has index 288.
pub fn index_gamma1(m: u64) -> u64 {
    factorize(m).into_iter().fold(m * m, |acc, (p, _)| acc / (p * p) * (p * p - 1))
}

/// floor(k · index / 12).
pub fn sturm_bound(index: u64, k: u64) -> u64 {
    k * index / 12
}

fn lambda(r: u32, s: u32, p: u64) -> u64 {
    if 2 * s <= r {
        let h = r / 2;
        if r % 2 == 0 {
            p.pow(h) + p.pow(h - 1)
        } else {
            2 * p.pow(h)
        }
    } else {
        2 * p.pow(r - s)
    }
}

fn check(n: u64, k: i64, chi: &DirichletChar) -> Result<()> {
    if k < 2 {
        return Err(Error::UnsupportedWeight(k));
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    if chi.parity() != sign {
        return Err(Error::ParityMismatch(format!("χ(−1) = {} but (−1)^k = {}", chi.parity(), sign)));
    }
    if n % chi.conductor() != 0 {
        return Err(Error::InvalidInput(format!("conductor {} does not divide {}", chi.conductor(), n)));
    }
    Ok(())
}

fn lambda_product(n: u64, chi: &DirichletChar) -> u64 {
    let f = chi.conductor();
    factorize(n)
        .into_iter()
        .map(|(p, r)| {
            let mut s = 0;
            let mut g = f;
            while g % p == 0 {
                g /= p;
                s += 1;
            }
            lambda(r, s, p)
        })
        .product()
}

/// dim E_k(Γ₀(N), χ) for k ≥ 2.
pub fn dim_eisenstein(n: u64, k: i64, chi: &DirichletChar) -> Result<u64> {
    check(n, k, chi)?;
    let e = lambda_product(n, chi);
    Ok(if k == 2 && chi.is_trivial() { e - 1 } else { e })
}

/// dim S_k(Γ₀(N), χ) for k ≥ 2.
pub fn dim_cusp(n: u64, k: i64, chi: &DirichletChar) -> Result<u64> {
    check(n, k, chi)?;
    let chi = DirichletChar { modulus: n, disc: chi.disc };
    let ni = n as i64;
    let s4: i64 = (0..ni).filter(|x| (x * x + 1) % ni == 0).map(|x| chi.eval(x) as i64).sum();
    let s3: i64 = (0..ni).filter(|x| (x * x + x + 1) % ni == 0).map(|x| chi.eval(x) as i64).sum();
    let g4 = if k % 2 != 0 {
        Rational::zero()
    } else if k % 4 == 0 {
        rat(1, 4)
    } else {
        rat(-1, 4)
    };
    let g3 = match k % 3 {
        0 => rat(1, 3),
        1 => Rational::zero(),
        _ => rat(-1, 3),
    };
    let mut d = rat(k - 1, 12) * int(index_gamma0(n) as i64) - rat(lambda_product(n, &chi) as i64, 2)
        + g4 * int(s4)
        + g3 * int(s3);
    if k == 2 && chi.is_trivial() {
        d += Rational::one();
    }
    if !d.is_integer() || d < Rational::zero() {
        return Err(Error::Verification(format!("dimension formula gave {}", rat_to_string(&d))));
    }
    Ok(crate::exact::floor(&d).try_into().unwrap())
}

/// dim M_k(Γ₀(N), χ) = dim S_k + dim E_k.
pub fn dim_modular(n: u64, k: i64, chi: &DirichletChar) -> Result<u64> {
    Ok(dim_cusp(n, k, chi)? + dim_eisenstein(n, k, chi)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    pub bound: u64,
    /// Exponents with a non-integral coefficient, with the coefficient as "p/q".
    pub non_integral: Vec<(i64, String)>,
    pub integral_to_bound: bool,
    /// The Sturm verdict: all coefficients integral up to the bound implies all are.
    pub integral_forever: bool,
}

/// Checks integrality of the coefficients of `f` up to and including `bound`.
pub fn integrality_check(f: &QSeries, bound: u64) -> Result<IntegralityReport> {
    if !f.has_integer_exponents() {
        return Err(Error::InvalidInput("series has fractional exponents".into()));
    }
    let need = bound as i64 + 1;
    if let Some(p) = f.prec() {
        if p < int(need) {
            return Err(Error::InsufficientPrecision {
                needed: need.to_string(),
                have: rat_to_string(&p),
            });
        }
    }
    let non_integral: Vec<(i64, String)> = f
        .terms()
        .filter(|(e, c)| *e <= int(bound as i64) && !c.is_integer())
        .map(|(e, c)| (crate::exact::floor(&e).try_into().unwrap(), rat_to_string(c)))
        .collect();
    let ok = non_integral.is_empty();
    Ok(IntegralityReport { bound, non_integral, integral_to_bound: ok, integral_forever: ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices() {
        assert_eq!(index_gamma1(17), 288);
        assert_eq!(sturm_bound(index_gamma1(17), 4), 96);
        assert_eq!(sturm_bound(index_gamma1(12), 2), 16);
        assert_eq!(sturm_bound(index_gamma1(8), 2), 8);
        assert_eq!(sturm_bound(index_gamma1(21), 6), 192);
    }

    #[test]
    fn cusp_dims() {
        let t = DirichletChar::trivial(1);
        assert_eq!(dim_cusp(1, 2, &t).unwrap(), 0);
        assert_eq!(dim_cusp(1, 12, &t).unwrap(), 1);
        let t11 = DirichletChar::trivial(11);
        assert_eq!(dim_cusp(11, 2, &t11).unwrap(), 1);
    }
}
