//! Generators of M_k(Γ₀(N), χ_D): Eisenstein series E_k^{ψ,φ}(tτ) and products of two of them.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::arith::{divisors, gcd};
use crate::characters::eisenstein::{eisenstein_dense, eisenstein_dense_modp, eisenstein_valid};
use crate::characters::{real_characters, DirichletChar};
use crate::dense;

/// E_k^{ψ,φ}(tτ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EisSpec {
    pub k: i64,
    pub psi: DirichletChar,
    pub phi: DirichletChar,
    pub t: u64,
}

impl EisSpec {
    /// Coefficients scaled by the denominator of the constant term, so all are integers.
    pub fn dense_int(&self, len: usize) -> Vec<BigInt> {
        let c = eisenstein_dense(&self.psi, &self.phi, self.k, self.t, len);
        let den = c.first().map(|x| x.denom().clone()).unwrap_or_else(|| BigInt::from(1));
        c.into_iter().map(|x| (x * crate::exact::big(&den)).to_integer()).collect()
    }

    pub fn dense_modp(&self, len: usize) -> Vec<u64> {
        let c = eisenstein_dense_modp(&self.psi, &self.phi, self.k, self.t, len);
        let den = eisenstein_dense(&self.psi, &self.phi, self.k, self.t, 1)
            .first()
            .map(|x| crate::arith::modp::from_bigint(x.denom()))
            .unwrap_or(1);
        c.into_iter().map(|x| crate::arith::modp::mul(x, den)).collect()
    }

    pub fn label(&self) -> String {
        format!("E{}[{},{}](q^{})", self.k, self.psi.disc, self.phi.disc, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoolItem {
    Single(EisSpec),
    Product(EisSpec, EisSpec),
}

impl PoolItem {
    pub fn dense_int(&self, len: usize) -> Vec<BigInt> {
        match self {
            PoolItem::Single(e) => e.dense_int(len),
            PoolItem::Product(a, b) => dense::mul_int(&a.dense_int(len), &b.dense_int(len), len),
        }
    }

    pub fn dense_modp(&self, len: usize) -> Vec<u64> {
        match self {
            PoolItem::Single(e) => e.dense_modp(len),
            PoolItem::Product(a, b) => dense::mul_modp(&a.dense_modp(len), &b.dense_modp(len), len),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PoolItem::Single(e) => e.label(),
            PoolItem::Product(a, b) => format!("{}*{}", a.label(), b.label()),
        }
    }
}

/// Order in which generators are offered to the basis selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PoolOrder {
    #[default]
    Natural,
    Reversed,
    Shuffled(u64),
}

/// Valid E_k^{ψ,φ}(tτ) on Γ₀(N) over real characters of conductor dividing N.
pub fn eisenstein_specs(n: u64, k: i64) -> Vec<EisSpec> {
    let chars = real_characters(n);
    let mut out = Vec::new();
    for psi in &chars {
        for phi in &chars {
            let f = psi.conductor() * phi.conductor();
            if n % f != 0 {
                continue;
            }
            for t in divisors(n / f) {
                if eisenstein_valid(psi, phi, k, t, n) {
                    out.push(EisSpec { k, psi: *psi, phi: *phi, t });
                }
            }
        }
    }
    out
}

pub(crate) fn product_is(chars: &[DirichletChar], target: &DirichletChar, n: u64) -> bool {
    (1..n as i64).filter(|&u| gcd(u, n as i64) == 1).all(|u| {
        let v: i32 = chars.iter().map(|c| crate::characters::kronecker(c.disc, u)).product();
        v == crate::characters::kronecker(target.disc, u)
    })
}

/// Single E_K of character χ together with products E_{k₁}·E_{K−k₁} for k_min ≤ k₁ ≤ K/2.
pub fn generator_pool(n: u64, weight: i64, chi: &DirichletChar, k_min: i64, order: PoolOrder) -> Vec<PoolItem> {
    let mut items = Vec::new();
    for e in eisenstein_specs(n, weight) {
        if product_is(&[e.psi, e.phi], chi, n) {
            items.push(PoolItem::Single(e));
        }
    }
    for k1 in k_min..=weight / 2 {
        let k2 = weight - k1;
        let s1 = eisenstein_specs(n, k1);
        let s2 = eisenstein_specs(n, k2);
        for (i, a) in s1.iter().enumerate() {
            for (j, b) in s2.iter().enumerate() {
                if k1 == k2 && j < i {
                    continue;
                }
                if product_is(&[a.psi, a.phi, b.psi, b.phi], chi, n) {
                    items.push(PoolItem::Product(*a, *b));
                }
            }
        }
    }
    match order {
        PoolOrder::Natural => {}
        PoolOrder::Reversed => items.reverse(),
        PoolOrder::Shuffled(seed) => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            items.shuffle(&mut rng);
        }
    }
    items
}

/// Greedy selection mod p of `dim` generators independent on their first `len` coefficients.
pub fn select_basis(pool: &[PoolItem], dim: usize, len: usize) -> (Vec<PoolItem>, usize) {
    let mut ech = super::linalg::EchelonModP::new();
    let mut chosen = Vec::new();
    for it in pool {
        if ech.rank() == dim {
            break;
        }
        let v = it.dense_modp(len);
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if ech.insert(&v) {
            chosen.push(it.clone());
        }
    }
    let r = ech.rank();
    (chosen, r)
}
