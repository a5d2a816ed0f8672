//! The rank-2 hyperbolic Kac–Moody algebra H(a) with Cartan matrix [[2, −a], [−a, 2]],
//! its roots on the field side via ψ, the Weyl action, and multiplicity tables from f_1.
//!
//! Put a² − 4 = Ns² with N the discriminant of F = ℚ(√(a² − 4)) and η = (a + s√N)/2.
//! A vector xγ⁺ + x′γ⁻ is stored as x ∈ F, with ⟨x, y⟩ = −N·tr(xy′).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{is_fundamental, isqrt};
use crate::error::{Error, Result};
use crate::exact::{int, rat_to_string, Rational};
use crate::quadfield::{enumerate_dual_coords, QuadElem, QuadField};
use crate::solver::{Level, WHForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub a: u64,
    pub n: u64,
    pub s: u64,
    pub eta: QuadElem,
    pub field: QuadField,
}

fn squarefree_part(mut x: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= x {
        while x % (p * p) == 0 {
            x /= p * p;
        }
        if x % p == 0 {
            out *= p;
            x /= p;
        }
        p += 1;
    }
    out * x
}

pub fn cartan_data(a: u64) -> Result<CartanData> {
    if a < 3 {
        return Err(Error::InvalidInput(format!("H(a) needs a ≥ 3, got {}", a)));
    }
    let d = a * a - 4;
    let n1 = squarefree_part(d);
    let n = if n1 % 4 == 1 { n1 } else { 4 * n1 };
    if d % n != 0 {
        return Err(Error::Verification(format!("{} is not N·s² for N = {}", d, n)));
    }
    let s = isqrt(d / n);
    if s * s * n != d || !is_fundamental(n as i64) {
        return Err(Error::Verification(format!("{} is not N·s² for N = {}", d, n)));
    }
    let field = QuadField::new(n1)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let eta = (&QuadElem::from_int(a as i64, n1) + &field.sqrt_disc().scale(&int(s as i64))).scale(&half);
    Ok(CartanData { a, n, s, eta, field })
}

/// The H(a) attached to a fundamental discriminant N: η is the smallest unit > 1 of norm 1.
pub fn cartan_for_disc(n: u64) -> Result<CartanData> {
    let field = QuadField::from_disc(n)?;
    let eta = if field.eps0_norm == 1 { field.eps0.clone() } else { &field.eps0 * &field.eps0 };
    let a = eta.trace();
    cartan_data(a.to_integer().try_into().map_err(|_| Error::InvalidInput("a out of range".into()))?)
}

impl CartanData {
    pub fn pairing(&self, x: &QuadElem, y: &QuadElem) -> Rational {
        -int(self.n as i64) * (x * &y.conj()).trace()
    }

    /// Coordinates (c₁, c₂) with ψ⁻¹(x) = c₁α₁ + c₂α₂.
    pub fn alpha_coords(&self, x: &QuadElem) -> (Rational, Rational) {
        // √N·x = c₁η − c₂
        let z = x * &self.field.sqrt_disc();
        let (zu, zv) = z.parts();
        let (eu, ev) = self.eta.parts();
        let c1 = zv / ev;
        let c2 = &c1 * eu - zu;
        (c1, c2)
    }

    pub fn from_alpha_coords(&self, c1: &Rational, c2: &Rational) -> QuadElem {
        let sd = simple_data(self);
        &sd.alpha1.scale(c1) + &sd.alpha2.scale(c2)
    }

    /// (c, d) ↦ c·A·dᵀ with the Cartan matrix A.
    pub fn cartan_form(&self, c: (&Rational, &Rational), d: (&Rational, &Rational)) -> Rational {
        let a = int(self.a as i64);
        int(2) * c.0 * d.0 + int(2) * c.1 * d.1 - &a * c.0 * d.1 - &a * c.1 * d.0
    }
}

/// ψ-images of the simple roots, fundamental weights and ρ = −(ω₁ + ω₂).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleData {
    pub alpha1: QuadElem,
    pub alpha2: QuadElem,
    pub omega1: QuadElem,
    pub omega2: QuadElem,
    pub rho: QuadElem,
}

pub fn simple_data(cd: &CartanData) -> SimpleData {
    let n1 = cd.field.n1;
    let inv_sqrt = cd.field.sqrt_disc().recip().unwrap();
    let sn = QuadElem::from_int((cd.s * cd.n) as i64, n1).recip().unwrap();
    let one = QuadElem::one(n1);
    let omega1 = -&sn;
    let omega2 = -&(&cd.eta * &sn);
    SimpleData {
        alpha1: &cd.eta * &inv_sqrt,
        alpha2: -&inv_sqrt,
        rho: &(&one + &cd.eta) * &sn,
        omega1,
        omega2,
    }
}

/// Simple reflections r₁x = η²x̄ and r₂x = x̄.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Reflection {
    R1,
    R2,
}

pub fn reflect(cd: &CartanData, r: Reflection, x: &QuadElem) -> QuadElem {
    match r {
        Reflection::R1 => &(&cd.eta * &cd.eta) * &x.conj(),
        Reflection::R2 => x.conj(),
    }
}

/// w·x for w = word[0]·word[1]·…, so the last letter acts first; returns (w·x, det w).
pub fn weyl_act(cd: &CartanData, word: &[Reflection], x: &QuadElem) -> (QuadElem, i32) {
    let y = word.iter().rev().fold(x.clone(), |acc, &r| reflect(cd, r, &acc));
    (y, if word.len() % 2 == 0 { 1 } else { -1 })
}

/// (r₁r₂)^i x = η^{2i}x and r₂(r₁r₂)^i x, with determinants 1 and −1.
pub fn weyl_orbit_elem(cd: &CartanData, i: i64, flip: bool, x: &QuadElem) -> Result<(QuadElem, i32)> {
    let y = &cd.eta.pow(2 * i)? * x;
    Ok(if flip { (y.conj(), -1) } else { (y, 1) })
}

/// (1/√N)η^j for 0 < j ≤ J and −(1/√N)η̄^j for 0 ≤ j ≤ J.
pub fn real_roots_up_to(cd: &CartanData, j_max: u32) -> Vec<QuadElem> {
    let inv_sqrt = cd.field.sqrt_disc().recip().unwrap();
    let mut out = Vec::new();
    let mut p = QuadElem::one(cd.field.n1);
    for j in 0..=j_max {
        if j > 0 {
            out.push(&p * &inv_sqrt);
        }
        out.push(-&(&p.conj() * &inv_sqrt));
        p = &p * &cd.eta;
    }
    out
}

/// ν ∈ F lies in the fundamental chamber 𝔇 = ℝ_{≥0}(−ω₁) + ℝ_{≥0}(−ω₂), the cone spanned by 1 and η.
pub fn in_fundamental_chamber(cd: &CartanData, nu: &QuadElem) -> bool {
    // ν = x + yη with y = (ν − ν′)/(η − η′) and x = (ν′η − νη′)/(η − η′); η − η′ > 0
    let y = nu - &nu.conj();
    let x = &(&nu.conj() * &cd.eta) - &(nu * &cd.eta.conj());
    y.signum() >= 0 && x.signum() >= 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultRow {
    pub nu: QuadElem,
    /// N·ν·ν′.
    #[serde(rename = "Nnunu'")]
    pub norm: i64,
    pub s: u64,
    pub a: String,
    pub mult: String,
}

/// s(Nνν′)·a(Nνν′) for every totally positive ν ∈ 𝔡⁻¹ with ν + ε₀ν′ ≤ B, in grade order.
pub fn mult_table(cd: &CartanData, f1: &WHForm, grade_bound: &Rational) -> Result<Vec<MultRow>> {
    if f1.n != cd.n || f1.m != 1 {
        return Err(Error::InvalidInput(format!("need f_1 at N={}", cd.n)));
    }
    let k = &cd.field;
    let one = QuadElem::one(k.n1);
    let lv = Level::new(cd.n)?;
    let coords = enumerate_dual_coords(k, &int(1), grade_bound, (&one, &k.eps0))?;
    let top = coords.iter().map(|&(a, b)| k.scaled_norm(a, b)).max().unwrap_or(0);
    if top >= f1.prec() {
        return Err(Error::InsufficientPrecision { needed: (top + 1).to_string(), have: f1.prec().to_string() });
    }
    let mut out = Vec::new();
    for (a, b) in coords {
        let n = k.scaled_norm(a, b);
        let c = f1.coeff(n).unwrap_or_default();
        let s = lv.s(n);
        let mult = &c * int(s as i64);
        if !mult.is_integer() {
            return Err(Error::NonIntegral(format!("s({})a({}) = {}", n, n, rat_to_string(&mult))));
        }
        out.push(MultRow { nu: k.dual_point(a, b), norm: n, s, a: rat_to_string(&c), mult: rat_to_string(&mult) });
    }
    Ok(out)
}

/// Is ⟨x, x⟩ < 0, i.e. does x correspond to an imaginary root direction?
pub fn is_imaginary(cd: &CartanData, x: &QuadElem) -> bool {
    cd.pairing(x, x) < Rational::zero()
}
