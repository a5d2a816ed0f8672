//! Borcherds products attached to f ∈ A^ε(N, 0, χ_D).
//!
//! Ψ(z₁, z₂) = e(ρz₁ + ρ′z₂) ∏ (1 − e(νz₁ + ν′z₂))^{s(Nνν′)a(Nνν′)} over ν ∈ 𝔡⁻¹ positive
//! on the chamber W through (1, ε₀). Everything is graded by t(μ) = μ + ε₀μ′, which is
//! positive on every factor, and expanded exactly up to a grade bound.
//!
//! Φ(z₁, z₂) = Ψ(Nz₂, Nz₁) has the same coefficients, read against e(−(μ, z)) with
//! (μ, z) = −N(μz₂ + μ′z₁); the Weyl group of H(a) acts on the labels μ.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, ser_display, Rational};
use crate::kacmoody::{in_fundamental_chamber, weyl_act, weyl_orbit_elem, CartanData, Reflection};
use crate::quadfield::{enumerate_dual_coords, QuadElem, QuadField};
use crate::solver::{Level, WHForm};

pub type Coord = (i64, i64);

/// t(x) = x + ε₀x′.
pub fn grade(k: &QuadField, x: &QuadElem) -> QuadElem {
    x + &(&x.conj() * &k.eps0)
}

/// The pairs (m, s(m)a(−m)) with m > 0 and a(−m) ≠ 0.
pub fn principal_part(f: &WHForm) -> Result<Vec<(u64, Rational)>> {
    let lv = Level::new(f.n)?;
    Ok(f.table()
        .into_iter()
        .filter(|(e, c)| *e < 0 && !c.is_zero())
        .map(|(e, c)| ((-e) as u64, c * int(lv.s(e) as i64)))
        .collect())
}

/// A λ ∈ 𝔡⁻¹ with Nλλ′ = −m and λ + ε₀λ′ = 0, if any. Such λ satisfies λ² = mε₀/N,
/// so the candidates come from rounding and are confirmed exactly.
fn wall_through_interior(k: &QuadField, m: u64) -> Option<QuadElem> {
    let e = k.eps0.to_f64();
    let x = (m as f64 * e / k.disc as f64).sqrt();
    let a0 = x * (1.0 - 1.0 / e);
    let b0 = (k.n1 as f64).sqrt() * x * (1.0 + 1.0 / e);
    for da in -1..=2 {
        for db in -1..=2 {
            let (a, b) = (a0.floor() as i64 + da, b0.floor() as i64 + db);
            if k.n1 % 4 == 1 && (a - b).rem_euclid(2) != 0 {
                continue;
            }
            if k.scaled_norm(a, b) != -(m as i64) {
                continue;
            }
            let l = k.dual_point(a, b);
            if grade(k, &l).is_zero() {
                return Some(l);
            }
        }
    }
    None
}

/// R(m, W) = {λ ∈ 𝔡⁻¹ : Nλλ′ = −m, (λ, W) > 0, (ε₀⁻²λ, W) < 0}.
///
/// With x = λ the second condition reads ε₀⁻²x − ε₀³m/(Nx) < 0, which forces
/// 0 < x < ε₀^{5/2}√(m/N) and hence t(λ) < x.
pub fn r_set(k: &QuadField, m: u64) -> Result<Vec<QuadElem>> {
    let e = k.eps0.to_f64();
    let bound_f = e.powf(2.5) * (m as f64 / k.disc as f64).sqrt() * 1.1 + 1.0;
    let bound = int(bound_f.ceil() as i64);
    let one = QuadElem::one(k.n1);
    let e2inv = k.eps0.pow(-2)?;
    Ok(enumerate_dual_coords(k, &int(-(m as i64)), &bound, (&one, &k.eps0))?
        .into_iter()
        .filter(|&(a, b)| k.scaled_norm(a, b) == -(m as i64))
        .map(|(a, b)| k.dual_point(a, b))
        .filter(|l| grade(k, &(&e2inv * l)).signum() < 0)
        .collect())
}

/// The Weyl chamber of f containing (1, ε₀).
#[derive(Clone, Debug)]
pub struct WeylChamber {
    pub field: QuadField,
    pub n: u64,
    /// Wall representatives R(m, W) for each pole order m of f.
    pub walls: BTreeMap<u64, Vec<QuadElem>>,
    pub interior: (QuadElem, QuadElem),
}

impl WeylChamber {
    pub fn containing_interior(f: &WHForm) -> Result<WeylChamber> {
        let field = QuadField::from_disc(f.n)?;
        let mut walls = BTreeMap::new();
        for (m, _) in principal_part(f)? {
            if let Some(l) = wall_through_interior(&field, m) {
                return Err(Error::OnWall(format!(
                    "(1, ε₀) lies on λ^⊥ for λ = {} with Nλλ′ = −{} at N={}",
                    l, m, f.n
                )));
            }
            walls.insert(m, r_set(&field, m)?);
        }
        let interior = (QuadElem::one(field.n1), field.eps0.clone());
        Ok(WeylChamber { field, n: f.n, walls, interior })
    }
}

/// ρ = (ε₀² − 1)⁻¹ Σ_m s(m)a(−m) Σ_{λ ∈ R(m, W)} λ.
pub fn weyl_vector(f: &WHForm, w: &WeylChamber) -> Result<QuadElem> {
    let k = &w.field;
    let mut sum = QuadElem::zero(k.n1);
    for (m, c) in principal_part(f)? {
        let reps = w.walls.get(&m).ok_or_else(|| Error::InvalidInput(format!("chamber has no walls for m={}", m)))?;
        for l in reps {
            sum = &sum + &l.scale(&c);
        }
    }
    let d = &(&k.eps0 * &k.eps0) - &QuadElem::one(k.n1);
    Ok(&sum / &d)
}

/// The Weyl vector of a form q⁻¹ + O(1) in the chamber through (1, ε₀).
pub fn weyl_vector_closed_form(k: &QuadField) -> QuadElem {
    let sq = k.sqrt_disc();
    if k.eps0_norm == -1 {
        let tr = QuadElem::from_rational(&k.eps0.trace(), k.n1);
        &k.eps0 / &(&sq * &tr)
    } else {
        let tr = QuadElem::from_rational(&(&sq * &k.eps0).trace(), k.n1);
        &(&QuadElem::one(k.n1) + &k.eps0) / &tr
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub nu: QuadElem,
    #[serde(skip)]
    pub coords: Coord,
    /// N·ν·ν′.
    pub norm: i64,
    #[serde(serialize_with = "ser_display")]
    pub exponent: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub mu: QuadElem,
    #[serde(skip)]
    pub offset: Coord,
    #[serde(serialize_with = "ser_display")]
    pub coeff: BigInt,
}

/// Ψ = e(ρ) Σ_x P(x) e(x), stored as the nonzero terms μ = ρ + x with t(μ) ≤ grade_bound,
/// in increasing grade.
#[derive(Clone, Debug, Serialize)]
pub struct ProductExpansion {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(skip)]
    pub field: QuadField,
    pub weyl_vector: QuadElem,
    #[serde(serialize_with = "ser_display")]
    pub grade_bound: Rational,
    #[serde(skip)]
    pub factors: Vec<Factor>,
    pub terms: Vec<Term>,
    #[serde(skip)]
    index: HashMap<Coord, usize>,
}

fn add(x: Coord, y: Coord) -> Coord {
    (x.0 + y.0, x.1 + y.1)
}

fn sub(x: Coord, y: Coord) -> Coord {
    (x.0 - y.0, x.1 - y.1)
}

impl ProductExpansion {
    pub fn offset_of(&self, mu: &QuadElem) -> Option<Coord> {
        self.field.dual_coords(&(mu - &self.weyl_vector))
    }

    /// The coefficient at μ when t(μ) ≤ grade_bound and μ − ρ ∈ 𝔡⁻¹, otherwise None.
    pub fn coeff(&self, mu: &QuadElem) -> Option<BigInt> {
        let c = self.offset_of(mu)?;
        if grade(&self.field, mu).cmp_rational(&self.grade_bound) == Ordering::Greater {
            return None;
        }
        Some(self.index.get(&c).map(|&i| self.terms[i].coeff.clone()).unwrap_or_default())
    }

    pub fn coeff_at_offset(&self, c: Coord) -> BigInt {
        self.index.get(&c).map(|&i| self.terms[i].coeff.clone()).unwrap_or_default()
    }

    /// Norms Nνν′ < 0 carrying a nonzero exponent.
    pub fn negative_norms(&self) -> BTreeSet<i64> {
        self.factors.iter().filter(|f| f.norm < 0).map(|f| f.norm).collect()
    }

    /// gcd of all stored coefficients.
    pub fn coefficient_gcd(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, t| g.gcd(&t.coeff))
    }

    fn rebuild_index(&mut self) {
        self.index = self.terms.iter().enumerate().map(|(i, t)| (t.offset, i)).collect();
    }
}

/// Grade of dual_point(a, b) is a·t₁ + b·t₂.
struct Grader {
    t1: QuadElem,
    t2: QuadElem,
}

impl Grader {
    fn new(k: &QuadField) -> Grader {
        Grader { t1: grade(k, &k.dual_point(1, 0)), t2: grade(k, &k.dual_point(0, 1)) }
    }

    fn exact(&self, c: Coord) -> QuadElem {
        &self.t1.scale(&int(c.0)) + &self.t2.scale(&int(c.1))
    }
}

/// x ≤ bound, deciding exactly only when the floats are too close to call.
fn le_bound(xf: f64, bf: f64, exact: impl FnOnce() -> Ordering) -> bool {
    if xf < bf - 1e-9 {
        true
    } else if xf > bf + 1e-9 {
        false
    } else {
        exact() != Ordering::Greater
    }
}

/// Expands e(ρ) ∏ (1 − e(ν))^{c(ν)} up to t(μ) ≤ B, with factors given by lattice coordinates.
///
/// log P = −Σ_ν c(ν) Σ_k e(kν)/k. The two coordinates a and b are additive, so each gives a
/// derivation D e(x) = a(x) e(x), and D P = P·D log P yields a(μ)P(μ) = Σ_γ a(γ)L(γ)P(μ − γ),
/// with b in place of a when a(μ) = 0.
pub fn expand_from_factors(
    field: &QuadField,
    n: u64,
    rho: &QuadElem,
    factors: Vec<Factor>,
    grade_bound: &Rational,
) -> Result<ProductExpansion> {
    let gr = Grader::new(field);
    let t_rho = grade(field, rho);
    let room = &QuadElem::from_rational(grade_bound, field.n1) - &t_rho;
    if room.signum() < 0 {
        return Err(Error::InvalidInput(format!("grade bound {} is below t(ρ)", grade_bound)));
    }
    let room_f = room.to_f64();
    let mut gens: Vec<(Coord, f64, BigInt)> = factors
        .iter()
        .filter(|f| !f.exponent.is_zero())
        .map(|f| (f.coords, gr.exact(f.coords).to_f64(), f.exponent.clone()))
        .collect();
    for g in &gens {
        if gr.exact(g.0).signum() <= 0 {
            return Err(Error::InvalidInput(format!("factor {:?} is not positive on the chamber", g.0)));
        }
    }
    gens.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then(x.0.cmp(&y.0)));

    // support: all sums of generators inside the bound
    let mut grades: HashMap<Coord, f64> = HashMap::new();
    grades.insert((0, 0), 0.0);
    let mut stack = vec![(0i64, 0i64)];
    while let Some(x) = stack.pop() {
        let xf = grades[&x];
        for (g, gf, _) in &gens {
            let y = add(x, *g);
            if grades.contains_key(&y) {
                continue;
            }
            if xf + gf > room_f + 1e-9 {
                break;
            }
            if le_bound(xf + gf, room_f, || gr.exact(y).cmp(&room)) {
                grades.insert(y, xf + gf);
                stack.push(y);
            }
        }
    }
    let mut support: Vec<(Coord, f64)> = grades.into_iter().collect();
    let cmp = |x: &(Coord, f64), y: &(Coord, f64)| {
        if (x.1 - y.1).abs() > 1e-9 {
            x.1.partial_cmp(&y.1).unwrap()
        } else {
            gr.exact(x.0).cmp(&gr.exact(y.0)).then(x.0.cmp(&y.0))
        }
    };
    support.sort_by(cmp);

    // D·L with a common denominator d: l_int[γ] = d·L(γ)
    let mut log: HashMap<Coord, Rational> = HashMap::new();
    for (g, gf, c) in &gens {
        let mut k = 1i64;
        while le_bound(k as f64 * gf, room_f, || gr.exact((k * g.0, k * g.1)).cmp(&room)) {
            let e = log.entry((k * g.0, k * g.1)).or_insert_with(Rational::zero);
            *e -= Rational::new(c.clone(), BigInt::from(k));
            k += 1;
        }
    }
    let d = log.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut log_int: Vec<(Coord, f64, BigInt)> = log
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, gr.exact(c).to_f64(), (v * Rational::from_integer(d.clone())).to_integer()))
        .collect();
    log_int.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap().then(x.0.cmp(&y.0)));

    let mut p: HashMap<Coord, BigInt> = HashMap::new();
    p.insert((0, 0), BigInt::one());
    for (mu, mf) in support.iter().skip(1) {
        let (mut sa, mut sb) = (BigInt::zero(), BigInt::zero());
        for (g, gf, l) in &log_int {
            if *gf > mf + 1e-9 {
                break;
            }
            if let Some(q) = p.get(&sub(*mu, *g)) {
                if q.is_zero() {
                    continue;
                }
                let lq = l * q;
                sa += &lq * g.0;
                sb += &lq * g.1;
            }
        }
        let (num, den) = if mu.0 != 0 { (sa, &d * mu.0) } else { (sb, &d * mu.1) };
        let (q, r) = num.div_rem(&den);
        if !r.is_zero() {
            return Err(Error::NonIntegral(format!("coefficient at offset {:?} is {}/{}", mu, num, den)));
        }
        p.insert(*mu, q);
    }

    let terms: Vec<Term> = support
        .iter()
        .filter_map(|(c, _)| {
            let v = &p[c];
            (!v.is_zero()).then(|| Term { mu: rho + &field.dual_point(c.0, c.1), offset: *c, coeff: v.clone() })
        })
        .collect();
    let mut out = ProductExpansion {
        n,
        field: field.clone(),
        weyl_vector: rho.clone(),
        grade_bound: grade_bound.clone(),
        factors,
        terms,
        index: HashMap::new(),
    };
    out.rebuild_index();
    Ok(out)
}

/// The factors (1 − e(ν))^{s(n)a(n)}, n = Nνν′, of Ψ_f with t(ν) ≤ B − t(ρ).
pub fn product_factors(f: &WHForm, w: &WeylChamber, rho: &QuadElem, grade_bound: &Rational) -> Result<Vec<Factor>> {
    let k = &w.field;
    let lv = Level::new(f.n)?;
    let room = grade_bound - rho_grade_rational_floor(k, rho);
    let m_max = principal_part(f)?.iter().map(|(m, _)| *m).max().unwrap_or(0);
    let (y1, y2) = (&w.interior.0, &w.interior.1);
    let coords = enumerate_dual_coords(k, &int(-(m_max as i64)), &room, (y1, y2))?;
    let top = coords.iter().map(|&(a, b)| k.scaled_norm(a, b)).max().unwrap_or(0);
    if top >= f.prec() {
        return Err(Error::InsufficientPrecision { needed: (top + 1).to_string(), have: f.prec().to_string() });
    }
    let mut out = Vec::new();
    for (a, b) in coords {
        let n = k.scaled_norm(a, b);
        let c = f.coeff(n).unwrap_or_default() * int(lv.s(n) as i64);
        if c.is_zero() {
            continue;
        }
        if !c.is_integer() {
            return Err(Error::NonIntegral(format!("s({})a({}) = {}", n, n, c)));
        }
        out.push(Factor { nu: k.dual_point(a, b), coords: (a, b), norm: n, exponent: c.to_integer() });
    }
    Ok(out)
}

/// A rational lower bound for t(ρ), so that the factor enumeration can only over-cover.
fn rho_grade_rational_floor(k: &QuadField, rho: &QuadElem) -> Rational {
    let t = grade(k, rho).to_f64();
    let floor = Rational::from_float(t - 1e-6).unwrap_or_default();
    if floor > Rational::zero() {
        floor
    } else {
        Rational::zero()
    }
}

/// The Borcherds product of f in the chamber through (1, ε₀), expanded to t(μ) ≤ B.
pub fn expand_psi(f: &WHForm, grade_bound: &Rational) -> Result<ProductExpansion> {
    let w = WeylChamber::containing_interior(f)?;
    let rho = weyl_vector(f, &w)?;
    let factors = product_factors(f, &w, &rho, grade_bound)?;
    expand_from_factors(&w.field, f.n, &rho, factors, grade_bound)
}

/// Adds 1 to the exponent of the lowest totally positive factor and re-expands.
pub fn mutate_lowest_positive(psi: &ProductExpansion) -> Result<ProductExpansion> {
    let mut factors = psi.factors.clone();
    let gr = Grader::new(&psi.field);
    let i = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| f.norm > 0)
        .min_by(|x, y| gr.exact(x.1.coords).cmp(&gr.exact(y.1.coords)))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::InvalidInput("no totally positive factor to perturb".into()))?;
    factors[i].exponent += 1;
    expand_from_factors(&psi.field, psi.n, &psi.weyl_vector, factors, &psi.grade_bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiTerm {
    /// The label μ of e(−(μ, z)).
    pub mu: QuadElem,
    /// Coefficients (Nμ′, Nμ) of z₁ and z₂ in the exponent.
    pub z_exponent: (QuadElem, QuadElem),
    #[serde(serialize_with = "ser_display")]
    pub coeff: BigInt,
}

/// Φ(z) = Ψ(Nz₂, Nz₁) = Σ c(μ) e(−(μ, z)).
#[derive(Clone, Debug, Serialize)]
pub struct PhiExpansion {
    #[serde(rename = "N")]
    pub n: u64,
    pub rho: QuadElem,
    /// Bound on N·t(μ), the grade of the exponent (Nμ′, Nμ) at (ε₀, 1).
    #[serde(serialize_with = "ser_display")]
    pub grade_bound: Rational,
    pub terms: Vec<PhiTerm>,
    #[serde(skip)]
    psi: ProductExpansion,
}

impl PhiExpansion {
    pub fn coeff(&self, mu: &QuadElem) -> Option<BigInt> {
        self.psi.coeff(mu)
    }

    pub fn field(&self) -> &QuadField {
        &self.psi.field
    }

    /// t(μ) ≤ B on the Ψ side.
    pub fn in_range(&self, mu: &QuadElem) -> bool {
        grade(&self.psi.field, mu).cmp_rational(&self.psi.grade_bound) != Ordering::Greater
    }
}

/// (x, y) ↦ (y, x) on exponent pairs; on F it is conjugation.
pub fn swap_conj(p: &(QuadElem, QuadElem)) -> (QuadElem, QuadElem) {
    (p.1.clone(), p.0.clone())
}

/// Grade of a Φ exponent (e₁, e₂): e₂ + ε₀e₁ = N·t(μ).
pub fn phi_grade(k: &QuadField, e: &(QuadElem, QuadElem)) -> QuadElem {
    &e.1 + &(&k.eps0 * &e.0)
}

pub fn to_phi(psi: &ProductExpansion) -> PhiExpansion {
    let nn = int(psi.n as i64);
    let terms = psi
        .terms
        .iter()
        .map(|t| {
            let psi_exp = (t.mu.clone(), t.mu.conj());
            let (e1, e2) = swap_conj(&psi_exp);
            PhiTerm { mu: t.mu.clone(), z_exponent: (e1.scale(&nn), e2.scale(&nn)), coeff: t.coeff.clone() }
        })
        .collect();
    PhiExpansion {
        n: psi.n,
        rho: psi.weyl_vector.clone(),
        grade_bound: &psi.grade_bound * &nn,
        terms,
        psi: psi.clone(),
    }
}

/// Ψ(z₁, z₂) = Φ(z₂/N, z₁/N), rebuilt from the Φ exponents alone.
pub fn from_phi(phi: &PhiExpansion) -> ProductExpansion {
    let inv = Rational::new(BigInt::one(), BigInt::from(phi.n));
    let mut out = phi.psi.clone();
    out.terms = phi
        .terms
        .iter()
        .map(|t| {
            let (a, _) = swap_conj(&(t.z_exponent.0.scale(&inv), t.z_exponent.1.scale(&inv)));
            let offset = out.offset_of(&a).expect("Φ label outside ρ + 𝔡⁻¹");
            Term { mu: a, offset, coeff: t.coeff.clone() }
        })
        .collect();
    out.weyl_vector = phi.rho.clone();
    out.grade_bound = &phi.grade_bound * &inv;
    out.rebuild_index();
    out
}

/// Alternating words in r₁, r₂ of length 1 ..= depth.
pub fn weyl_words(depth: usize) -> Vec<Vec<Reflection>> {
    let mut out = Vec::new();
    for len in 1..=depth {
        for start in [Reflection::R2, Reflection::R1] {
            let w: Vec<Reflection> = (0..len)
                .map(|i| if (i % 2 == 0) == (start == Reflection::R2) { Reflection::R2 } else { Reflection::R1 })
                .collect();
            out.push(w);
        }
    }
    out
}

fn word_name(w: &[Reflection]) -> String {
    w.iter().map(|r| if *r == Reflection::R1 { "r1" } else { "r2" }).collect::<Vec<_>>().join("")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AntisymmetryReport {
    pub words: Vec<String>,
    /// Pairs (μ, wμ) compared with both inside the grade bound.
    pub compared: usize,
    /// Pairs with wμ beyond the grade bound.
    pub out_of_range: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// c(wμ) = det(w)·c(μ) for every stored μ and every alternating word of length ≤ depth.
pub fn check_antisymmetry(phi: &PhiExpansion, cd: &CartanData, depth: usize) -> AntisymmetryReport {
    let words = weyl_words(depth);
    let (mut compared, mut out_of_range) = (0, 0);
    let mut failures = Vec::new();
    for t in &phi.terms {
        for w in &words {
            let (nu, det) = weyl_act(cd, w, &t.mu);
            if phi.psi.offset_of(&nu).is_none() {
                failures.push(format!("{}·{} = {} leaves ρ + 𝔡⁻¹", word_name(w), t.mu, nu));
                continue;
            }
            if !phi.in_range(&nu) {
                out_of_range += 1;
                continue;
            }
            compared += 1;
            let got = phi.coeff(&nu).unwrap_or_default();
            let want = &t.coeff * det;
            if got != want {
                failures.push(format!("c({}·{}) = {} but det·c = {}", word_name(w), t.mu, got, want));
            }
        }
    }
    AntisymmetryReport {
        words: words.iter().map(|w| word_name(w)).collect(),
        compared,
        out_of_range,
        passed: failures.is_empty(),
        failures: failures.into_iter().take(20).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleRoot {
    pub nu: QuadElem,
    /// N·ν·ν′.
    pub norm: i64,
    #[serde(serialize_with = "ser_display")]
    pub m: BigInt,
    /// "even" for m(ν) > 0, "odd" for m(ν) < 0.
    pub parity: &'static str,
    #[serde(serialize_with = "ser_display")]
    pub multiplicity: BigInt,
}

/// m(ν) = −c(ρ + ν) for 0 ≠ ν ∈ 𝔡⁻¹ ∩ 𝔇 with ρ + ν in range; only nonzero values are listed.
pub fn extract_simple_data(phi: &PhiExpansion, cd: &CartanData) -> Vec<SimpleRoot> {
    let k = phi.field();
    phi.terms
        .iter()
        .filter_map(|t| {
            let nu = &t.mu - &phi.rho;
            if nu.is_zero() || !in_fundamental_chamber(cd, &nu) {
                return None;
            }
            let m = -&t.coeff;
            let (a, b) = k.dual_coords(&nu)?;
            Some(SimpleRoot {
                norm: k.scaled_norm(a, b),
                parity: if m.is_positive() { "even" } else { "odd" },
                multiplicity: m.abs(),
                m,
                nu,
            })
        })
        .collect()
}

/// The sum side Σ_w det(w)(e(−(wρ, z)) − Σ_ν m(ν) e(−(w(ρ + ν), z))) restricted to t ≤ B.
pub fn sum_side(phi: &PhiExpansion, cd: &CartanData, data: &[SimpleRoot]) -> Result<BTreeMap<Coord, BigInt>> {
    let k = phi.field();
    let bf = crate::exact::to_f64(&phi.psi.grade_bound) + 2.0;
    let log_eta2 = 2.0 * cd.eta.to_f64().ln();
    let mut seeds = vec![(phi.rho.clone(), BigInt::one())];
    seeds.extend(data.iter().map(|r| (&phi.rho + &r.nu, -&r.m)));
    let mut out: BTreeMap<Coord, BigInt> = BTreeMap::new();
    for (beta, c) in seeds {
        // t(w·β) ≥ η^{2i}β and ≥ η^{−2i}β′ on both cosets
        let (x, xc) = (beta.to_f64(), beta.conj().to_f64());
        if x <= 0.0 || xc <= 0.0 {
            return Err(Error::Verification(format!("{} is not totally positive", beta)));
        }
        let hi = ((bf / x).ln() / log_eta2).ceil() as i64 + 1;
        let lo = -(((bf / xc).ln() / log_eta2).ceil() as i64 + 1);
        for i in lo..=hi {
            for flip in [false, true] {
                let (nu, det) = weyl_orbit_elem(cd, i, flip, &beta)?;
                if !phi.in_range(&nu) {
                    continue;
                }
                let off = k
                    .dual_coords(&(&nu - &phi.rho))
                    .ok_or_else(|| Error::Verification(format!("{} leaves ρ + 𝔡⁻¹", nu)))?;
                *out.entry(off).or_insert_with(BigInt::zero) += &c * det;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumSideReport {
    pub simple_roots: usize,
    pub product_terms: usize,
    pub sum_terms: usize,
    pub mismatches: Vec<String>,
    pub passed: bool,
}

/// Rebuilds Φ from ρ and m(ν) and compares with the product side inside the grade bound.
pub fn sum_side_check(phi: &PhiExpansion, cd: &CartanData) -> Result<SumSideReport> {
    let data = extract_simple_data(phi, cd);
    let rebuilt = sum_side(phi, cd, &data)?;
    let stored: BTreeMap<Coord, BigInt> = phi.psi.terms.iter().map(|t| (t.offset, t.coeff.clone())).collect();
    let keys: BTreeSet<&Coord> = rebuilt.keys().chain(stored.keys()).collect();
    let mut mismatches = Vec::new();
    for c in keys {
        let a = stored.get(c).cloned().unwrap_or_default();
        let b = rebuilt.get(c).cloned().unwrap_or_default();
        if a != b {
            let mu = &phi.rho + &phi.field().dual_point(c.0, c.1);
            mismatches.push(format!("at {}: product {} vs sum {}", mu, a, b));
        }
    }
    Ok(SumSideReport {
        simple_roots: data.len(),
        product_terms: stored.len(),
        sum_terms: rebuilt.len(),
        passed: mismatches.is_empty(),
        mismatches: mismatches.into_iter().take(20).collect(),
    })
}

/// μ(n) from 1 − Σ_{k≥1} m(k)t^k = ∏_{n≥1} (1 − tⁿ)^{μ(n)}, for n ≤ m.len().
///
/// Peeling off one factor at a time: if P = 1 + c·tⁿ + O(tⁿ⁺¹) then μ(n) = −c and
/// P·(1 − tⁿ)^{−μ(n)} = 1 + O(tⁿ⁺¹).
pub fn mu_along_isotropic(m: &[BigInt]) -> Vec<BigInt> {
    let len = m.len() + 1;
    let mut p: Vec<BigInt> = std::iter::once(BigInt::one()).chain(m.iter().map(|x| -x)).collect();
    let mut mu = Vec::with_capacity(m.len());
    for n in 1..len {
        let e = -&p[n];
        // multiply by (1 − tⁿ)^{−e}
        let times = e.abs().to_u64().expect("exponent too large");
        for _ in 0..times {
            if e.is_positive() {
                // 1/(1 − tⁿ): prefix sums with step n
                for j in n..len {
                    let v = p[j - n].clone();
                    p[j] += v;
                }
            } else {
                for j in (n..len).rev() {
                    let v = p[j - n].clone();
                    p[j] -= v;
                }
            }
        }
        mu.push(e);
    }
    mu
}

/// max(5, ⌈grade of the third nontrivial Weyl image of ρ⌉).
pub fn default_grade_bound(k: &QuadField, cd: &CartanData, rho: &QuadElem) -> Result<Rational> {
    let mut gs = Vec::new();
    for i in -4..=4 {
        for flip in [false, true] {
            if i == 0 && !flip {
                continue;
            }
            let (nu, _) = weyl_orbit_elem(cd, i, flip, rho)?;
            gs.push(grade(k, &nu));
        }
    }
    gs.sort();
    let third = crate::exact::ceil(&Rational::from_float(gs[2].to_f64()).unwrap());
    let mut b = Rational::from_integer(third);
    if gs[2].cmp_rational(&b) == Ordering::Greater {
        b += int(1);
    }
    Ok(b.max(int(5)))
}
