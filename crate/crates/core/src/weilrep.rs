//! The discriminant form D = 𝔡⁻¹/O_F, the Weil representation ρ_D on ℂ[D]
//! and the rule for collecting scalar coefficients into components.
//!
//! Matrix entries are kept in ℤ[ζ_N]. The factor 1/√N of ρ_D(S) is not
//! represented: the module works with S′ = √N·ρ_D(S) and with the Gauss sum
//! G = Σ_γ e(q(γ)), which equals √N, whenever a relation involves √N.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::characters::kronecker;
use crate::cyclotomic::{Cyc, CycMatrix};
use crate::error::Result;
use crate::exact::{int, rat, Rational};
use crate::qseries::QSeries;
use crate::quadfield::{QuadElem, QuadField};

#[derive(Clone, Debug)]
pub struct DiscForm {
    pub field: QuadField,
    /// Order N of D.
    pub n: u64,
    /// Representatives as `dual_point` coordinates (a, b).
    pub elements: Vec<(i64, i64)>,
    /// N·q(γ) mod N.
    pub nq: Vec<u64>,
}

impl DiscForm {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> QuadElem {
        let (a, b) = self.elements[i];
        self.field.dual_point(a, b)
    }

    /// q(γ) ∈ [0, 1).
    pub fn qval(&self, i: usize) -> Rational {
        rat(self.nq[i] as i64, self.n as i64)
    }

    /// N·(γ, δ) mod N where (γ, δ) = q(γ + δ) − q(γ) − q(δ).
    pub fn bilinear_scaled(&self, i: usize, j: usize) -> u64 {
        let (a1, b1) = self.elements[i];
        let (a2, b2) = self.elements[j];
        let k = &self.field;
        let v = k.scaled_norm(a1 + a2, b1 + b2) - k.scaled_norm(a1, b1) - k.scaled_norm(a2, b2);
        v.rem_euclid(self.n as i64) as u64
    }

    pub fn bilinear(&self, i: usize, j: usize) -> Rational {
        rat(self.bilinear_scaled(i, j) as i64, self.n as i64)
    }

    /// Index of the class containing dual_point(a, b).
    pub fn index_of(&self, a: i64, b: i64) -> usize {
        let (a, b) = self.reduce(a, b);
        self.elements.iter().position(|&e| e == (a, b)).expect("representative present")
    }

    fn reduce(&self, a: i64, b: i64) -> (i64, i64) {
        let n1 = self.field.n1 as i64;
        if self.field.n1 % 4 == 1 {
            // ν ≡ k/√N₁ mod O_F with 2k ≡ b mod N₁
            let k = ((b - a * n1) / 2).rem_euclid(n1);
            (0, 2 * k)
        } else {
            (a.rem_euclid(2), b.rem_euclid(2 * n1))
        }
    }

    pub fn neg_index(&self, i: usize) -> usize {
        let (a, b) = self.elements[i];
        self.index_of(-a, -b)
    }
}

pub fn disc_form(n1: u64) -> Result<DiscForm> {
    let field = QuadField::new(n1)?;
    let n = field.disc;
    let n1i = n1 as i64;
    let mut elements = Vec::new();
    if n1 % 4 == 1 {
        for k in 0..n1i {
            elements.push((0, 2 * k));
        }
    } else {
        for a in 0..2 {
            for b in 0..2 * n1i {
                elements.push((a, b));
            }
        }
    }
    let nq = elements
        .iter()
        .map(|&(a, b)| field.scaled_norm(a, b).rem_euclid(n as i64) as u64)
        .collect();
    Ok(DiscForm { field, n, elements, nq })
}

/// ρ_D(T) = diag(e(q(γ))).
pub fn rho_t(d: &DiscForm) -> CycMatrix {
    let n = d.n as usize;
    let mut m = CycMatrix::zero(n, d.order());
    for i in 0..d.order() {
        m.set(i, i, Cyc::root(n, d.nq[i] as i64));
    }
    m
}

/// S′ = √N·ρ_D(S): entries e(−(γ, δ)).
pub fn rho_s_scaled(d: &DiscForm) -> CycMatrix {
    let n = d.n as usize;
    let mut m = CycMatrix::zero(n, d.order());
    for i in 0..d.order() {
        for j in 0..d.order() {
            m.set(j, i, Cyc::root(n, -(d.bilinear_scaled(i, j) as i64)));
        }
    }
    m
}

/// Σ_γ e(q(γ)).
pub fn gauss_sum(d: &DiscForm) -> Cyc {
    let n = d.n as usize;
    let mut g = Cyc::zero(n);
    for &v in &d.nq {
        g = &g + &Cyc::root(n, v as i64);
    }
    g
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeilCheck {
    pub n: u64,
    pub order: usize,
    /// S′S′† = N·I, i.e. ρ_S is unitary.
    pub unitary: bool,
    /// G² = N and G equals the quadratic Gauss sum Σ_a (N/a) ζ^a = √N.
    pub milgram: bool,
    /// (S′T)³ = G·S′², i.e. (ρ_S ρ_T)³ = ρ_S².
    pub braid: bool,
    /// S′² = N·(e_γ ↦ e_{−γ}).
    pub s_squared_is_negation: bool,
    pub t_diagonal: bool,
}

impl WeilCheck {
    pub fn all_ok(&self) -> bool {
        self.unitary && self.milgram && self.braid && self.s_squared_is_negation && self.t_diagonal
    }
}

pub fn check_relations(d: &DiscForm) -> WeilCheck {
    let n = d.n as usize;
    let dim = d.order();
    let s = rho_s_scaled(d);
    let t = rho_t(d);
    let g = gauss_sum(d);
    let nn = Cyc::from_int(n, d.n as i64);

    let mut n_id = CycMatrix::zero(n, dim);
    let mut n_neg = CycMatrix::zero(n, dim);
    for i in 0..dim {
        n_id.set(i, i, nn.clone());
        n_neg.set(d.neg_index(i), i, nn.clone());
    }
    let unitary = s.mul(&s.dagger()).eq_field(&n_id);
    let s2 = s.mul(&s);
    let st = s.mul(&t);
    let st3 = st.mul(&st).mul(&st);
    let braid = st3.eq_field(&s2.scale(&g));
    let mut quad_gauss = Cyc::zero(n);
    for a in 0..n as i64 {
        quad_gauss = &quad_gauss + &Cyc::root(n, a).scale(kronecker(d.n as i64, a) as i64);
    }
    let milgram = (&g * &g).eq_field(&nn) && g.eq_field(&quad_gauss);
    let t_diagonal = (0..dim).all(|i| (0..dim).all(|j| i == j || t.get(i, j).is_zero()));
    WeilCheck {
        n: d.n,
        order: dim,
        unitary,
        milgram,
        braid,
        s_squared_is_negation: s2.eq_field(&n_neg),
        t_diagonal,
    }
}

/// {N·q(γ) mod N : γ ∈ D}.
pub fn support_residues(d: &DiscForm) -> BTreeSet<u64> {
    d.nq.iter().copied().collect()
}

/// F_β = Σ_{n ≡ Nq(β) mod N} a(n) q^{n/N}, on the exponent grid 1/N.
pub fn collect_component(f: &QSeries, d: &DiscForm, beta: usize) -> Result<QSeries> {
    let n = d.n as i64;
    let r = d.nq[beta] as i64;
    let terms: Vec<(Rational, Rational)> = f
        .raw_terms()
        .iter()
        .filter_map(|(&k, c)| {
            let e = Rational::new(k.into(), (f.lambda() as i64).into());
            if e.is_integer() {
                let m: i64 = crate::exact::floor(&e).try_into().unwrap();
                if m.rem_euclid(n) == r {
                    return Some((e / int(n), c.clone()));
                }
            }
            None
        })
        .collect();
    let prec = f.prec().map(|p| p / int(n));
    QSeries::from_terms(d.n, terms, prec.as_ref())
}
