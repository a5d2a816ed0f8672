//! The basis forms f_m ∈ A^ε(N, 0, χ_D) with principal part q^{−m}/s(m).
//!
//! For m ≤ N the unknown f_m is multiplied by H = Δ(τ)Δ(Nτ), which lands in
//! M_24(Γ₀(N), χ_D). A basis of that space is chosen from Eisenstein products,
//! every candidate g = b/H is constrained to satisfy the support and ε-conditions
//! up to a cutoff B, and the cutoff doubles until the principal part determines
//! g. Larger m come from multiplication by j(Nτ).

pub mod duality;
pub mod integrality;
pub mod linalg;
pub mod obstruction;
pub mod pool;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_fundamental, modp};
use crate::characters::{
    delta_ok_with, dim_modular, epsilon_vectors, index_gamma0, local_components, s_factor, DirichletChar,
    SignVector,
};
use crate::dense;
use crate::error::{Error, Result};
use crate::eta::{delta_dense, j_expansion};
use crate::exact::{int, Rational};
use crate::qseries::QSeries;
use crate::quadfield::{norm_values_mod, QuadField};

pub use duality::{constant_duality_check, duality_weight, e_eps_star, lift_weight, DualityReport};
pub use integrality::{integrality_report, SturmReport};
pub use obstruction::exists_fm;
pub use pool::PoolOrder;

pub const DEFAULT_PREC: i64 = 200;

/// Level data shared by the solver, the obstruction test and the duality check.
#[derive(Clone, Debug)]
pub struct Level {
    pub n: u64,
    pub chi: DirichletChar,
    pub eps: SignVector,
    pub eps_star: SignVector,
    pub loc: BTreeMap<u64, DirichletChar>,
    pub support: BTreeSet<u64>,
}

impl Level {
    pub fn new(n: u64) -> Result<Level> {
        if n < 2 || !is_fundamental(n as i64) {
            return Err(Error::NotFundamental(n as i64));
        }
        let (eps, eps_star) = epsilon_vectors(n)?;
        let field = QuadField::from_disc(n)?;
        Ok(Level {
            n,
            chi: DirichletChar { modulus: n, disc: n as i64 },
            eps,
            eps_star,
            loc: local_components(n)?,
            support: norm_values_mod(&field),
        })
    }

    /// May a(e) be nonzero under the support rule and the ε-condition?
    pub fn allowed(&self, e: i64) -> bool {
        self.support.contains(&(e.rem_euclid(self.n as i64) as u64)) && delta_ok_with(e, &self.eps, &self.loc, self.n)
    }

    pub fn eps_star_ok(&self, e: i64) -> bool {
        delta_ok_with(e, &self.eps_star, &self.loc, self.n)
    }

    pub fn s(&self, m: i64) -> u64 {
        s_factor(m, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub method: String,
    pub multiplier: String,
    pub weight: i64,
    pub space_dim: usize,
    pub pool_size: usize,
    pub system_rank: usize,
    pub cutoff: i64,
    pub escalations: u32,
    pub basis: Vec<String>,
}

/// A computed f_m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WHForm {
    pub n: u64,
    pub m: u64,
    pub s_m: u64,
    pub coeffs: QSeries,
    pub provenance: Provenance,
}

impl WHForm {
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        self.coeffs.coeff_int(e)
    }

    /// Coefficients are known for exponents below this.
    pub fn prec(&self) -> i64 {
        self.coeffs.raw_prec().expect("f_m is truncated") / self.coeffs.lambda() as i64
    }

    pub fn truncate(&self, p: i64) -> WHForm {
        let mut f = self.clone();
        f.coeffs = self.coeffs.truncate(&int(p));
        f
    }

    /// (exponent, coefficient) for every nonzero coefficient.
    pub fn table(&self) -> Vec<(i64, Rational)> {
        self.coeffs
            .raw_terms()
            .iter()
            .map(|(&k, c)| (k / self.coeffs.lambda() as i64, c.clone()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub prec: i64,
    pub order: PoolOrder,
    pub max_doublings: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { prec: DEFAULT_PREC, order: PoolOrder::Natural, max_doublings: 6 }
    }
}

fn dense_div_exact(v: &[BigInt], d: &BigInt) -> Vec<Rational> {
    v.iter().map(|x| Rational::new(x.clone(), d.clone())).collect()
}

/// Solves for every f_m with m ≤ N at once; missing keys are forms that do not exist.
pub fn solve_space(n: u64, opts: &SolveOptions) -> Result<BTreeMap<u64, WHForm>> {
    let lv = Level::new(n)?;
    let weight = 24i64;
    let dim = dim_modular(n, weight, &lv.chi)? as usize;
    let mu0 = index_gamma0(n) as i64;
    let sturm = (weight * mu0 / 12) as usize;
    let pool = pool::generator_pool(n, weight, &lv.chi, 2, opts.order);
    let (basis, rank) = pool::select_basis(&pool, dim, sturm + 1);
    if rank < dim {
        return Err(Error::SpanDeficient { rank, dim });
    }
    let val = n as i64 + 1;
    let pp: Vec<i64> = (1..=val).map(|j| -j).filter(|&e| lv.allowed(e)).collect();

    // escalate the cutoff B until the principal part map on the solution space is injective
    let mut cutoff = 2 * mu0 + n as i64 + 1;
    let mut escalations = 0;
    let (gm, null_dim) = loop {
        let len = (cutoff + val + 1) as usize;
        let h = h_dense_int(n, len + val as usize);
        let u = dense::to_modp(&h[val as usize..]);
        let uinv = dense::inv_modp(&u, len);
        let gm: Vec<Vec<u64>> = basis
            .par_iter()
            .map(|b| dense::mul_modp(&b.dense_modp(len), &uinv, len))
            .collect();
        let rows: Vec<Vec<u64>> = (0..len)
            .filter(|&j| !lv.allowed(j as i64 - val))
            .map(|j| gm.iter().map(|g| g[j]).collect())
            .collect();
        let ns = linalg::nullspace_modp(&rows, dim);
        let proj: Vec<Vec<u64>> = ns
            .iter()
            .map(|v| {
                pp.iter()
                    .map(|&e| {
                        let j = (e + val) as usize;
                        v.iter().zip(&gm).fold(0u64, |acc, (c, g)| modp::add(acc, modp::mul(*c, g[j])))
                    })
                    .collect()
            })
            .collect();
        if linalg::rank_modp(&proj) == ns.len() {
            break (gm, ns.len());
        }
        if escalations >= opts.max_doublings {
            return Err(Error::Ambiguous(format!(
                "solution space still has a holomorphic part at cutoff {}",
                cutoff
            )));
        }
        cutoff *= 2;
        escalations += 1;
    };

    // square system: independent condition rows, then principal-part rows
    let len_m = (cutoff + val + 1) as usize;
    let mut ech = linalg::EchelonModP::new();
    let mut sel: Vec<(i64, bool)> = Vec::new();
    for j in 0..len_m {
        let e = j as i64 - val;
        if !lv.allowed(e) {
            let row: Vec<u64> = gm.iter().map(|g| g[j]).collect();
            if ech.insert(&row) {
                sel.push((e, false));
            }
        }
    }
    for &e in &pp {
        let j = (e + val) as usize;
        let row: Vec<u64> = gm.iter().map(|g| g[j]).collect();
        if ech.insert(&row) {
            sel.push((e, true));
        }
    }
    if ech.rank() != dim {
        return Err(Error::Ambiguous(format!("square system has rank {} < {}", ech.rank(), dim)));
    }

    // exact candidates g_i = b_i / H on exponents −val .. L−1
    let l = opts.prec.max(cutoff + 1);
    let le = (l + val) as usize;
    let h = h_dense_int(n, le + val as usize);
    let uinv = dense::inv_int_unit(&h[val as usize..], le);
    let mut spec_cache: HashMap<pool::EisSpec, Vec<BigInt>> = HashMap::new();
    for it in &basis {
        match it {
            pool::PoolItem::Single(e) => {
                spec_cache.entry(*e).or_insert_with(|| e.dense_int(le));
            }
            pool::PoolItem::Product(a, b) => {
                spec_cache.entry(*a).or_insert_with(|| a.dense_int(le));
                spec_cache.entry(*b).or_insert_with(|| b.dense_int(le));
            }
        }
    }
    let g: Vec<Vec<BigInt>> = basis
        .par_iter()
        .map(|it| {
            let b = match it {
                pool::PoolItem::Single(e) => spec_cache[e].clone(),
                pool::PoolItem::Product(a, b) => dense::mul_int(&spec_cache[a], &spec_cache[b], le),
            };
            dense::mul_int(&b, &uinv, le)
        })
        .collect();

    let targets: Vec<i64> = pp.iter().map(|e| -e).filter(|&m| m <= n as i64).collect();
    let a: Vec<Vec<BigInt>> = sel
        .iter()
        .map(|&(e, _)| g.iter().map(|gi| gi[(e + val) as usize].clone()).collect())
        .collect();
    let rhs: Vec<Vec<BigInt>> = sel
        .iter()
        .map(|&(e, is_pp)| {
            targets
                .iter()
                .map(|&m| if is_pp && e == -m { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let (det, x) = linalg::bareiss_solve(&a, &rhs)
        .ok_or_else(|| Error::Verification("square system is singular over ℚ".into()))?;

    let labels: Vec<String> = basis.iter().map(|b| b.label()).collect();
    let mut out = BTreeMap::new();
    for (col, &m) in targets.iter().enumerate() {
        let coeffs: Vec<Rational> = {
            let mut acc = vec![BigInt::zero(); le];
            for (i, gi) in g.iter().enumerate() {
                let c = &x[i][col];
                if c.is_zero() {
                    continue;
                }
                for (t, v) in acc.iter_mut().zip(gi) {
                    *t += c * v;
                }
            }
            match verify_candidate(&lv, &acc, &det, m, val) {
                Check::Ok => dense_div_exact(&acc, &det),
                Check::PrincipalPart => continue,
                Check::Condition => match fallback_solve(&lv, &g, m, val, cutoff)? {
                    Some(c) => c,
                    None => continue,
                },
            }
        };
        let s_m = lv.s(m);
        let scale = Rational::new(BigInt::one(), BigInt::from(s_m));
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(j, c)| (int(j as i64 - val), c * &scale))
            .filter(|(e, c)| !c.is_zero() && *e < int(opts.prec));
        let series = QSeries::from_terms(1, terms, Some(&int(opts.prec)))?;
        out.insert(
            m as u64,
            WHForm {
                n,
                m: m as u64,
                s_m,
                coeffs: series,
                provenance: Provenance {
                    method: "solve".into(),
                    multiplier: "Δ(τ)Δ(Nτ)".into(),
                    weight,
                    space_dim: dim,
                    pool_size: pool.len(),
                    system_rank: dim - null_dim,
                    cutoff,
                    escalations,
                    basis: labels.clone(),
                },
            },
        );
    }
    Ok(out)
}

enum Check {
    Ok,
    PrincipalPart,
    Condition,
}

/// `acc` holds det·s(m)·f_m on exponents −val ..; the principal part must be det·q^{−m}
/// and every forbidden coefficient must vanish.
fn verify_candidate(lv: &Level, acc: &[BigInt], det: &BigInt, m: i64, val: i64) -> Check {
    for (j, c) in acc.iter().enumerate() {
        let e = j as i64 - val;
        if e < 0 {
            let want = if e == -m { det.clone() } else { BigInt::zero() };
            if *c != want {
                return Check::PrincipalPart;
            }
        }
    }
    for (j, c) in acc.iter().enumerate() {
        let e = j as i64 - val;
        if e > 0 && !lv.allowed(e) && !c.is_zero() {
            return Check::Condition;
        }
    }
    Check::Ok
}

/// Exact elimination over every condition row up to the cutoff, used when the
/// square system picked modulo p does not reproduce all conditions.
fn fallback_solve(lv: &Level, g: &[Vec<BigInt>], m: i64, val: i64, cutoff: i64) -> Result<Option<Vec<Rational>>> {
    let dim = g.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for j in 0..=(cutoff + val) as usize {
        let e = j as i64 - val;
        if e < 0 && lv.allowed(e) {
            rows.push(g.iter().map(|gi| Rational::from_integer(gi[j].clone())).collect());
            rhs.push(if e == -m { Rational::one() } else { Rational::zero() });
        } else if !lv.allowed(e) {
            rows.push(g.iter().map(|gi| Rational::from_integer(gi[j].clone())).collect());
            rhs.push(Rational::zero());
        }
    }
    let Some(x) = linalg::solve_rational_unique(&rows, &rhs) else { return Ok(None) };
    let le = g[0].len();
    let mut acc = vec![Rational::zero(); le];
    for (i, gi) in g.iter().enumerate().take(dim) {
        for (t, v) in acc.iter_mut().zip(gi) {
            *t += &x[i] * Rational::from_integer(v.clone());
        }
    }
    for (j, c) in acc.iter().enumerate() {
        let e = j as i64 - val;
        if !lv.allowed(e) && !c.is_zero() {
            return Err(Error::Verification(format!("f_{} violates the conditions at q^{}", m, e)));
        }
    }
    Ok(Some(acc))
}

/// Δ(τ)Δ(Nτ) for exponents below `len`.
pub fn h_dense_int(n: u64, len: usize) -> Vec<BigInt> {
    let d = delta_dense(len);
    let dn = dense::dilate(&d, n as usize, len);
    dense::mul_int(&d, &dn, len)
}

/// Computes and memoizes f_m for one level, including m > N through j(Nτ).
pub struct Solver {
    pub level: Level,
    pub opts: SolveOptions,
    base: Option<BTreeMap<u64, WHForm>>,
    cache: HashMap<u64, WHForm>,
}

impl Solver {
    pub fn new(n: u64, opts: SolveOptions) -> Result<Solver> {
        Ok(Solver { level: Level::new(n)?, opts, base: None, cache: HashMap::new() })
    }

    fn base(&mut self) -> Result<&BTreeMap<u64, WHForm>> {
        if self.base.is_none() {
            self.base = Some(solve_space(self.level.n, &self.opts)?);
        }
        Ok(self.base.as_ref().unwrap())
    }

    /// f_m, or `DoesNotExist`.
    pub fn get(&mut self, m: u64) -> Result<WHForm> {
        let n = self.level.n;
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        if !exists_fm(n, m)? {
            return Err(Error::DoesNotExist { n, m });
        }
        if m <= n {
            return self
                .base()?
                .get(&m)
                .cloned()
                .ok_or_else(|| Error::NoSolution(format!("linear system for f_{} at N={} is infeasible", m, n)));
        }
        if let Some(f) = self.cache.get(&m) {
            return Ok(f.clone());
        }
        let f = self.extend(m)?;
        self.cache.insert(m, f.clone());
        Ok(f)
    }

    fn extend(&mut self, m: u64) -> Result<WHForm> {
        let n = self.level.n;
        let lower = self.get(m - n)?;
        let pf = lower.prec();
        let j = j_expansion(n, pf + m as i64);
        let ratio = Rational::new(BigInt::from(lower.s_m), BigInt::from(self.level.s(m as i64)));
        let mut g = (&lower.coeffs * &j).scale(&ratio);
        for r in (1..m).rev() {
            let c = g.coeff_int(-(r as i64)).unwrap_or_default();
            if c.is_zero() {
                continue;
            }
            let fr = self.get(r).map_err(|e| {
                Error::Verification(format!("f_{} needs f_{} which is unavailable: {}", m, r, e))
            })?;
            let k = &c * int(fr.s_m as i64);
            g = &g - &fr.coeffs.scale(&k);
        }
        let s_m = self.level.s(m as i64);
        if g.coeff_int(-(m as i64)) != Some(Rational::new(BigInt::one(), BigInt::from(s_m))) {
            return Err(Error::Verification(format!("f_{} has the wrong leading coefficient", m)));
        }
        let mut prov = lower.provenance.clone();
        prov.method = format!("f_{}·j({}τ) reduction", m - n, n);
        Ok(WHForm { n, m, s_m, coeffs: g, provenance: prov })
    }
}

/// f_m for m ≤ N with coefficients below `prec`.
pub fn solve_fm(n: u64, m: u64, prec: i64) -> Result<WHForm> {
    if m > n {
        return Err(Error::InvalidInput(format!("solve_fm needs m ≤ N; use extend_fm for m = {}", m)));
    }
    let mut s = Solver::new(n, SolveOptions { prec, ..Default::default() })?;
    s.get(m)
}

/// f_m for m > N with coefficients below `prec`.
pub fn extend_fm(n: u64, m: u64, prec: i64) -> Result<WHForm> {
    let levels = (m as i64 - 1) / n as i64;
    let mut s = Solver::new(n, SolveOptions { prec: prec + levels * n as i64, ..Default::default() })?;
    Ok(s.get(m)?.truncate(prec))
}
