//! Existence of f_m: the support rule, the ε-condition at −m and the pairing
//! Σ_{n<0} s(n)a(n)b(−n) = b(m) against every g ∈ S^{ε*}(N, 2, χ_D).

use num_traits::Zero;

use super::linalg::{rref_rational, nullspace_rational, solve_rational_unique};
use super::pool::{generator_pool, select_basis, PoolOrder};
use super::Level;
use crate::arith::factorize;
use crate::characters::{dim_cusp, dim_modular, index_gamma0};
use crate::dense;
use crate::error::{Error, Result};
use crate::exact::{int, Rational};

/// A basis of S^{ε*}(N, 2, χ_D), each form given by its coefficients 0 ..= cutoff.
#[derive(Clone, Debug)]
pub struct ObstructionSpace {
    pub n: u64,
    pub dim_modular: u64,
    pub dim_cusp: u64,
    /// The prime p ≡ 1 mod N whose Hecke operator cuts out the cusp forms.
    pub hecke_prime: u64,
    pub cutoff: usize,
    pub forms: Vec<Vec<Rational>>,
}

fn is_prime(p: u64) -> bool {
    p > 1 && factorize(p).len() == 1 && factorize(p)[0].1 == 1
}

/// The cusp forms are the image of T_p − (1 + p) for a prime p ≡ 1 mod N: every
/// Eisenstein series of level N has T_p-eigenvalue ψ(p) + φ(p)p = 1 + p, while
/// cuspidal eigenvalues are bounded by 2√p.
pub fn obstruction_space(n: u64, cutoff: usize) -> Result<ObstructionSpace> {
    let lv = Level::new(n)?;
    let dm = dim_modular(n, 2, &lv.chi)?;
    let ds = dim_cusp(n, 2, &lv.chi)?;
    let p = (1..).map(|k| k * n + 1).find(|&p| is_prime(p)).unwrap();
    let mut out = ObstructionSpace { n, dim_modular: dm, dim_cusp: ds, hecke_prime: p, cutoff, forms: Vec::new() };
    if ds == 0 {
        return Ok(out);
    }
    let d = dm as usize;
    let sturm = (index_gamma0(n) / 6) as usize;
    let pool = generator_pool(n, 2, &lv.chi, 1, PoolOrder::Natural);
    let (basis, rank) = select_basis(&pool, d, sturm + 1);
    if rank < d {
        return Err(Error::SpanDeficient { rank, dim: d });
    }
    let len = (p as usize * sturm + 1).max(cutoff + 1);
    let b: Vec<Vec<Rational>> = basis.iter().map(|it| dense::to_rat(&it.dense_int(len))).collect();

    // coordinates of (T_p − 1 − p) b_i in the basis, read off from the first sturm + 1 coefficients
    let rows: Vec<Vec<Rational>> = (0..=sturm).map(|j| b.iter().map(|bi| bi[j].clone()).collect()).collect();
    let pp = int(p as i64);
    let mut image = Vec::new();
    for bi in &b {
        let t: Vec<Rational> = (0..=sturm)
            .map(|j| {
                let mut v = bi[p as usize * j].clone() - (&pp + int(1)) * &bi[j];
                if j % p as usize == 0 {
                    v += &pp * &bi[j / p as usize];
                }
                v
            })
            .collect();
        let x = solve_rational_unique(&rows, &t)
            .ok_or_else(|| Error::Verification(format!("T_{} leaves M_2 at N={}", p, n)))?;
        image.push(x);
    }
    let pivots = rref_rational(&mut image);
    if pivots.len() != ds as usize {
        return Err(Error::Verification(format!(
            "Hecke image has dimension {} but dim S_2 = {}",
            pivots.len(),
            ds
        )));
    }
    let cusp: Vec<Vec<Rational>> = image[..pivots.len()]
        .iter()
        .map(|x| {
            (0..=cutoff)
                .map(|j| x.iter().zip(&b).map(|(c, bi)| c * &bi[j]).sum())
                .collect()
        })
        .collect();

    let cond: Vec<Vec<Rational>> = (1..=cutoff as i64)
        .filter(|&j| !lv.eps_star_ok(j))
        .map(|j| cusp.iter().map(|g| g[j as usize].clone()).collect())
        .collect();
    let ns = if cond.is_empty() {
        (0..cusp.len()).map(|i| (0..cusp.len()).map(|k| if i == k { int(1) } else { int(0) }).collect()).collect()
    } else {
        nullspace_rational(&cond, cusp.len())
    };
    out.forms = ns
        .iter()
        .map(|v| (0..=cutoff).map(|j| v.iter().zip(&cusp).map(|(c, g)| c * &g[j]).sum()).collect())
        .collect();
    Ok(out)
}

/// Does f_m exist?
///
/// Without cusp forms the pairing is vacuous. For m = 1 the pairing is nonzero
/// as soon as S_2(N, χ_D) ≠ 0, so f_1 exists exactly when dim S_2(N, χ_D) = 0.
pub fn exists_fm(n: u64, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let lv = Level::new(n)?;
    if !lv.allowed(-(m as i64)) {
        return Ok(false);
    }
    if dim_cusp(n, 2, &lv.chi)? == 0 {
        return Ok(true);
    }
    if m == 1 {
        return Ok(false);
    }
    let sturm = (index_gamma0(n) / 6) as usize;
    let cutoff = (4 * sturm).max(2 * m as usize + 50).max(100);
    let space = obstruction_space(n, cutoff)?;
    Ok(space.forms.iter().all(|g| g[m as usize].is_zero()))
}
