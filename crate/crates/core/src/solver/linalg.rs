//! Linear algebra used by the solver: incremental echelon forms and nullspaces
//! over 𝔽_p, fraction-free Gauss–Jordan over ℤ, and reduced row echelon form over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::modp;
use crate::exact::Rational;

/// An echelon basis over 𝔽_p that accepts vectors one at a time.
#[derive(Clone, Debug, Default)]
pub struct EchelonModP {
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonModP {
    pub fn new() -> EchelonModP {
        EchelonModP { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current span; reports whether it was.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        for (c, b) in &self.rows {
            let f = v[*c];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    if *y != 0 {
                        *x = modp::sub(*x, modp::mul(f, *y));
                    }
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(c) => {
                let inv = modp::inv(v[c]);
                for x in v.iter_mut() {
                    *x = modp::mul(*x, inv);
                }
                self.rows.push((c, v));
                true
            }
        }
    }
}

/// Basis of {x : Mx = 0} over 𝔽_p for an r × n matrix given by rows.
pub fn nullspace_modp(rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let inv = modp::inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = modp::mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if *y != 0 {
                        *x = modp::sub(*x, modp::mul(f, *y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for fc in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[fc] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = modp::sub(0, m[i][fc]);
        }
        out.push(v);
    }
    out
}

pub fn rank_modp(rows: &[Vec<u64>]) -> usize {
    let mut e = EchelonModP::new();
    rows.iter().filter(|r| e.insert(r)).count()
}

/// Solves A X = R for a nonsingular integer A by fraction-free Gauss–Jordan.
/// Returns (δ, δ·X) with δ = ±det A and every entry an integer, or None when A is singular.
pub fn bareiss_solve(a: &[Vec<BigInt>], r: &[Vec<BigInt>]) -> Option<(BigInt, Vec<Vec<BigInt>>)> {
    let d = a.len();
    let k = r.first().map_or(0, |x| x.len());
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(r)
        .map(|(row, rhs)| row.iter().chain(rhs.iter()).cloned().collect())
        .collect();
    let width = d + k;
    let mut prev = BigInt::one();
    for c in 0..d {
        let pr = (c..d).find(|&i| !m[i][c].is_zero())?;
        m.swap(pr, c);
        let piv = m[c][c].clone();
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == c {
                continue;
            }
            let f = std::mem::take(&mut row[c]);
            for j in (0..width).filter(|&j| j != c) {
                let v = &piv * &row[j] - &f * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                row[j] = q;
            }
        }
        prev = piv;
    }
    // every diagonal entry now equals the last pivot
    let det = prev;
    let x: Vec<Vec<BigInt>> = m.iter().map(|row| row[d..].to_vec()).collect();
    Some((det, x))
}

/// Reduced row echelon form over ℚ; returns the pivot columns.
pub fn rref_rational(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace of a rational matrix with `n` columns.
pub fn nullspace_rational(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref_rational(&mut m);
    let mut out = Vec::new();
    for fc in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[fc] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][fc].clone();
        }
        out.push(v);
    }
    out
}

/// The unique solution of A x = b over ℚ, if A has full column rank and the system is consistent.
pub fn solve_rational_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| row.iter().cloned().chain(std::iter::once(x.clone())).collect())
        .collect();
    let pivots = rref_rational(&mut m);
    if pivots.contains(&n) || pivots.len() != n {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}
