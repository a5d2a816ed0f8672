//! The group ring ℤ[C_N] mapped onto ℤ[ζ_N]; equality is decided modulo Φ_N.

use std::ops::{Add, Mul, Sub};

use crate::arith::divisors;

/// Σ c_a ζ^a with a ∈ ℤ/N.
#[derive(Clone, Debug)]
pub struct Cyc {
    pub n: usize,
    pub c: Vec<i64>,
}

impl Cyc {
    pub fn zero(n: usize) -> Cyc {
        Cyc { n, c: vec![0; n] }
    }

    pub fn from_int(n: usize, x: i64) -> Cyc {
        let mut z = Cyc::zero(n);
        z.c[0] = x;
        z
    }

    /// ζ^a.
    pub fn root(n: usize, a: i64) -> Cyc {
        let mut z = Cyc::zero(n);
        z.c[a.rem_euclid(n as i64) as usize] = 1;
        z
    }

    /// Complex conjugation ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> Cyc {
        let mut z = Cyc::zero(self.n);
        for (a, &v) in self.c.iter().enumerate() {
            z.c[(self.n - a) % self.n] += v;
        }
        z
    }

    pub fn scale(&self, k: i64) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().map(|x| x * k).collect() }
    }

    /// Canonical remainder modulo Φ_N, of degree < φ(N).
    pub fn reduced(&self) -> Vec<i64> {
        let phi = cyclotomic_poly(self.n as u64);
        let deg = phi.len() - 1;
        let mut r = self.c.clone();
        for top in (deg..r.len()).rev() {
            let q = r[top];
            if q != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    r[top - deg + i] -= q * p;
                }
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&x| x == 0)
    }

    pub fn eq_field(&self, other: &Cyc) -> bool {
        (self - other).is_zero()
    }
}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, o: &Cyc) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, o: &Cyc) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, o: &Cyc) -> Cyc {
        let n = self.n;
        let mut z = Cyc::zero(n);
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                if y != 0 {
                    z.c[(i + j) % n] += x * y;
                }
            }
        }
        z
    }
}

/// Coefficients of Φ_n, constant term first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n − 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        p = poly_div_exact(&p, &cyclotomic_poly(d));
    }
    p
}

fn poly_div_exact(a: &[i64], b: &[i64]) -> Vec<i64> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] / b[db];
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

/// Square matrices over ℤ[C_N].
#[derive(Clone, Debug)]
pub struct CycMatrix {
    pub n: usize,
    pub dim: usize,
    pub e: Vec<Cyc>,
}

impl CycMatrix {
    pub fn zero(n: usize, dim: usize) -> CycMatrix {
        CycMatrix { n, dim, e: vec![Cyc::zero(n); dim * dim] }
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.e[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyc) {
        self.e[i * self.dim + j] = v;
    }

    pub fn mul(&self, o: &CycMatrix) -> CycMatrix {
        let d = self.dim;
        let mut out = CycMatrix::zero(self.n, d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.c.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(k, j);
                    if b.c.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let p = a * b;
                    let idx = i * d + j;
                    out.e[idx] = &out.e[idx] + &p;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CycMatrix {
        let d = self.dim;
        let mut out = CycMatrix::zero(self.n, d);
        for i in 0..d {
            for j in 0..d {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyc) -> CycMatrix {
        CycMatrix { n: self.n, dim: self.dim, e: self.e.iter().map(|x| x * c).collect() }
    }

    pub fn eq_field(&self, o: &CycMatrix) -> bool {
        self.e.iter().zip(&o.e).all(|(a, b)| a.eq_field(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_sum_vanishes() {
        let n = 12;
        let mut s = Cyc::zero(n);
        for a in 0..n as i64 {
            s = &s + &Cyc::root(n, a);
        }
        assert!(s.is_zero());
    }
}
