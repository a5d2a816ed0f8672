//! Kronecker characters χ_D, their local components, the ε/ε*/δ sign vectors,
//! Eisenstein series with characters, dimension formulas and Sturm bounds.

pub mod dimension;
pub mod eisenstein;

use std::collections::BTreeMap;

use crate::arith::{factorize, gcd, is_fundamental, prime_divisors};
use crate::error::{Error, Result};

pub use dimension::{
    dim_cusp, dim_eisenstein, dim_modular, index_gamma0, index_gamma1, integrality_check, sturm_bound,
    IntegralityReport,
};
pub use eisenstein::{bernoulli, bernoulli_poly, eisenstein_pair, eisenstein_pair_scaled, gen_bernoulli};

/// Kronecker symbol (a/n) for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut res = 1i32;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= v;
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            res = -res;
        }
    }
    res * jacobi(a.rem_euclid(n), n)
}

/// Jacobi symbol (a/n) for odd n > 0.
pub fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut res = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// A real Dirichlet character n ↦ (D/n) regarded modulo `modulus`.
/// D = 1 is the trivial character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirichletChar {
    pub modulus: u64,
    pub disc: i64,
}

impl DirichletChar {
    /// (D/·) modulo `modulus`; D must be 1 or a fundamental discriminant whose
    /// absolute value divides the modulus.
    pub fn kronecker(disc: i64, modulus: u64) -> Result<DirichletChar> {
        if disc != 1 && !is_fundamental(disc) {
            return Err(Error::NotFundamental(disc));
        }
        if modulus == 0 || modulus % disc.unsigned_abs() != 0 {
            return Err(Error::InvalidInput(format!("conductor {} does not divide {}", disc.abs(), modulus)));
        }
        Ok(DirichletChar { modulus, disc })
    }

    pub fn trivial(modulus: u64) -> DirichletChar {
        DirichletChar { modulus, disc: 1 }
    }

    pub fn is_trivial(&self) -> bool {
        self.disc == 1
    }

    pub fn conductor(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn eval(&self, n: i64) -> i32 {
        if gcd(n, self.modulus as i64) != 1 {
            return 0;
        }
        kronecker(self.disc, n)
    }

    /// χ(−1).
    pub fn parity(&self) -> i32 {
        if self.disc < 0 {
            -1
        } else {
            1
        }
    }

    /// The same character as a primitive character (modulus = conductor).
    pub fn primitive(&self) -> DirichletChar {
        DirichletChar { modulus: self.conductor(), disc: self.disc }
    }

    pub fn lift(&self, modulus: u64) -> Result<DirichletChar> {
        DirichletChar::kronecker(self.disc, modulus)
    }
}

/// p* = ±p ≡ 1 mod 4 for odd p.
fn p_star(p: u64) -> i64 {
    if p % 4 == 1 {
        p as i64
    } else {
        -(p as i64)
    }
}

fn check_disc(n: u64) -> Result<()> {
    if n < 2 || !is_fundamental(n as i64) {
        return Err(Error::NotFundamental(n as i64));
    }
    Ok(())
}

/// χ_p for every p | N, each as a Kronecker character of a prime discriminant.
pub fn local_components(n: u64) -> Result<BTreeMap<u64, DirichletChar>> {
    check_disc(n)?;
    let mut out = BTreeMap::new();
    let mut odd = 1i64;
    for p in prime_divisors(n) {
        if p != 2 {
            let d = p_star(p);
            odd *= d;
            out.insert(p, DirichletChar { modulus: p, disc: d });
        }
    }
    if n % 2 == 0 {
        let d2 = n as i64 / odd;
        out.insert(2, DirichletChar { modulus: d2.unsigned_abs(), disc: d2 });
    }
    Ok(out)
}

/// Per-prime signs indexed by the primes dividing N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector(pub BTreeMap<u64, i32>);

impl SignVector {
    pub fn get(&self, p: u64) -> i32 {
        self.0[&p]
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// (ε, ε*).
pub fn epsilon_vectors(n: u64) -> Result<(SignVector, SignVector)> {
    let loc = local_components(n)?;
    let n1 = if n % 4 == 0 { n / 4 } else { n };
    let mut eps = BTreeMap::new();
    for (&p, chi) in &loc {
        let e = if p != 2 {
            chi.parity()
        } else if n1 % 4 == 3 {
            -1
        } else {
            prime_divisors(n1 / 2).into_iter().map(|q| if p_star(q) < 0 { -1 } else { 1 }).product()
        };
        eps.insert(p, e);
    }
    let star: BTreeMap<u64, i32> = eps.iter().map(|(&p, &e)| (p, loc[&p].parity() * e)).collect();
    if star.values().any(|&e| e != 1) {
        return Err(Error::Verification(format!("ε* is not trivial for N={}", n)));
    }
    Ok((SignVector(eps), SignVector(star)))
}

/// True iff the δ-condition lets a(n) be nonzero: either gcd(n, N) > 1,
/// or χ_p(n) = δ_p for every p | N.
pub fn delta_condition_ok(n: i64, delta: &SignVector, disc: u64) -> Result<bool> {
    if gcd(n, disc as i64) != 1 {
        return Ok(true);
    }
    let loc = local_components(disc)?;
    Ok(loc.iter().all(|(p, chi)| chi.eval(n) == delta.get(*p)))
}

/// Same as `delta_condition_ok` with the local components supplied.
pub fn delta_ok_with(n: i64, delta: &SignVector, loc: &BTreeMap<u64, DirichletChar>, disc: u64) -> bool {
    gcd(n, disc as i64) != 1 || loc.iter().all(|(p, chi)| chi.eval(n) == delta.get(*p))
}

/// s(m) = 2^{ω(gcd(m, N))}, with s(0) = 2^{ω(N)}.
pub fn s_factor(m: i64, n: u64) -> u64 {
    let g = gcd(m, n as i64).unsigned_abs();
    1u64 << factorize(g).len()
}

/// Fundamental discriminants D (and D = 1) whose absolute value divides N.
pub fn real_characters(n: u64) -> Vec<DirichletChar> {
    let mut out = vec![DirichletChar::trivial(n)];
    let n_i = n as i64;
    for d in 2..=n_i {
        if n_i % d != 0 {
            continue;
        }
        for s in [-d, d] {
            if is_fundamental(s) {
                out.push(DirichletChar { modulus: n, disc: s });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-4, 11), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(21, 2), -1);
        assert_eq!(kronecker(5, -1), 1);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(12, 6), 0);
    }

    #[test]
    fn eps_for_known_levels() {
        let (e, _) = epsilon_vectors(12).unwrap();
        assert_eq!((e.get(2), e.get(3)), (-1, -1));
        let (e, _) = epsilon_vectors(8).unwrap();
        assert_eq!(e.get(2), 1);
        let (e, _) = epsilon_vectors(21).unwrap();
        assert_eq!((e.get(3), e.get(7)), (-1, -1));
    }

    #[test]
    fn s_values() {
        assert_eq!(s_factor(6, 12), 4);
        assert_eq!(s_factor(0, 12), 4);
        assert_eq!(s_factor(13, 12), 1);
    }
}
