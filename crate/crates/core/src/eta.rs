//! Dedekind eta expansions, eta-quotients and their cusp orders, Δ and j.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisors, euler_phi, gcd, is_fundamental};
use crate::characters::{dimension::index_gamma0, DirichletChar};
use crate::dense;
use crate::error::{Error, Result};
use crate::exact::{ceil, int, rat, Rational};
use crate::qseries::QSeries;

/// ∏_{n≥1}(1 − qⁿ) for exponents below `len`, by the pentagonal number theorem.
pub fn euler_product(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    let mut k: i64 = 0;
    loop {
        let mut hit = false;
        for kk in [k, -k] {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) < len {
                c[e as usize] = BigInt::from(if kk % 2 == 0 { 1 } else { -1 });
                hit = true;
            }
            if k == 0 {
                break;
            }
        }
        if !hit {
            break;
        }
        k += 1;
    }
    c
}

/// η(dτ) = q^{d/24} ∏(1 − q^{dn}), with every coefficient below exponent `prec` known.
pub fn eta_expansion(d: u64, prec: &Rational) -> QSeries {
    let lead = rat(d as i64, 24);
    let lambda = 24 / gcd(24, d as i64) as u64;
    let span = prec - &lead;
    let len = if span <= Rational::zero() { 0 } else { (ceil(&span).to_i64().unwrap() as usize + d as usize - 1) / d as usize };
    let e = euler_product(len);
    let terms = e
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (&lead + int(d as i64 * i as i64), Rational::from_integer(c)));
    QSeries::from_terms(lambda, terms, Some(prec)).expect("grid contains every eta exponent")
}

/// Δ/q = ∏(1 − qⁿ)^{24} for exponents below `len`.
pub fn delta_over_q(len: usize) -> Vec<BigInt> {
    // n·F_n = −24 Σ_{k=1}^{n} σ(k) F_{n−k}
    let sigma: Vec<BigInt> = (0..len)
        .map(|k| if k == 0 { BigInt::zero() } else { BigInt::from(divisors(k as u64).iter().sum::<u64>()) })
        .collect();
    let mut f = vec![BigInt::zero(); len];
    if len == 0 {
        return f;
    }
    f[0] = BigInt::from(1);
    for n in 1..len {
        let mut s = BigInt::zero();
        for k in 1..=n {
            s += &sigma[k] * &f[n - k];
        }
        f[n] = s * -24 / BigInt::from(n);
    }
    f
}

/// Δ(τ) = Σ τ(n)qⁿ for exponents below `len` (index 0 holds 0).
pub fn delta_dense(len: usize) -> Vec<BigInt> {
    let mut d = vec![BigInt::zero(); len];
    for (i, c) in delta_over_q(len.saturating_sub(1)).into_iter().enumerate() {
        d[i + 1] = c;
    }
    d
}

pub fn delta_expansion(prec: i64) -> QSeries {
    let len = prec.max(0) as usize;
    QSeries::from_dense(0, &dense::to_rat(&delta_dense(len)), Some(prec))
}

/// E₄ = 1 + 240 Σ σ₃(n)qⁿ for exponents below `len`.
pub fn e4_dense(len: usize) -> Vec<BigInt> {
    (0..len)
        .map(|n| {
            if n == 0 {
                BigInt::from(1)
            } else {
                BigInt::from(240) * divisors(n as u64).iter().map(|&d| BigInt::from(d).pow(3)).sum::<BigInt>()
            }
        })
        .collect()
}

/// Coefficients of q·j(τ) = E₄³/(Δ/q) for exponents below `len`.
pub fn j_times_q(len: usize) -> Vec<BigInt> {
    let e4 = e4_dense(len);
    let e43 = dense::mul_int(&dense::mul_int(&e4, &e4, len), &e4, len);
    dense::mul_int(&e43, &dense::inv_int_unit(&delta_over_q(len), len), len)
}

/// j(Nτ) = q^{−N} + 744 + 196884 q^N + …, with every coefficient below `prec` known.
pub fn j_expansion(n: u64, prec: i64) -> QSeries {
    let n = n as i64;
    let len = if prec + n <= 0 { 0 } else { ((prec + n - 1) / n + 1) as usize };
    let c = j_times_q(len);
    let terms = c
        .into_iter()
        .enumerate()
        .map(|(i, x)| (int((i as i64 - 1) * n), Rational::from_integer(x)))
        .filter(|(e, x)| !x.is_zero() && *e < int(prec));
    QSeries::from_terms(1, terms, Some(&int(prec))).unwrap()
}

/// A cusp class of Γ₀(M) with denominator c | M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub c: u64,
    /// Number of Γ₀(M)-inequivalent cusps a/c: φ(gcd(c, M/c)).
    pub count: u64,
    /// M / gcd(c², M).
    pub width: u64,
    /// 1 < gcd(c, M₂) < M₂ with M₂ the 2-part of M.
    pub irregular: bool,
}

pub fn cusps_gamma0(m: u64) -> Vec<Cusp> {
    let m2 = 1u64 << m.trailing_zeros();
    divisors(m)
        .into_iter()
        .map(|c| {
            let g2 = gcd(c as i64, m2 as i64) as u64;
            Cusp {
                c,
                count: euler_phi(gcd(c as i64, (m / c) as i64) as u64),
                width: m / gcd((c * c) as i64, m as i64) as u64,
                irregular: 1 < g2 && g2 < m2,
            }
        })
        .collect()
}

/// ∏_{δ|M} η(δτ)^{r_δ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    pub level: u64,
    pub exponents: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    /// Level defaults to the lcm of the δ's.
    pub fn new(exponents: BTreeMap<u64, i64>, level: Option<u64>) -> Result<EtaQuotient> {
        let l = exponents.keys().fold(1u64, |a, &d| crate::arith::lcm(a, d));
        let level = level.unwrap_or(l);
        if exponents.keys().any(|&d| d == 0 || level % d != 0) {
            return Err(Error::InvalidInput(format!("every δ must divide the level {}", level)));
        }
        let exponents = exponents.into_iter().filter(|&(_, r)| r != 0).collect();
        Ok(EtaQuotient { level, exponents })
    }

    /// Weight ½Σr_δ.
    pub fn weight(&self) -> Rational {
        rat(self.exponents.values().sum::<i64>(), 2)
    }

    /// Order at ∞, Σ δ r_δ / 24.
    pub fn order_at_infinity(&self) -> Rational {
        rat(self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum::<i64>(), 24)
    }

    /// Order at the cusp 1/c in its local uniformizer:
    /// (M / gcd(c², M)) · (1/24) Σ gcd(c, δ)² r_δ / δ.
    pub fn order_at(&self, c: u64) -> Rational {
        let m = self.level as i64;
        let c = c as i64;
        let w = m / gcd(c * c, m);
        let s: Rational = self
            .exponents
            .iter()
            .map(|(&d, &r)| {
                let g = gcd(c, d as i64);
                rat(g * g * r, d as i64)
            })
            .sum();
        s * int(w) / int(24)
    }

    pub fn cusp_orders(&self) -> BTreeMap<u64, Rational> {
        divisors(self.level).into_iter().map(|c| (c, self.order_at(c))).collect()
    }

    /// Σ_c φ(gcd(c, M/c)) · ord_c and (k/12)[SL₂(ℤ):Γ₀(M)]; equal for every eta-quotient.
    pub fn valence_sides(&self) -> (Rational, Rational) {
        let lhs: Rational = cusps_gamma0(self.level)
            .iter()
            .map(|cu| self.order_at(cu.c) * int(cu.count as i64))
            .sum();
        let rhs = self.weight() * int(index_gamma0(self.level) as i64) / int(12);
        (lhs, rhs)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.cusp_orders().values().all(|o| *o >= Rational::zero())
    }

    /// Integral weight with Σδr_δ ≡ 0 and Σ(M/δ)r_δ ≡ 0 mod 24.
    pub fn is_valid(&self) -> bool {
        let w = self.weight();
        let a: i64 = self.exponents.iter().map(|(&d, &r)| d as i64 * r).sum();
        let b: i64 = self.exponents.iter().map(|(&d, &r)| (self.level / d) as i64 * r).sum();
        w.is_integer() && a % 24 == 0 && b % 24 == 0
    }

    /// The character n ↦ ((−1)^k ∏δ^{r_δ} / n) on Γ₀(M), when it is a Kronecker
    /// character of conductor dividing M.
    pub fn character(&self) -> Option<DirichletChar> {
        let w = self.weight();
        if !w.is_integer() {
            return None;
        }
        let k = w.to_integer().to_i64()?;
        let mut a: i64 = if k % 2 == 0 { 1 } else { -1 };
        for (&d, &r) in &self.exponents {
            if r.rem_euclid(2) == 1 {
                a *= d as i64;
            }
        }
        let sf = squarefree_part(a);
        let disc = if sf.rem_euclid(4) == 1 { sf } else { 4 * sf };
        if disc == 1 {
            return Some(DirichletChar::trivial(self.level));
        }
        if !is_fundamental(disc) || self.level % disc.unsigned_abs() != 0 {
            return None;
        }
        Some(DirichletChar { modulus: self.level, disc })
    }

    /// q-expansion with every coefficient below `prec` known.
    pub fn expansion(&self, prec: &Rational) -> QSeries {
        let lead = self.order_at_infinity();
        let span = prec - &lead;
        let len = if span <= Rational::zero() { 0 } else { ceil(&span).to_i64().unwrap() as usize };
        let mut acc = vec![BigInt::zero(); len];
        if len > 0 {
            acc[0] = BigInt::from(1);
        }
        let base = euler_product(len);
        for (&d, &r) in &self.exponents {
            let f = dense::dilate(&base, d as usize, len);
            acc = dense::mul_int(&acc, &dense::pow_int(&f, r, len), len);
        }
        let lambda = lead.denom().to_u64().unwrap();
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (&lead + int(i as i64), Rational::from_integer(c)));
        QSeries::from_terms(lambda, terms, Some(prec)).expect("eta-quotient exponents lie on the grid")
    }
}

fn squarefree_part(a: i64) -> i64 {
    let sign = if a < 0 { -1 } else { 1 };
    let mut out = 1i64;
    for (p, e) in crate::arith::factorize(a.unsigned_abs()) {
        if e % 2 == 1 {
            out *= p as i64;
        }
    }
    sign * out
}

/// η-quotient product/quotient expansion; same as `eq.expansion(prec)`.
pub fn eta_quotient_expansion(eq: &EtaQuotient, prec: &Rational) -> QSeries {
    eq.expansion(prec)
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parses "1^2 3^-2 4^1 6^2 12^1"; a bare "d" means exponent 1.
    fn from_str(s: &str) -> Result<EtaQuotient> {
        let mut ex = BTreeMap::new();
        for tok in s.split_whitespace() {
            let (d, r) = match tok.split_once('^') {
                Some((d, r)) => (d, r),
                None => (tok, "1"),
            };
            let d: u64 = d.parse().map_err(|_| Error::InvalidInput(format!("bad eta factor '{}'", tok)))?;
            let r: i64 = r.parse().map_err(|_| Error::InvalidInput(format!("bad eta exponent '{}'", tok)))?;
            *ex.entry(d).or_insert(0) += r;
        }
        if ex.is_empty() {
            return Err(Error::InvalidInput("empty eta-quotient".into()));
        }
        EtaQuotient::new(ex, None)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|(d, r)| format!("{}^{}", d, r)).collect();
        write!(f, "{}", parts.join(" "))
    }
}
