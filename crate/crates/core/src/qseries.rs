//! Truncated Laurent series in q^(1/λ) with exact rational coefficients.
//!
//! A series stores its coefficients sparsely, keyed by the integer `k`
//! of the exponent `k/λ`. The truncation order `prec` is either `None`
//! (the series is exact, e.g. a polynomial) or the exponent from which
//! on coefficients are unknown.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_to_string, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    lambda: u64,
    coeffs: BTreeMap<i64, Rational>,
    prec: Option<i64>,
}

fn grid_index(e: &Rational, lambda: u64) -> Option<i64> {
    let scaled = e * Rational::from_integer(BigInt::from(lambda));
    if scaled.is_integer() {
        num_traits::ToPrimitive::to_i64(&scaled.to_integer())
    } else {
        None
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl QSeries {
    /// The zero series on grid 1/λ, known below `prec`.
    pub fn zero(lambda: u64, prec: Option<&Rational>) -> QSeries {
        assert!(lambda > 0);
        QSeries {
            lambda,
            coeffs: BTreeMap::new(),
            prec: prec.map(|p| {
                let s = p * Rational::from_integer(BigInt::from(lambda));
                num_traits::ToPrimitive::to_i64(&s.ceil().to_integer()).expect("precision too large")
            }),
        }
    }

    pub fn one() -> QSeries {
        QSeries::monomial(&Rational::zero(), Rational::one())
    }

    /// Exact monomial c·q^e; the grid is the denominator of `e`.
    pub fn monomial(e: &Rational, c: Rational) -> QSeries {
        let lambda = num_traits::ToPrimitive::to_u64(e.denom()).expect("grid too large");
        let mut s = QSeries::zero(lambda, None);
        s.set(e, c);
        s
    }

    /// Series on the integer grid from a dense coefficient list starting at `start`.
    pub fn from_dense(start: i64, coeffs: &[Rational], prec: Option<i64>) -> QSeries {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            let k = start + i as i64;
            if prec.is_some_and(|p| k >= p) {
                break;
            }
            if !c.is_zero() {
                map.insert(k, c.clone());
            }
        }
        QSeries { lambda: 1, coeffs: map, prec }
    }

    /// Build from (exponent, coefficient) pairs on grid 1/λ.
    pub fn from_terms<I>(lambda: u64, terms: I, prec: Option<&Rational>) -> Result<QSeries>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut s = QSeries::zero(lambda, prec);
        for (e, c) in terms {
            let k = grid_index(&e, lambda)
                .ok_or_else(|| Error::InvalidInput(format!("exponent {} not on grid 1/{}", e, lambda)))?;
            if s.prec.is_some_and(|p| k >= p) {
                continue;
            }
            let entry = s.coeffs.entry(k).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                s.coeffs.remove(&k);
            }
        }
        Ok(s)
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn prec(&self) -> Option<Rational> {
        self.prec.map(|p| Rational::new(BigInt::from(p), BigInt::from(self.lambda)))
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// True if no coefficient is stored (the series is O(q^prec) or exactly 0).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn exp_of(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k), BigInt::from(self.lambda))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.coeffs.keys().next().map(|&k| self.exp_of(k))
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next()
    }

    /// Coefficient at `e`; `None` when `e` lies at or beyond the truncation.
    pub fn coeff(&self, e: &Rational) -> Option<Rational> {
        let scaled = e * Rational::from_integer(BigInt::from(self.lambda));
        if let Some(p) = self.prec {
            if scaled >= Rational::from_integer(BigInt::from(p)) {
                return None;
            }
        }
        match grid_index(e, self.lambda) {
            None => Some(Rational::zero()),
            Some(k) => Some(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    /// Coefficient at the integer exponent `n`.
    pub fn coeff_int(&self, n: i64) -> Option<Rational> {
        self.coeff(&Rational::from_integer(BigInt::from(n)))
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        self.coeffs.iter().map(move |(&k, c)| (self.exp_of(k), c))
    }

    /// Nonzero terms keyed by the grid index k (exponent k/λ).
    pub fn raw_terms(&self) -> &BTreeMap<i64, Rational> {
        &self.coeffs
    }

    pub fn raw_prec(&self) -> Option<i64> {
        self.prec
    }

    fn set(&mut self, e: &Rational, c: Rational) {
        let k = grid_index(e, self.lambda).expect("exponent off grid");
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Re-express on the finer grid 1/L where λ | L.
    pub fn regrid(&self, l: u64) -> QSeries {
        assert!(l % self.lambda == 0, "target grid must refine the current one");
        let f = (l / self.lambda) as i64;
        QSeries {
            lambda: l,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * f, c.clone())).collect(),
            prec: self.prec.map(|p| p * f),
        }
    }

    /// The coarsest grid on which all stored exponents and the truncation lie.
    pub fn coarsen(&self) -> QSeries {
        let mut g = self.lambda as i64;
        for &k in self.coeffs.keys() {
            g = g.gcd(&k);
        }
        if let Some(p) = self.prec {
            g = g.gcd(&p);
        }
        let g = g.max(1);
        QSeries {
            lambda: self.lambda / g as u64,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k / g, c.clone())).collect(),
            prec: self.prec.map(|p| p / g),
        }
    }

    /// True if every stored exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        let l = self.lambda as i64;
        self.coeffs.keys().all(|k| k % l == 0)
    }

    /// Drop every term with exponent ≥ `p` and lower the truncation accordingly.
    pub fn truncate(&self, p: &Rational) -> QSeries {
        let s = p * Rational::from_integer(BigInt::from(self.lambda));
        let kp = num_traits::ToPrimitive::to_i64(&s.ceil().to_integer()).expect("precision too large");
        let kp = match self.prec {
            Some(q) => q.min(kp),
            None => kp,
        };
        QSeries {
            lambda: self.lambda,
            coeffs: self.coeffs.range(..kp).map(|(&k, c)| (k, c.clone())).collect(),
            prec: Some(kp),
        }
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        if c.is_zero() {
            return QSeries { lambda: self.lambda, coeffs: BTreeMap::new(), prec: self.prec };
        }
        QSeries {
            lambda: self.lambda,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by q^e.
    pub fn shift(&self, e: &Rational) -> QSeries {
        let l = lcm_u(self.lambda, e.denom());
        let s = self.regrid(l);
        let d = grid_index(e, l).unwrap();
        QSeries {
            lambda: l,
            coeffs: s.coeffs.into_iter().map(|(k, c)| (k + d, c)).collect(),
            prec: s.prec.map(|p| p + d),
        }
    }

    /// Substitute q ↦ q^d for a positive integer d.
    pub fn dilate(&self, d: u64) -> QSeries {
        let di = d as i64;
        QSeries {
            lambda: self.lambda,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * di, c.clone())).collect(),
            prec: self.prec.map(|p| p * di),
        }
    }

    fn align(a: &QSeries, b: &QSeries) -> (QSeries, QSeries) {
        let l = crate::arith::lcm(a.lambda, b.lambda);
        (a.regrid(l), b.regrid(l))
    }

    pub fn add_series(&self, other: &QSeries) -> QSeries {
        let (a, b) = QSeries::align(self, other);
        let prec = min_opt(a.prec, b.prec);
        let mut coeffs = BTreeMap::new();
        for (&k, c) in a.coeffs.iter().chain(b.coeffs.iter()) {
            if prec.is_some_and(|p| k >= p) {
                continue;
            }
            let e = coeffs.entry(k).or_insert_with(Rational::zero);
            *e += c;
        }
        coeffs.retain(|_, c: &mut Rational| !c.is_zero());
        QSeries { lambda: a.lambda, coeffs, prec }
    }

    pub fn neg_series(&self) -> QSeries {
        QSeries {
            lambda: self.lambda,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub_series(&self, other: &QSeries) -> QSeries {
        self.add_series(&other.neg_series())
    }

    /// qs_mul: the product is known below min(prec_a + val_b, prec_b + val_a).
    pub fn mul_series(&self, other: &QSeries) -> QSeries {
        let (a, b) = QSeries::align(self, other);
        // a vanishing series is worth O(q^prec), an exact zero is worth nothing
        let va = a.coeffs.keys().next().copied().or(a.prec);
        let vb = b.coeffs.keys().next().copied().or(b.prec);
        let prec = match (va, vb) {
            (None, _) | (_, None) => {
                if (a.coeffs.is_empty() && a.prec.is_none()) || (b.coeffs.is_empty() && b.prec.is_none()) {
                    None
                } else {
                    unreachable!()
                }
            }
            (Some(va), Some(vb)) => min_opt(a.prec.map(|p| p + vb), b.prec.map(|p| p + va)),
        };
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&i, x) in &a.coeffs {
            for (&j, y) in &b.coeffs {
                let k = i + j;
                if prec.is_some_and(|p| k >= p) {
                    break;
                }
                *coeffs.entry(k).or_insert_with(Rational::zero) += x * y;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        QSeries { lambda: a.lambda, coeffs, prec }
    }

    /// qs_inv: relative precision is preserved, so prec = prec_a − 2·val_a.
    pub fn inv(&self) -> Result<QSeries> {
        let (&v, lead) = self
            .coeffs
            .iter()
            .next()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let lead_inv = lead.recip();
        if self.coeffs.len() == 1 {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(-v, lead_inv);
            return Ok(QSeries { lambda: self.lambda, coeffs, prec: self.prec.map(|p| p - 2 * v) });
        }
        let p = self.prec.ok_or_else(|| {
            Error::NotInvertible("exact series with more than one term needs a truncation".into())
        })?;
        let rel = (p - v) as usize;
        // u = a / (lead q^v) = 1 + ..., solve u·w = 1 term by term
        let mut u = vec![Rational::zero(); rel];
        for (&k, c) in &self.coeffs {
            u[(k - v) as usize] = c * &lead_inv;
        }
        let mut w = vec![Rational::zero(); rel];
        w[0] = Rational::one();
        for n in 1..rel {
            let mut s = Rational::zero();
            for i in 1..=n {
                if !u[i].is_zero() && !w[n - i].is_zero() {
                    s += &u[i] * &w[n - i];
                }
            }
            w[n] = -s;
        }
        let mut coeffs = BTreeMap::new();
        for (i, c) in w.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(i as i64 - v, c * &lead_inv);
            }
        }
        Ok(QSeries { lambda: self.lambda, coeffs, prec: Some(p - 2 * v) })
    }

    /// qs_pow by repeated squaring; negative powers go through `inv`.
    pub fn pow(&self, e: i64) -> Result<QSeries> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut result = QSeries::one().regrid(self.lambda);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_series(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul_series(&sq);
            }
        }
        Ok(result)
    }

    /// Sub-series of the terms with integer exponent n satisfying `keep(n)`.
    pub fn filter_int(&self, keep: impl Fn(i64) -> bool) -> QSeries {
        let l = self.lambda as i64;
        QSeries {
            lambda: self.lambda,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k % l == 0 && keep(k / l))
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            prec: self.prec,
        }
    }

    /// Coefficients at integer exponents lo..hi (exclusive) as a dense vector.
    pub fn dense_int(&self, lo: i64, hi: i64) -> Result<Vec<Rational>> {
        if let Some(p) = self.prec {
            if hi * self.lambda as i64 > p {
                return Err(Error::InsufficientPrecision {
                    needed: hi.to_string(),
                    have: rat_to_string(&self.prec().unwrap()),
                });
            }
        }
        Ok((lo..hi).map(|n| self.coeff_int(n).unwrap()).collect())
    }
}

fn lcm_u(a: u64, d: &BigInt) -> u64 {
    let d = num_traits::ToPrimitive::to_u64(d).expect("grid too large");
    crate::arith::lcm(a, d)
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})q^({})", rat_to_string(c), rat_to_string(&e))?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(p) = self.prec() {
            write!(f, " + O(q^({}))", rat_to_string(&p))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, o: &QSeries) -> QSeries {
        self.add_series(o)
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, o: &QSeries) -> QSeries {
        self.sub_series(o)
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, o: &QSeries) -> QSeries {
        self.mul_series(o)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.neg_series()
    }
}

pub fn qs_mul(a: &QSeries, b: &QSeries) -> QSeries {
    a.mul_series(b)
}

pub fn qs_inv(a: &QSeries) -> Result<QSeries> {
    a.inv()
}

pub fn qs_pow(a: &QSeries, e: i64) -> Result<QSeries> {
    a.pow(e)
}
