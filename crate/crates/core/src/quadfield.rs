//! Exact arithmetic in F = ℚ(√N₁), its inverse different and its dual lattice.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::arith::{is_squarefree, isqrt};
use crate::error::{Error, Result};
use crate::exact::{rat_to_string, Rational};

/// (u + v√N₁)/w in lowest terms with w > 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    u: BigInt,
    v: BigInt,
    w: BigInt,
    n1: u64,
}

impl QuadElem {
    pub fn new(u: impl Into<BigInt>, v: impl Into<BigInt>, w: impl Into<BigInt>, n1: u64) -> QuadElem {
        let (mut u, mut v, mut w) = (u.into(), v.into(), w.into());
        assert!(!w.is_zero(), "zero denominator");
        if w.is_negative() {
            u = -u;
            v = -v;
            w = -w;
        }
        let g = u.gcd(&v).gcd(&w);
        if !g.is_one() && !g.is_zero() {
            u /= &g;
            v /= &g;
            w /= &g;
        }
        QuadElem { u, v, w, n1 }
    }

    pub fn zero(n1: u64) -> QuadElem {
        QuadElem::new(0, 0, 1, n1)
    }

    pub fn one(n1: u64) -> QuadElem {
        QuadElem::new(1, 0, 1, n1)
    }

    pub fn from_rational(x: &Rational, n1: u64) -> QuadElem {
        QuadElem::new(x.numer().clone(), 0, x.denom().clone(), n1)
    }

    pub fn from_int(x: i64, n1: u64) -> QuadElem {
        QuadElem::new(x, 0, 1, n1)
    }

    /// √N₁.
    pub fn sqrt_n1(n1: u64) -> QuadElem {
        QuadElem::new(0, 1, 1, n1)
    }

    pub fn u(&self) -> &BigInt {
        &self.u
    }
    pub fn v(&self) -> &BigInt {
        &self.v
    }
    pub fn w(&self) -> &BigInt {
        &self.w
    }
    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem::new(self.u.clone(), -self.v.clone(), self.w.clone(), self.n1)
    }

    pub fn trace(&self) -> Rational {
        Rational::new(&self.u * 2, self.w.clone())
    }

    pub fn norm(&self) -> Rational {
        let n1 = BigInt::from(self.n1);
        Rational::new(&self.u * &self.u - &n1 * &self.v * &self.v, &self.w * &self.w)
    }

    /// Rational part u/w and irrational coefficient v/w.
    pub fn parts(&self) -> (Rational, Rational) {
        (
            Rational::new(self.u.clone(), self.w.clone()),
            Rational::new(self.v.clone(), self.w.clone()),
        )
    }

    /// Exact sign of u + v√N₁.
    pub fn signum(&self) -> i32 {
        let su = self.u.sign();
        let sv = self.v.sign();
        use num_bigint::Sign::*;
        match (su, sv) {
            (NoSign, NoSign) => 0,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => 1,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => -1,
            _ => {
                let uu = &self.u * &self.u;
                let vv = &self.v * &self.v * BigInt::from(self.n1);
                match uu.cmp(&vv) {
                    Ordering::Greater => if su == Plus { 1 } else { -1 },
                    Ordering::Less => if sv == Plus { 1 } else { -1 },
                    Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    /// Both real embeddings positive.
    pub fn is_totally_positive(&self) -> bool {
        self.signum() > 0 && self.conj().signum() > 0
    }

    pub fn recip(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero field element".into()));
        }
        let nm = self.norm();
        Ok(self.conj().scale(&nm.recip()))
    }

    pub fn scale(&self, c: &Rational) -> QuadElem {
        QuadElem::new(&self.u * c.numer(), &self.v * c.numer(), &self.w * c.denom(), self.n1)
    }

    pub fn pow(&self, e: i64) -> Result<QuadElem> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut r = QuadElem::one(self.n1);
        for _ in 0..e.unsigned_abs() {
            r = &r * &base;
        }
        Ok(r)
    }

    pub fn to_f64(&self) -> f64 {
        let u = self.u.to_f64().unwrap();
        let v = self.v.to_f64().unwrap();
        let w = self.w.to_f64().unwrap();
        (u + v * (self.n1 as f64).sqrt()) / w
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        let d = self - &QuadElem::from_rational(x, self.n1);
        d.signum().cmp(&0)
    }
}

impl Ord for QuadElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl PartialOrd for QuadElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.n1, o.n1);
        QuadElem::new(
            &self.u * &o.w + &o.u * &self.w,
            &self.v * &o.w + &o.v * &self.w,
            &self.w * &o.w,
            self.n1,
        )
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        self + &(-o)
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.n1, o.n1);
        let n1 = BigInt::from(self.n1);
        QuadElem::new(
            &self.u * &o.u + &n1 * &self.v * &o.v,
            &self.u * &o.v + &self.v * &o.u,
            &self.w * &o.w,
            self.n1,
        )
    }
}

impl<'a> Div<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn div(self, o: &QuadElem) -> QuadElem {
        self * &o.recip().expect("division by zero")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-self.u.clone(), -self.v.clone(), self.w.clone(), self.n1)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.parts();
        if b.is_zero() {
            return write!(f, "{}", rat_to_string(&a));
        }
        let mag = b.abs();
        let root = if mag.is_one() {
            format!("√{}", self.n1)
        } else if mag.is_integer() {
            format!("{}√{}", rat_to_string(&mag), self.n1)
        } else {
            format!("({})√{}", rat_to_string(&mag), self.n1)
        };
        match (a.is_zero(), b.is_negative()) {
            (true, false) => write!(f, "{}", root),
            (true, true) => write!(f, "-{}", root),
            (false, false) => write!(f, "{} + {}", rat_to_string(&a), root),
            (false, true) => write!(f, "{} - {}", rat_to_string(&a), root),
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn big_to_json<S: SerializeMap>(m: &mut S, k: &str, x: &BigInt) -> std::result::Result<(), S::Error> {
    match x.to_i64() {
        Some(i) => m.serialize_entry(k, &i),
        None => m.serialize_entry(k, &x.to_string()),
    }
}

impl Serialize for QuadElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        big_to_json(&mut m, "u", &self.u)?;
        big_to_json(&mut m, "v", &self.v)?;
        big_to_json(&mut m, "w", &self.w)?;
        m.serialize_entry("N1", &self.n1)?;
        m.end()
    }
}

/// The real quadratic field ℚ(√N₁) with discriminant N and fundamental unit ε₀.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadField {
    pub n1: u64,
    pub disc: u64,
    pub eps0: QuadElem,
    pub eps0_norm: i32,
}

impl QuadField {
    pub fn new(n1: u64) -> Result<QuadField> {
        let eps0 = fundamental_unit(n1)?;
        let eps0_norm = if eps0.norm() == Rational::one() { 1 } else { -1 };
        let disc = if n1 % 4 == 1 { n1 } else { 4 * n1 };
        Ok(QuadField { n1, disc, eps0, eps0_norm })
    }

    /// Field attached to a fundamental discriminant N > 1.
    pub fn from_disc(disc: u64) -> Result<QuadField> {
        if !crate::arith::is_fundamental(disc as i64) {
            return Err(Error::NotFundamental(disc as i64));
        }
        let n1 = if disc % 4 == 0 { disc / 4 } else { disc };
        QuadField::new(n1)
    }

    /// √N as a field element.
    pub fn sqrt_disc(&self) -> QuadElem {
        if self.disc == self.n1 {
            QuadElem::sqrt_n1(self.n1)
        } else {
            QuadElem::new(0, 2, 1, self.n1)
        }
    }

    /// ω with O_F = ℤ + ℤω.
    pub fn omega(&self) -> QuadElem {
        if self.n1 % 4 == 1 {
            QuadElem::new(1, 1, 2, self.n1)
        } else {
            QuadElem::sqrt_n1(self.n1)
        }
    }

    pub fn elem(&self, u: i64, v: i64, w: i64) -> QuadElem {
        QuadElem::new(u, v, w, self.n1)
    }

    /// The dual-lattice point a/2 + b/(2√N₁); for N₁ ≡ 1 mod 4 this lies in 𝔡⁻¹ iff a ≡ b mod 2.
    pub fn dual_point(&self, a: i64, b: i64) -> QuadElem {
        let n1 = self.n1 as i64;
        QuadElem::new(a * n1, b, 2 * n1, self.n1)
    }

    /// Inverse of `dual_point`: the coordinates (a, b) = (tr ν, √N₁(ν − ν′)).
    pub fn dual_coords(&self, x: &QuadElem) -> Option<(i64, i64)> {
        let a = x.trace();
        let (_, vb) = x.parts();
        let b = vb * Rational::from_integer(BigInt::from(2 * self.n1));
        if !a.is_integer() || !b.is_integer() {
            return None;
        }
        let (a, b) = (a.to_integer().to_i64()?, b.to_integer().to_i64()?);
        if self.n1 % 4 == 1 && (a - b).rem_euclid(2) != 0 {
            return None;
        }
        Some((a, b))
    }

    pub fn in_inverse_different(&self, x: &QuadElem) -> bool {
        let one = QuadElem::one(self.n1);
        let w = self.omega();
        (x * &one).trace().is_integer() && (x * &w).trace().is_integer()
    }

    pub fn in_integers(&self, x: &QuadElem) -> bool {
        x.trace().is_integer() && x.norm().is_integer()
    }

    /// N·ν·ν′ for ν = dual_point(a, b), an integer.
    pub fn scaled_norm(&self, a: i64, b: i64) -> i64 {
        let n1 = self.n1 as i64;
        let v = n1 * a * a - b * b;
        if self.n1 % 4 == 1 {
            v / 4
        } else {
            v
        }
    }
}

/// ε₀ from the continued fraction of ω: the first convergent p/q with
/// N(p − qω′) = ±1 gives the fundamental unit p − qω′.
pub fn fundamental_unit(n1: u64) -> Result<QuadElem> {
    if n1 < 2 || !is_squarefree(n1) {
        return Err(Error::InvalidInput(format!("N1={} must be squarefree and > 1", n1)));
    }
    let d = n1 as i128;
    let s = isqrt(n1) as i128;
    let (mut p_k, mut q_k) = if n1 % 4 == 1 { (1i128, 2i128) } else { (0i128, 1i128) };
    let (tr_w, nm_w) = if n1 % 4 == 1 { (1i128, (1 - d) / 4) } else { (0, -d) };
    let (mut h2, mut h1) = (0i128, 1i128);
    let (mut k2, mut k1) = (1i128, 0i128);
    for _ in 0..10_000 {
        let a = (p_k + s).div_euclid(q_k);
        let h = a * h1 + h2;
        let k = a * k1 + k2;
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        // N(h − kω) = h² − hk·tr(ω) + k²·N(ω)
        let nm = h * h - h * k * tr_w + k * k * nm_w;
        if nm == 1 || nm == -1 {
            // ε = h − kω′ with ω′ = tr(ω) − ω
            let eps = if n1 % 4 == 1 {
                QuadElem::new(BigInt::from(2 * h - k), BigInt::from(k), 2, n1)
            } else {
                QuadElem::new(BigInt::from(h), BigInt::from(k), 1, n1)
            };
            return Ok(eps);
        }
        let p_next = a * q_k - p_k;
        let q_next = (d - p_next * p_next) / q_k;
        p_k = p_next;
        q_k = q_next;
    }
    Err(Error::InvalidInput(format!("continued fraction for N1={} did not close", n1)))
}

/// The two ℤ-generators of 𝔡⁻¹.
pub fn inv_different_basis(k: &QuadField) -> (QuadElem, QuadElem) {
    let inv_sqrt = QuadElem::new(0, 1, k.n1 as i64, k.n1);
    if k.n1 % 4 == 1 {
        (inv_sqrt.clone(), &k.omega() * &inv_sqrt)
    } else {
        (QuadElem::new(1, 0, 2, k.n1), QuadElem::new(0, 1, 2 * k.n1 as i64, k.n1))
    }
}

/// ν ∈ 𝔡⁻¹ with N·ν·ν′ ≥ norm_min and 0 < ν·y₁ + ν′·y₂ ≤ grade_bound, sorted by grade then (u, v).
///
/// Box: put x = ν·y₁ and y = ν′·y₂, so 0 < x + y ≤ B and x·y ≥ −M with
/// M = max(0, −norm_min/N)·y₁y₂. If x and y have the same sign both lie in (0, B].
/// If x > 0 > y then |y| ≤ M/x and x ≤ B + |y| ≤ B + M/x, so x² ≤ Bx + M and
/// x ≤ X := (B + √(B² + 4M))/2, with |y| < x; the case x < 0 < y is symmetric.
/// Hence |ν| ≤ X/y₁ and |ν′| ≤ X/y₂, which bounds a = ν + ν′ and b = √N₁(ν − ν′).
/// The float box is padded; membership is decided exactly.
pub fn enumerate_dual(
    k: &QuadField,
    norm_min: &Rational,
    grade_bound: &Rational,
    interior: (&QuadElem, &QuadElem),
) -> Result<Vec<QuadElem>> {
    Ok(enumerate_dual_coords(k, norm_min, grade_bound, interior)?
        .into_iter()
        .map(|(a, b)| k.dual_point(a, b))
        .collect())
}

/// Same as `enumerate_dual` but returning the (a, b) coordinates of `dual_point`.
pub fn enumerate_dual_coords(
    k: &QuadField,
    norm_min: &Rational,
    grade_bound: &Rational,
    interior: (&QuadElem, &QuadElem),
) -> Result<Vec<(i64, i64)>> {
    if grade_bound <= &Rational::zero() {
        return Err(Error::InvalidInput("grade bound must be positive".into()));
    }
    let (y1, y2) = interior;
    if !y1.is_positive() || !y2.is_positive() {
        return Err(Error::InvalidInput("interior point must have positive coordinates".into()));
    }
    let bf = crate::exact::to_f64(grade_bound);
    let nm = crate::exact::to_f64(norm_min);
    let (y1f, y2f) = (y1.to_f64(), y2.to_f64());
    let m = (-nm / k.disc as f64).max(0.0) * y1f * y2f;
    let x = (bf + (bf * bf + 4.0 * m).sqrt()) / 2.0;
    let span = x / y1f + x / y2f;
    let amax = span.ceil() as i64 + 2;
    let bmax = (span * (k.n1 as f64).sqrt()).ceil() as i64 + 2;
    let t1 = y1.scale(&Rational::new(1.into(), 2.into()));
    let t1 = &t1 + &y2.scale(&Rational::new(1.into(), 2.into()));
    // grade of dual_point(a, b) is a·(y₁+y₂)/2 + b·(y₁−y₂)/(2√N₁)
    let t2 = &(y1 - y2) / &QuadElem::new(0, 2, 1, k.n1);
    let mut out = Vec::new();
    for a in -amax..=amax {
        for b in -bmax..=bmax {
            if k.n1 % 4 == 1 && (a - b).rem_euclid(2) != 0 {
                continue;
            }
            if (a == 0 && b == 0) || Rational::from_integer(k.scaled_norm(a, b).into()) < *norm_min {
                continue;
            }
            let t = &t1.scale(&Rational::from_integer(a.into())) + &t2.scale(&Rational::from_integer(b.into()));
            if t.signum() <= 0 || t.cmp_rational(grade_bound) == Ordering::Greater {
                continue;
            }
            out.push((t, a, b));
        }
    }
    out.sort_by(|x, y| {
        x.0.cmp(&y.0).then_with(|| {
            let px = k.dual_point(x.1, x.2);
            let py = k.dual_point(y.1, y.2);
            px.parts().cmp(&py.parts())
        })
    });
    Ok(out.into_iter().map(|(_, a, b)| (a, b)).collect())
}

/// {N·q(γ) mod N : γ ∈ 𝔡⁻¹/O_F}.
pub fn norm_values_mod(k: &QuadField) -> BTreeSet<u64> {
    let n = k.disc as i64;
    let n1 = k.n1 as i64;
    let mut out = BTreeSet::new();
    if k.n1 % 4 == 1 {
        for j in 0..n1 {
            out.insert((-j * j).rem_euclid(n) as u64);
        }
    } else {
        for a in 0..2 {
            for b in 0..2 * n1 {
                out.insert((n1 * a * a - b * b).rem_euclid(n) as u64);
            }
        }
    }
    out
}
