//! Integrality of f_1 through an eta-quotient multiplier and Sturm's bound on Γ₁(N).

use num_bigint::BigInt;
use serde::Serialize;

use super::{Level, WHForm};
use crate::characters::{index_gamma1, integrality_check, sturm_bound, IntegralityReport};
use crate::error::{Error, Result};
use crate::eta::EtaQuotient;
use crate::exact::{int, rat, rat_to_string, Rational};

/// The multiplier and the shift of f_1 used at each level.
pub fn multiplier(n: u64) -> Option<(&'static str, Rational)> {
    match n {
        12 => Some(("1^2 3^-2 4^1 6^2 12^1", Rational::from_integer(0.into()))),
        8 => Some(("1^-2 2^3 4^1 8^2", Rational::from_integer(0.into()))),
        21 => Some(("1^12 3^-3 7^3", rat(1, 2))),
        17 => Some(("1^7 17^1", rat(1, 2))),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SturmReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub quotient: String,
    /// The constant subtracted from f_1 before multiplying.
    pub shift: String,
    pub weight: i64,
    pub index_gamma1: u64,
    pub check: IntegralityReport,
    /// Largest exponent for which s(n)a(n) was checked on f_1.
    pub checked_to: i64,
    /// s(n)a(n) ∈ ℤ for every computed coefficient of f_1.
    pub s_weighted_integral: bool,
}

impl SturmReport {
    pub fn passed(&self) -> bool {
        self.check.integral_forever && self.s_weighted_integral
    }
}

/// Multiplies f_1 (less the shift) by the level's eta-quotient and checks integrality
/// up to the Sturm bound; then checks s(n)a(n) ∈ ℤ on every coefficient of f_1.
pub fn integrality_report(f1: &WHForm) -> Result<SturmReport> {
    let n = f1.n;
    if f1.m != 1 {
        return Err(Error::InvalidInput("the integrality check applies to f_1".into()));
    }
    let (quot, shift) = multiplier(n).ok_or_else(|| Error::Unsupported(format!("no eta multiplier for N={}", n)))?;
    let eq: EtaQuotient = quot.parse()?;
    if !eq.is_holomorphic() {
        return Err(Error::Verification(format!("{} is not holomorphic", quot)));
    }
    let w = eq.weight();
    if !w.is_integer() {
        return Err(Error::Verification(format!("{} has weight {}", quot, rat_to_string(&w))));
    }
    let weight: i64 = w.to_integer().try_into().unwrap();
    let idx = index_gamma1(n);
    let bound = sturm_bound(idx, weight as u64);
    let p = f1.prec();
    let eta = eq.expansion(&int(p + 1));
    let g = &(&f1.coeffs - &crate::qseries::QSeries::monomial(&int(0), shift.clone())) * &eta;
    let check = integrality_check(&g, bound)?;
    let lv = Level::new(n)?;
    let s_ok = f1
        .table()
        .iter()
        .all(|(e, c)| (c * Rational::from_integer(BigInt::from(lv.s(*e)))).is_integer());
    Ok(SturmReport {
        n,
        quotient: quot.to_string(),
        shift: rat_to_string(&shift),
        weight,
        index_gamma1: idx,
        check,
        checked_to: p - 1,
        s_weighted_integral: s_ok,
    })
}
