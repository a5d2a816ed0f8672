//! The Eisenstein series E^{ε*} and the constant-term duality a(0) = −B(m)/s(0).

use num_traits::{One, Zero};
use serde::Serialize;

use super::linalg::{nullspace_rational, solve_rational_unique};
use super::pool::{eisenstein_specs, product_is};
use super::{Level, WHForm};
use crate::characters::eisenstein::eisenstein_dense;
use crate::error::{Error, Result};
use crate::exact::{int, rat_to_string, Rational};
use crate::qseries::QSeries;

/// E^{ε*} ∈ M_2(Γ₀(N), χ_D): the combination of weight-2 Eisenstein series with
/// constant term 1 whose coefficients satisfy the ε*-condition, below `len`.
pub fn e_eps_star(n: u64, len: usize) -> Result<QSeries> {
    let lv = Level::new(n)?;
    let specs: Vec<_> = eisenstein_specs(n, 2)
        .into_iter()
        .filter(|e| product_is(&[e.psi, e.phi], &lv.chi, n))
        .collect();
    let cols: Vec<Vec<Rational>> = specs.iter().map(|e| eisenstein_dense(&e.psi, &e.phi, 2, e.t, len)).collect();
    let k = cols.len();
    let mut rows = vec![(0..k).map(|i| cols[i][0].clone()).collect::<Vec<_>>()];
    let mut rhs = vec![Rational::one()];
    for j in 1..len {
        if !lv.eps_star_ok(j as i64) {
            rows.push((0..k).map(|i| cols[i][j].clone()).collect());
            rhs.push(Rational::zero());
        }
    }
    let x = solve_rational_unique(&rows, &rhs).ok_or_else(|| {
        if nullspace_rational(&rows, k).is_empty() {
            Error::NoSolution(format!("no Eisenstein series of level {} satisfies the ε*-condition", n))
        } else {
            Error::Ambiguous(format!("E^ε* is not determined at level {} below q^{}", n, len))
        }
    })?;
    let coeffs: Vec<Rational> = (0..len).map(|j| (0..k).map(|i| &x[i] * &cols[i][j]).sum()).collect();
    Ok(QSeries::from_dense(0, &coeffs, Some(len as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub m: u64,
    pub a0: String,
    pub b_m: String,
    pub predicted_a0: String,
    pub weight: String,
}

/// s(0)a(0)/2, the weight of the lift of f.
pub fn lift_weight(f: &WHForm) -> Rational {
    let s0 = int(Level::new(f.n).map(|l| l.s(0)).unwrap_or(1) as i64);
    s0 * f.coeff(0).unwrap_or_default() / int(2)
}

/// −½ Σ_{n<0} s(n)a(n)B(−n), the weight read off from the pairing with E^{ε*}.
pub fn duality_weight(f: &WHForm) -> Result<Rational> {
    let lv = Level::new(f.n)?;
    let e = e_eps_star(f.n, (f.m as usize + 1).max(100))?;
    let mut w = Rational::zero();
    for (n, c) in f.table().into_iter().filter(|(n, _)| *n < 0) {
        w += c * int(lv.s(n) as i64) * e.coeff_int(-n).unwrap_or_default();
    }
    Ok(-w / int(2))
}

/// Checks a(0) = −B(m)/s(0) for a single-pole f_m; a mismatch is an error.
pub fn constant_duality_check(f: &WHForm) -> Result<DualityReport> {
    let lv = Level::new(f.n)?;
    let e = e_eps_star(f.n, (f.m as usize + 1).max(100))?;
    let b = e.coeff_int(f.m as i64).unwrap_or_default();
    let s0 = int(lv.s(0) as i64);
    let predicted = -&b / &s0;
    let a0 = f.coeff(0).unwrap_or_default();
    if a0 != predicted {
        return Err(Error::Verification(format!(
            "a(0) of f_{} is {} but −B({})/s(0) = {}",
            f.m,
            rat_to_string(&a0),
            f.m,
            rat_to_string(&predicted)
        )));
    }
    Ok(DualityReport {
        n: f.n,
        m: f.m,
        a0: rat_to_string(&a0),
        b_m: rat_to_string(&b),
        predicted_a0: rat_to_string(&predicted),
        weight: rat_to_string(&lift_weight(f)),
    })
}
