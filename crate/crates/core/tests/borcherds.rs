use std::collections::HashMap;

use hkm::borcherds::*;
use hkm::exact::{int, Rational};
use hkm::kacmoody::{cartan_for_disc, simple_data};
use hkm::quadfield::{QuadElem, QuadField};
use hkm::solver::{duality_weight, lift_weight, solve_fm};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn q(u: i64, v: i64, w: i64, n1: u64) -> QuadElem {
    QuadElem::new(u, v, w, n1)
}

#[test]
fn weyl_vectors_match_the_closed_form() {
    for n in [5u64, 8, 12, 13, 21] {
        let f = solve_fm(n, 1, 40).unwrap();
        let w = WeylChamber::containing_interior(&f).unwrap();
        let rho = weyl_vector(&f, &w).unwrap();
        assert_eq!(rho, weyl_vector_closed_form(&w.field), "N={}", n);
        assert_eq!(rho, simple_data(&cartan_for_disc(n).unwrap()).rho, "N={}", n);
    }
    let k8 = QuadField::from_disc(8).unwrap();
    let k12 = QuadField::from_disc(12).unwrap();
    // (1 + √2)/(4√2) and (3 + √3)/12
    assert_eq!(weyl_vector_closed_form(&k8), &q(1, 1, 1, 2) / &q(0, 4, 1, 2));
    assert_eq!(weyl_vector_closed_form(&k12), q(3, 1, 12, 3));
}

#[test]
fn interior_point_is_off_the_walls_of_f1() {
    for n in [8u64, 12, 21] {
        let f = solve_fm(n, 1, 30).unwrap();
        let w = WeylChamber::containing_interior(&f).unwrap();
        for l in &w.walls[&1] {
            assert!(!grade(&w.field, l).is_zero());
            assert_eq!(l.norm() * int(n as i64), int(-1));
        }
    }
}

#[test]
fn f6_at_twelve_has_a_wall_through_the_interior_point() {
    // λ = (1 + √3)/2 has 12λλ′ = −6 and λ + (2 + √3)λ′ = 0
    let f = solve_fm(12, 6, 30).unwrap();
    assert!(matches!(WeylChamber::containing_interior(&f), Err(hkm::Error::OnWall(_))));
    let k = QuadField::from_disc(12).unwrap();
    assert!(grade(&k, &q(1, 1, 2, 3)).is_zero());
}

#[test]
fn weights_of_the_lifts() {
    for (m, w) in [(1u64, 2i64), (4, 5), (6, 6), (9, 10), (10, 4), (12, 3)] {
        let f = solve_fm(12, m, 30).unwrap();
        assert_eq!(lift_weight(&f), int(w), "m={}", m);
        assert_eq!(duality_weight(&f).unwrap(), int(w), "m={}", m);
    }
}

/// Multiplies out e(ρ)∏(1 − e(ν))^c factor by factor, truncating at the grade bound.
fn direct_product(k: &QuadField, rho: &QuadElem, factors: &[Factor], bound: &Rational) -> HashMap<(i64, i64), BigInt> {
    let room = &QuadElem::from_rational(bound, k.n1) - &grade(k, rho);
    let ok = |c: (i64, i64)| grade(k, &k.dual_point(c.0, c.1)) <= room;
    let mut p: HashMap<(i64, i64), BigInt> = HashMap::from([((0, 0), BigInt::one())]);
    for f in factors {
        if !ok(f.coords) {
            continue;
        }
        let c: i64 = f.exponent.clone().try_into().unwrap();
        for _ in 0..c.abs() {
            // (1 − x) or 1/(1 − x) = Σ x^j
            let mut next: HashMap<(i64, i64), BigInt> = HashMap::new();
            for (key, v) in &p {
                let mut j = 0i64;
                loop {
                    let kk = (key.0 + j * f.coords.0, key.1 + j * f.coords.1);
                    if !ok(kk) {
                        break;
                    }
                    let sign = if c > 0 { if j == 0 { 1 } else { -1 } } else { 1 };
                    *next.entry(kk).or_default() += v * sign;
                    j += 1;
                    if c > 0 && j > 1 {
                        break;
                    }
                }
            }
            p = next;
        }
    }
    p.retain(|_, v| !v.is_zero());
    p
}

#[test]
fn log_exp_expansion_agrees_with_direct_multiplication() {
    for (n, b) in [(12u64, 4i64), (8, 5), (5, 4), (21, 4)] {
        let f = solve_fm(n, 1, 80).unwrap();
        let bound = int(b);
        let psi = expand_psi(&f, &bound).unwrap();
        let oracle = direct_product(&psi.field, &psi.weyl_vector, &psi.factors, &bound);
        let got: HashMap<(i64, i64), BigInt> = psi.terms.iter().map(|t| (t.offset, t.coeff.clone())).collect();
        assert_eq!(got, oracle, "N={}", n);
        assert_eq!(psi.coeff(&psi.weyl_vector), Some(BigInt::one()));
    }
}

#[test]
fn product_invariants() {
    let f = solve_fm(12, 1, 100).unwrap();
    let bound = int(6);
    let psi = expand_psi(&f, &bound).unwrap();
    let k = &psi.field;
    assert_eq!(psi.terms[0].mu, psi.weyl_vector);
    assert_eq!(psi.terms[0].coeff, BigInt::one());
    for t in &psi.terms {
        assert!(k.in_inverse_different(&(&t.mu - &psi.weyl_vector)));
        assert!(grade(k, &t.mu).cmp_rational(&bound) != std::cmp::Ordering::Greater);
    }
    for w in psi.terms.windows(2) {
        assert!(grade(k, &w[0].mu) <= grade(k, &w[1].mu));
    }
    for fac in &psi.factors {
        if fac.norm < 0 {
            assert_eq!(fac.norm, -1);
            assert_eq!(fac.exponent, BigInt::one());
        }
    }
    assert_eq!(psi.negative_norms().into_iter().collect::<Vec<_>>(), vec![-1]);
}

#[test]
fn product_needs_enough_coefficients() {
    let f = solve_fm(12, 1, 5).unwrap();
    assert!(matches!(expand_psi(&f, &int(6)), Err(hkm::Error::InsufficientPrecision { .. })));
}

#[test]
fn phi_flip_round_trips() {
    let f = solve_fm(8, 1, 100).unwrap();
    let psi = expand_psi(&f, &int(6)).unwrap();
    let phi = to_phi(&psi);
    assert_eq!(phi.terms[0].mu, psi.weyl_vector);
    let back = from_phi(&phi);
    assert_eq!(back.terms, psi.terms);
    assert_eq!(back.weyl_vector, psi.weyl_vector);
    let p = (q(1, 2, 3, 2), q(-1, 1, 4, 2));
    assert_eq!(swap_conj(&swap_conj(&p)), p);

    let k = &psi.field;
    let nn = int(8);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let t = &phi.terms[rng.gen_range(0..phi.terms.len())];
        assert_eq!(phi_grade(k, &t.z_exponent), grade(k, &t.mu).scale(&nn));
    }
}

#[test]
fn antisymmetry_and_sum_side() {
    for n in [12u64, 8, 5] {
        let f = solve_fm(n, 1, 200).unwrap();
        let cd = cartan_for_disc(n).unwrap();
        let w = WeylChamber::containing_interior(&f).unwrap();
        let rho = weyl_vector(&f, &w).unwrap();
        let b = default_grade_bound(&w.field, &cd, &rho).unwrap();
        let psi = expand_psi(&f, &b).unwrap();
        let phi = to_phi(&psi);
        let rep = check_antisymmetry(&phi, &cd, 2);
        assert!(rep.passed, "N={}: {:?}", n, rep.failures);
        assert!(rep.compared > 0);
        let ss = sum_side_check(&phi, &cd).unwrap();
        assert!(ss.passed, "N={}: {:?}", n, ss.mismatches);
        for r in extract_simple_data(&phi, &cd) {
            assert_eq!(r.parity == "even", r.m > BigInt::zero());
        }
        let bad = to_phi(&mutate_lowest_positive(&psi).unwrap());
        assert!(!check_antisymmetry(&bad, &cd, 2).passed, "mutation at N={} went unnoticed", n);
    }
}

#[test]
fn r2_conjugates_labels() {
    let f = solve_fm(12, 1, 100).unwrap();
    let cd = cartan_for_disc(12).unwrap();
    let phi = to_phi(&expand_psi(&f, &int(6)).unwrap());
    let mut seen = 0;
    for t in &phi.terms {
        if phi.in_range(&t.mu.conj()) {
            assert_eq!(phi.coeff(&t.mu.conj()), Some(-&t.coeff));
            seen += 1;
        }
    }
    assert!(seen > 0);
    assert!(check_antisymmetry(&phi, &cd, 0).passed);
}

#[test]
fn default_bound_covers_three_images() {
    for n in [8u64, 12] {
        let cd = cartan_for_disc(n).unwrap();
        let k = &cd.field;
        let rho = weyl_vector_closed_form(k);
        let b = default_grade_bound(k, &cd, &rho).unwrap();
        assert!(b >= int(5));
        let mut inside = 0;
        for i in -4..=4 {
            for flip in [false, true] {
                if i == 0 && !flip {
                    continue;
                }
                let (nu, _) = hkm::kacmoody::weyl_orbit_elem(&cd, i, flip, &rho).unwrap();
                if grade(k, &nu).cmp_rational(&b) != std::cmp::Ordering::Greater {
                    inside += 1;
                }
            }
        }
        assert!(inside >= 3, "N={}", n);
    }
}

/// Expands ∏(1 − tⁿ)^{μ(n)} directly to order len.
fn product_series(mu: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len + 1];
    p[0] = BigInt::one();
    for (i, e) in mu.iter().enumerate() {
        let n = i + 1;
        let e: i64 = e.clone().try_into().unwrap();
        // binomial series (1 − x)^e = Σ C(e, j)(−x)^j with generalized C(e, j)
        let mut coeffs = vec![Rational::one()];
        for j in 1..=len / n {
            let prev = coeffs[j - 1].clone();
            coeffs.push(-prev * int(e - j as i64 + 1) / int(j as i64));
        }
        let mut next = vec![BigInt::zero(); len + 1];
        for (a, pa) in p.iter().enumerate() {
            for (j, c) in coeffs.iter().enumerate() {
                if a + j * n > len {
                    break;
                }
                next[a + j * n] += pa * c.to_integer();
            }
        }
        p = next;
    }
    p
}

#[test]
fn mu_along_isotropic_direction() {
    assert!(mu_along_isotropic(&vec![BigInt::zero(); 5]).iter().all(|x| x.is_zero()));
    for c in -3i64..=3 {
        let m = vec![BigInt::from(c), BigInt::zero(), BigInt::zero()];
        let mu = mu_along_isotropic(&m);
        assert_eq!(mu[0], BigInt::from(c));
        assert_eq!(mu[1], BigInt::from((c * c - c) / 2));
        let lhs: Vec<BigInt> = (0..=3).map(|k| if k == 0 { BigInt::one() } else { -&m[k - 1] }).collect();
        assert_eq!(product_series(&mu, 3), lhs);
    }
    let mu = mu_along_isotropic(&[BigInt::from(2)]);
    assert_eq!(mu, vec![BigInt::from(2)]);
    let m: Vec<BigInt> = [2i64, -1, 3, 0, 5, -2].iter().map(|&x| BigInt::from(x)).collect();
    let mu = mu_along_isotropic(&m);
    let lhs: Vec<BigInt> = std::iter::once(BigInt::one()).chain(m.iter().map(|x| -x)).collect();
    assert_eq!(product_series(&mu, 6), lhs);
}
