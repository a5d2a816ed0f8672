use hkm::exact::{int, Rational};
use hkm::kacmoody::*;
use hkm::quadfield::QuadElem;
use hkm::solver::solve_fm;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(u: i64, v: i64, w: i64, n1: u64) -> QuadElem {
    QuadElem::new(u, v, w, n1)
}

#[test]
fn cartan_data_for_the_table_levels() {
    let cd = cartan_data(4).unwrap();
    assert_eq!((cd.n, cd.s), (12, 1));
    assert_eq!(cd.eta, q(2, 1, 1, 3));
    let cd = cartan_data(6).unwrap();
    assert_eq!((cd.n, cd.s), (8, 2));
    let e0 = q(1, 1, 1, 2);
    assert_eq!(cd.eta, &e0 * &e0);
    let cd = cartan_data(3).unwrap();
    assert_eq!((cd.n, cd.s), (5, 1));
    assert_eq!((cartan_data(5).unwrap().n, cartan_data(5).unwrap().s), (21, 1));
    for (n, a) in [(5u64, 3u64), (8, 6), (12, 4), (13, 11), (17, 66), (21, 5)] {
        assert_eq!(cartan_for_disc(n).unwrap().a, a, "N={}", n);
    }
    assert!(cartan_data(2).is_err());
}

#[test]
fn eta_relations() {
    for a in 3..30u64 {
        let cd = cartan_data(a).unwrap();
        assert_eq!(a * a - 4, cd.n * cd.s * cd.s);
        let one = QuadElem::one(cd.field.n1);
        let lhs = &one + &(&cd.eta * &cd.eta);
        assert_eq!(lhs, cd.eta.scale(&int(a as i64)));
        assert_eq!(cd.eta.conj(), cd.eta.recip().unwrap());
    }
}

#[test]
fn simple_roots_reproduce_the_cartan_matrix() {
    for a in [3u64, 4, 5, 6, 11] {
        let cd = cartan_data(a).unwrap();
        let sd = simple_data(&cd);
        assert_eq!(cd.pairing(&sd.alpha1, &sd.alpha1), int(2));
        assert_eq!(cd.pairing(&sd.alpha2, &sd.alpha2), int(2));
        assert_eq!(cd.pairing(&sd.alpha1, &sd.alpha2), int(-(a as i64)));
        assert_eq!(cd.pairing(&sd.omega1, &sd.alpha1), int(1));
        assert_eq!(cd.pairing(&sd.omega1, &sd.alpha2), int(0));
        assert_eq!(cd.pairing(&sd.omega2, &sd.alpha2), int(1));
        assert_eq!(cd.pairing(&sd.omega2, &sd.alpha1), int(0));
        assert_eq!(sd.rho, -&(&sd.omega1 + &sd.omega2));
        assert_eq!(cd.pairing(&sd.rho, &sd.alpha1), int(-1));
        assert_eq!(cd.pairing(&sd.rho, &sd.alpha2), int(-1));
    }
}

#[test]
fn gamma_pairing_is_minus_n() {
    // (xγ⁺ + yγ⁻, x₂γ⁺ + y₂γ⁻) = −N(xy₂ + yx₂); on ψ-images y = x′ this is −N·tr(xx₂′)
    let cd = cartan_data(4).unwrap();
    let n = int(cd.n as i64);
    let form = |x: (Rational, Rational), y: (Rational, Rational)| -&n * (&x.0 * &y.1 + &x.1 * &y.0);
    let (one, zero) = (Rational::one(), Rational::zero());
    assert_eq!(form((one.clone(), zero.clone()), (zero.clone(), one.clone())), int(-12));
    assert_eq!(form((one.clone(), zero.clone()), (one.clone(), zero.clone())), int(0));
    let x = q(1, 2, 3, 3);
    let y = q(-2, 1, 5, 3);
    let xx = (x.to_f64(), x.conj().to_f64());
    let yy = (y.to_f64(), y.conj().to_f64());
    let float_form = -12.0 * (xx.0 * yy.1 + xx.1 * yy.0);
    assert!((float_form - hkm::exact::to_f64(&cd.pairing(&x, &y))).abs() < 1e-12);
}

#[test]
fn reflections() {
    let cd = cartan_data(4).unwrap();
    let sd = simple_data(&cd);
    assert_eq!(reflect(&cd, Reflection::R2, &sd.alpha2), -&sd.alpha2);
    assert_eq!(reflect(&cd, Reflection::R1, &sd.alpha1), -&sd.alpha1);
    let x = q(3, -1, 7, 3);
    for r in [Reflection::R1, Reflection::R2] {
        assert_eq!(reflect(&cd, r, &reflect(&cd, r, &x)), x);
    }
    let (y, det) = weyl_act(&cd, &[Reflection::R1, Reflection::R2], &x);
    assert_eq!(det, 1);
    assert_eq!(y, &(&cd.eta * &cd.eta) * &x);
    assert_eq!(weyl_act(&cd, &[Reflection::R2], &x).1, -1);
}

#[test]
fn real_roots_have_norm_two() {
    for a in [3u64, 4, 5, 6] {
        let cd = cartan_data(a).unwrap();
        let sd = simple_data(&cd);
        let roots = real_roots_up_to(&cd, 10);
        assert_eq!(roots.len(), 21);
        assert_eq!(roots[0], sd.alpha2);
        assert_eq!(roots[1], sd.alpha1);
        for r in &roots {
            assert_eq!(cd.pairing(r, r), int(2));
            assert!(cd.field.in_inverse_different(r));
            let (c1, c2) = cd.alpha_coords(r);
            assert!(c1.is_integer() && c2.is_integer());
            assert!(c1 >= int(0) && c2 >= int(0), "positive root {} has coordinates {} {}", r, c1, c2);
        }
    }
}

#[test]
fn multiplicities_from_f1() {
    let f = solve_fm(12, 1, 60).unwrap();
    let cd = cartan_for_disc(12).unwrap();
    let rows = mult_table(&cd, &f, &int(6)).unwrap();
    let by_norm = |n: i64| rows.iter().find(|r| r.norm == n).unwrap().mult.clone();
    assert_eq!(by_norm(2), "4");
    assert_eq!(by_norm(3), "2");
    let f8 = solve_fm(8, 1, 60).unwrap();
    let cd8 = cartan_for_disc(8).unwrap();
    let rows8 = mult_table(&cd8, &f8, &int(6)).unwrap();
    assert_eq!(rows8.iter().find(|r| r.norm == 1).unwrap().mult, "2");
    for (cd, rows) in [(&cd, &rows), (&cd8, &rows8)] {
        for r in rows.iter() {
            assert!(r.nu.is_totally_positive());
            assert!(is_imaginary(cd, &r.nu));
            assert_ne!(cd.pairing(&r.nu, &r.nu), int(2));
        }
    }
}

#[test]
fn mult_table_needs_precision() {
    let f = solve_fm(12, 1, 10).unwrap();
    let cd = cartan_for_disc(12).unwrap();
    assert!(matches!(mult_table(&cd, &f, &int(8)), Err(hkm::Error::InsufficientPrecision { .. })));
}

fn alpha_reflect(cd: &CartanData, i: usize, c: (Rational, Rational)) -> (Rational, Rational) {
    // r_i v = v − (v, α_i)α_i in α-coordinates
    let a = int(cd.a as i64);
    if i == 1 {
        let p = int(2) * &c.0 - &a * &c.1;
        (c.0 - p, c.1)
    } else {
        let p = int(2) * &c.1 - &a * &c.0;
        (c.0, c.1 - p)
    }
}

proptest! {
    #[test]
    fn psi_is_an_isometry(a in 3u64..12, c in prop::array::uniform4(-20i64..20)) {
        let cd = cartan_data(a).unwrap();
        let x = cd.from_alpha_coords(&int(c[0]), &int(c[1]));
        let y = cd.from_alpha_coords(&int(c[2]), &int(c[3]));
        let lhs = cd.cartan_form((&int(c[0]), &int(c[1])), (&int(c[2]), &int(c[3])));
        prop_assert_eq!(lhs, cd.pairing(&x, &y));
        prop_assert_eq!(cd.alpha_coords(&x), (int(c[0]), int(c[1])));
    }

    #[test]
    fn psi_is_weyl_equivariant(a in 3u64..12, c in prop::array::uniform2(-20i64..20), i in 1usize..3) {
        let cd = cartan_data(a).unwrap();
        let v = (int(c[0]), int(c[1]));
        let x = cd.from_alpha_coords(&v.0, &v.1);
        let w = alpha_reflect(&cd, i, v);
        let r = if i == 1 { Reflection::R1 } else { Reflection::R2 };
        prop_assert_eq!(cd.from_alpha_coords(&w.0, &w.1), reflect(&cd, r, &x));
    }
}
