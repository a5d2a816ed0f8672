use std::collections::BTreeMap;

use hkm::characters::kronecker;
use hkm::eta::EtaQuotient;
use hkm::exact::{int, Rational};
use hkm::qseries::QSeries;
use hkm::quadfield::QuadElem;
use proptest::prelude::*;

fn series(start: i64, c: &[i64], prec: i64) -> QSeries {
    let coeffs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
    QSeries::from_dense(start, &coeffs, Some(prec))
}

fn arb_series() -> impl Strategy<Value = QSeries> {
    (-3i64..3, prop::collection::vec(-9i64..9, 1..12)).prop_map(|(s, c)| series(s, &c, s + 10))
}

fn pow_mod(b: i64, e: i64, m: i64) -> i64 {
    let (mut r, mut b, mut e) = (1i64, b.rem_euclid(m), e);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

const PRIMES: [i64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

proptest! {
    #[test]
    fn series_ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert_eq!(&(&a + &b), &(&b + &a));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        prop_assert_eq!(&(&(&a + &b) - &b).truncate(&(&a + &b).prec().unwrap()), &a.truncate(&(&a + &b).prec().unwrap()));
        prop_assert_eq!(&(&a * &QSeries::one()), &a);
    }

    #[test]
    fn series_inverse(s in -3i64..3, lead in prop::sample::select(vec![-2i64, -1, 1, 2]), c in prop::collection::vec(-5i64..5, 0..10)) {
        let mut cs = vec![lead];
        cs.extend(c);
        let a = series(s, &cs, s + 12);
        let inv = a.inv().unwrap();
        let p = &a * &inv;
        let one = QSeries::one().truncate(&p.prec().unwrap());
        prop_assert_eq!(p, one);
    }

    #[test]
    fn kronecker_at_odd_primes(a in -500i64..500, i in 0usize..12) {
        let p = PRIMES[i];
        let e = pow_mod(a, (p - 1) / 2, p);
        let want = if a.rem_euclid(p) == 0 { 0 } else if e == 1 { 1 } else { -1 };
        prop_assert_eq!(kronecker(a, p), want);
    }

    #[test]
    fn kronecker_is_multiplicative(a in -200i64..200, m in 1i64..200, n in 1i64..200) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn fundamental_characters_are_periodic(i in 0usize..6, n in 1i64..400) {
        let d = [5i64, 8, 12, 13, 17, 21][i];
        prop_assert_eq!(kronecker(d, n), kronecker(d, n + d));
    }

    #[test]
    fn eta_valence_formula(r in prop::collection::vec(-6i64..6, 6)) {
        let ds = [1u64, 2, 3, 4, 6, 12];
        let e: BTreeMap<u64, i64> = ds.iter().copied().zip(r).collect();
        let q = EtaQuotient::new(e, Some(12)).unwrap();
        let (lhs, rhs) = q.valence_sides();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn norm_is_multiplicative(a in prop::array::uniform3(-30i64..30), b in prop::array::uniform3(-30i64..30),
                              i in 0usize..4) {
        let n1 = [2u64, 3, 5, 21][i];
        let x = QuadElem::new(a[0], a[1], a[2].abs() + 1, n1);
        let y = QuadElem::new(b[0], b[1], b[2].abs() + 1, n1);
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    }
}

#[test]
fn integrality_multipliers_satisfy_the_valence_formula() {
    for (s, level) in [("1^2 3^-2 4^1 6^2 12^1", 12), ("1^-2 2^3 4^1 8^2", 8), ("1^12 3^-3 7^3", 21), ("1^7 17^1", 17)] {
        let q: EtaQuotient = s.parse().unwrap();
        assert_eq!(q.level, level);
        let (lhs, rhs) = q.valence_sides();
        assert_eq!(lhs, rhs, "{}", s);
        assert!(q.is_holomorphic(), "{}", s);
        let prec = int(30);
        let exp = q.expansion(&prec);
        assert_eq!(exp.valuation().unwrap(), q.order_at_infinity());
    }
}
