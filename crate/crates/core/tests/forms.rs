mod common;

use hkm::arith::is_fundamental;
use hkm::exact::{int, rat};
use hkm::solver::*;

#[test]
fn e_eps_star_head_at_12() {
    let e = e_eps_star(12, 20).unwrap();
    let want = common::parse_poly("1 - 4q - 10q^4 - 12q^6 - 20q^9 - 8q^10 - 6q^12 - 56q^13 - 34q^16");
    for n in 0..=17i64 {
        let w = want.get(&n).cloned().unwrap_or_else(|| int(0));
        assert_eq!(e.coeff_int(n).unwrap(), w, "coefficient {}", n);
    }
}

#[test]
fn constant_terms_follow_from_e_eps_star() {
    let mut s = Solver::new(12, SolveOptions { prec: 30, ..Default::default() }).unwrap();
    for (m, w) in [(1u64, "2"), (4, "5"), (6, "6"), (9, "10"), (10, "4"), (12, "3")] {
        let f = s.get(m).unwrap();
        let r = constant_duality_check(&f).unwrap();
        assert_eq!(r.a0, r.predicted_a0);
        assert_eq!(r.weight, w, "m={}", m);
    }
    let f = s.get(1).unwrap();
    assert_eq!(f.coeff(0).unwrap(), rat(1, 1));
}

#[test]
fn duality_weight_at_other_levels() {
    for n in [8u64, 21] {
        let mut s = Solver::new(n, SolveOptions { prec: 30, ..Default::default() }).unwrap();
        let f = s.get(1).unwrap();
        constant_duality_check(&f).unwrap();
        assert_eq!(duality_weight(&f).unwrap(), lift_weight(&f));
    }
}

fn residues(n: u64) -> Vec<u64> {
    match n {
        12 => vec![0, 1, 4, 6, 9, 10],
        8 => vec![0, 1, 2, 4, 6, 7],
        21 => vec![0, 1, 4, 7, 9, 15, 16, 18],
        _ => unreachable!(),
    }
}

#[test]
fn existence_residues() {
    for n in [12u64, 8, 21] {
        let r = residues(n);
        for m in 1..=3 * n {
            assert_eq!(exists_fm(n, m).unwrap(), r.contains(&(m % n)), "N={} m={}", n, m);
        }
    }
}

#[test]
fn f1_exists_exactly_up_to_21() {
    for n in (5..=60u64).filter(|&n| is_fundamental(n as i64)) {
        assert_eq!(exists_fm(n, 1).unwrap(), [5, 8, 12, 13, 17, 21].contains(&n), "N={}", n);
    }
}

#[test]
fn missing_forms_are_reported() {
    assert!(matches!(solve_fm(12, 2, 20), Err(hkm::Error::DoesNotExist { n: 12, m: 2 })));
    assert!(matches!(solve_fm(8, 3, 20), Err(hkm::Error::DoesNotExist { .. })));
}

#[test]
fn sturm_integrality() {
    for (n, bound) in [(12u64, 16u64), (8, 8), (21, 192), (17, 96)] {
        let f = solve_fm(n, 1, 200).unwrap();
        let r = integrality_report(&f).unwrap();
        assert_eq!(r.check.bound, bound, "N={}", n);
        assert!(r.passed(), "N={}: {:?}", n, r.check.non_integral);
        assert_eq!(r.checked_to, 199);
    }
}

#[test]
fn extension_through_j_matches_a_direct_solve() {
    // f_13 at N=12 from f_1·j(12τ) and the lower forms
    let f13 = extend_fm(12, 13, 40).unwrap();
    assert_eq!(f13.coeff(-13).unwrap(), int(1));
    assert_eq!(f13.prec(), 40);
    constant_duality_check(&f13).unwrap();
    for n in -12..0 {
        assert_eq!(f13.coeff(n).unwrap_or_default(), int(0), "n={}", n);
    }
    let f9 = extend_fm(8, 9, 30).unwrap();
    let direct = solve_space(8, &SolveOptions { prec: 30, ..Default::default() }).unwrap();
    assert!(direct.get(&9).is_none());
    // f_9 = f_1·j(8τ) minus lower forms has constant term fixed by duality
    constant_duality_check(&f9).unwrap();
    let f = solve_fm(12, 12, 40).unwrap();
    let g = extend_fm(12, 12, 40).unwrap();
    assert_eq!(f.table(), g.table());
}

#[test]
fn solution_is_independent_of_pool_order() {
    for n in [8u64, 12] {
        let base = solve_space(n, &SolveOptions { prec: 40, ..Default::default() }).unwrap();
        for order in [PoolOrder::Reversed, PoolOrder::Shuffled(1), PoolOrder::Shuffled(99)] {
            let other = solve_space(n, &SolveOptions { prec: 40, order, ..Default::default() }).unwrap();
            assert_eq!(base.keys().collect::<Vec<_>>(), other.keys().collect::<Vec<_>>());
            for (m, f) in &base {
                assert_eq!(f.table(), other[m].table(), "N={} m={} {:?}", n, m, order);
            }
        }
    }
}
