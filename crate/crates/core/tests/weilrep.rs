use hkm::quadfield::norm_values_mod;
use hkm::weilrep::{check_relations, collect_component, disc_form, rho_s_scaled, support_residues};
use hkm::{exact::int, QSeries};

#[test]
fn relations_hold_for_the_three_levels() {
    for n1 in [2u64, 3, 21] {
        let d = disc_form(n1).unwrap();
        let c = check_relations(&d);
        assert!(c.unitary, "unitarity for N1={}", n1);
        assert!(c.milgram, "Milgram for N1={}", n1);
        assert!(c.braid, "(ST)^3 = S^2 for N1={}", n1);
        assert!(c.s_squared_is_negation, "S^2 for N1={}", n1);
        assert!(c.t_diagonal);
    }
}

#[test]
fn relations_hold_for_other_small_levels() {
    for n1 in [5u64, 13, 17] {
        assert!(check_relations(&disc_form(n1).unwrap()).all_ok(), "N1={}", n1);
    }
}

#[test]
fn zero_row_of_s_is_all_ones() {
    let d = disc_form(3).unwrap();
    let s = rho_s_scaled(&d);
    let z = d.index_of(0, 0);
    for j in 0..d.order() {
        assert!(s.get(j, z).eq_field(&hkm::cyclotomic::Cyc::from_int(12, 1)));
    }
}

#[test]
fn support_matches_norm_values() {
    for (n1, want) in [(3u64, vec![0u64, 2, 3, 6, 8, 11]), (2, vec![0, 1, 2, 4, 6, 7])] {
        let d = disc_form(n1).unwrap();
        let s: Vec<u64> = support_residues(&d).into_iter().collect();
        let neg: std::collections::BTreeSet<u64> = s.iter().map(|&r| (d.n - r) % d.n).collect();
        assert_eq!(s, norm_values_mod(&d.field).into_iter().collect::<Vec<_>>());
        if n1 == 3 {
            assert_eq!(s, want);
        } else {
            assert_eq!(neg.into_iter().collect::<Vec<_>>(), want);
        }
    }
    let d = disc_form(21).unwrap();
    let neg: Vec<u64> = support_residues(&d).into_iter().map(|r| (21 - r) % 21).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    assert_eq!(neg, vec![0, 1, 4, 7, 9, 15, 16, 18]);
}

#[test]
fn zero_component_has_integer_exponents() {
    let d = disc_form(3).unwrap();
    let f = QSeries::from_dense(-1, &(0..30).map(|i| int(i)).collect::<Vec<_>>(), Some(29));
    let c = collect_component(&f, &d, d.index_of(0, 0)).unwrap();
    assert!(c.has_integer_exponents());
    assert_eq!(c.coeff_int(1), Some(int(13)));
}
