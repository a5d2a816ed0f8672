mod common;

use common::{displayed_tables, mismatches, parse_poly};
use hkm::solver::{solve_space, SolveOptions};

fn check_level(n: u64) {
    let space = solve_space(n, &SolveOptions::default()).unwrap();
    for (lvl, m, text, upto) in displayed_tables() {
        if lvl != n {
            continue;
        }
        let f = space.get(&m).unwrap_or_else(|| panic!("f_{} missing at N={}", m, n));
        let bad = mismatches(f, &parse_poly(text), upto);
        assert!(bad.is_empty(), "N={} f_{}: {:?}", n, m, bad);
    }
}

#[test]
fn n12_tables() {
    check_level(12);
}

#[test]
fn n8_tables() {
    check_level(8);
}

#[test]
fn n21_table() {
    check_level(21);
}
