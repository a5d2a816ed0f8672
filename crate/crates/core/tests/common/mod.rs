#![allow(dead_code)]

use hkm::exact::{parse_rational, Rational};
use std::collections::BTreeMap;

/// Parses "1/2q^-4 + 5/2 - 2q^2 + q^3 + 7q" into exponent → coefficient.
pub fn parse_poly(s: &str) -> BTreeMap<i64, Rational> {
    let mut s2 = String::new();
    for ch in s.chars().filter(|c| *c != ' ') {
        if ch == '-' && !s2.ends_with('^') {
            s2.push('+');
        }
        s2.push(ch);
    }
    let s = s2;
    let mut out = BTreeMap::new();
    for tok in s.split('+').filter(|t| !t.is_empty()) {
        let (c, e) = match tok.find('q') {
            None => (tok.to_string(), 0),
            Some(i) => {
                let head = &tok[..i];
                let tail = &tok[i + 1..];
                let e = if tail.is_empty() { 1 } else { tail.trim_start_matches('^').parse().unwrap() };
                let c = match head {
                    "" => "1".to_string(),
                    "-" => "-1".to_string(),
                    h => h.to_string(),
                };
                (c, e)
            }
        };
        out.insert(e, parse_rational(&c).unwrap_or_else(|| panic!("bad coefficient {}", c)));
    }
    out
}

/// (N, m, displayed coefficients, first unknown exponent).
pub fn displayed_tables() -> Vec<(u64, u64, &'static str, i64)> {
    vec![
        (12, 1, "q^-1 + 1 + 2q^2 + q^3 - 2q^6 - 2q^8 + 4q^12 + 4q^14 - q^15 - 6q^18", 20),
        (12, 4, "1/2q^-4 + 5/2 - 2q^2 + 16q^3 + 22q^6 - 35q^8 - 160q^11 + 209/2q^12 - 172q^14 + 416q^15 + 390q^18", 20),
        (12, 6, "1/4q^-6 + 3 + 27/2q^2 - 16q^3 + 36q^6 + 162q^8 - 864q^11 + 292q^12 + 1080q^14 - 1440q^15 + 1629q^18", 20),
        (12, 9, "1/2q^-9 + 5 - 54q^2 + 6q^3 - 330q^6 + 1782q^8 + 54q^11 + 4884q^12 - 20844q^14 - 87/2q^15 - 41822q^18", 20),
        (12, 10, "1/2q^-10 + 2 - 40q^2 - 160q^3 + 1045/2q^6 - 1460q^8 + 11840q^11 + 9080q^12 - 20235q^14 - 59456q^15 + 88440q^18", 20),
        (12, 12, "1/4q^-12 + 3/2 + 54q^2 + 144q^3 + 606q^6 + 3807q^8 + 35424q^11 + 14184q^12 + 69444q^14 + 106144q^15 + 177246q^18", 20),
        (8, 1, "q^-1 + 2 + 2q + 4q^2 - 4q^4 - 8q^6 + q^7 + 12q^8 - 2q^9 + 16q^10 - 24q^12 - 32q^14 - q^15 + 44q^16 + 4q^17 + 60q^18", 20),
        (8, 2, "1/2q^-2 + 3 + 8q - 3q^2 + 14q^4 - 24q^6 - 64q^7 + 42q^8 + 120q^9 - 80q^10 + 132q^12 - 447/2q^14 - 576q^15 + 370q^16 + 912q^17 - 573q^18", 20),
        (8, 4, "1/2q^-4 + 5 - 16q + 28q^2 + 89q^4 + 280q^6 - 896q^7 + 730q^8 - 2288q^9 + 1744q^10 + 3984q^12 + 8480q^14 - 24448q^15 + 17366q^16 - 48928q^17 + 34212q^18", 20),
        (8, 6, "1/2q^-6 + 2 - 48q - 72q^2 + 420q^4 - 1708q^6 + 6528q^7 + 6012q^8 - 21200q^9 - 36669/2q^10 + 51128q^12 - 133056q^14 + 419200q^15 + 325644q^16 - 1000800q^17 - 759864q^18", 20),
        (8, 7, "q^-7 + 16 + 7q - 224q^2 - 1568q^4 + 7616q^6 + 128q^7 + 29792q^8 + 14q^9 - 101248q^10 - 310464q^12 + 878336q^14 - 896q^15 + 2328928q^16 - 7q^17 - 5852448q^18", 20),
        (8, 8, "1/2q^-8 + 9 + 96q + 168q^2 + 1460q^4 + 8016q^6 + 34048q^7 + 34737q^8 + 136608q^9 + 130144q^10 + 434472q^12 + 1330368q^14 + 4533504q^15 + 3799986q^16 + 12556992q^17 + 10235352q^18", 20),
        (21, 1, "q^-1 + 1/2 + q^3 + q^5 - q^6 - q^14 - q^17 + 2q^20 + q^21 + q^24 - 2q^27 - q^33 - q^35 - 2q^38 + 3q^41 + 2q^42 + 3q^45 + q^47 - 4q^48", 49),
    ]
}

/// Compares every exponent from −m up to (excluding) `upto`; returns the mismatches.
pub fn mismatches(f: &hkm::solver::WHForm, want: &BTreeMap<i64, Rational>, upto: i64) -> Vec<(i64, Rational, Rational)> {
    (-(f.m as i64)..upto)
        .filter_map(|e| {
            let w = want.get(&e).cloned().unwrap_or_default();
            let g = f.coeff(e).unwrap_or_default();
            (w != g).then_some((e, w, g))
        })
        .collect()
}
