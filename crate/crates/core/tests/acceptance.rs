mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{displayed_tables, mismatches, parse_poly};
use hkm::arith::is_fundamental;
use hkm::asympt::{main_term, positivity_scan};
use hkm::borcherds::*;
use hkm::eta::EtaQuotient;
use hkm::exact::{int, rat, rat_to_string, Rational};
use hkm::kacmoody::{cartan_data, cartan_for_disc, reflect, simple_data, Reflection};
use hkm::quadfield::QuadElem;
use hkm::solver::*;
use hkm::weilrep::{check_relations, disc_form};
use hkm::QSeries;
use rand::{rngs::StdRng, Rng, SeedableRng};

type Check = Result<(), String>;

macro_rules! ensure {
    ($c:expr, $($fmt:tt)+) => {
        if !$c {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn regression() -> Check {
    for n in [12u64, 8, 21] {
        let space = ok(solve_space(n, &SolveOptions::default()))?;
        for (lvl, m, text, upto) in displayed_tables().into_iter().filter(|t| t.0 == n) {
            let f = space.get(&m).ok_or(format!("f_{} missing at N={}", m, lvl))?;
            let bad = mismatches(f, &parse_poly(text), upto);
            ensure!(bad.is_empty(), "N={} f_{}: {:?}", n, m, bad);
        }
    }
    Ok(())
}

fn existence() -> Check {
    let lists: [(u64, &[u64]); 3] =
        [(12, &[0, 1, 4, 6, 9, 10]), (8, &[0, 1, 2, 4, 6, 7]), (21, &[0, 1, 4, 7, 9, 15, 16, 18])];
    for (n, res) in lists {
        for m in 1..=3 * n {
            let e = ok(exists_fm(n, m))?;
            ensure!(e == res.contains(&(m % n)), "N={} m={}: exists_fm={}", n, m, e);
        }
    }
    for n in (2..=60u64).filter(|&n| is_fundamental(n as i64)) {
        let e = ok(exists_fm(n, 1))?;
        ensure!(e == [5, 8, 12, 13, 17, 21].contains(&n), "f_1 at N={}: exists_fm={}", n, e);
    }
    Ok(())
}

fn integrality() -> Check {
    for (n, bound) in [(12u64, 16u64), (8, 8), (21, 192), (17, 96)] {
        let f = ok(solve_fm(n, 1, 200))?;
        let r = ok(integrality_report(&f))?;
        ensure!(r.check.bound == bound, "N={}: bound {}", n, r.check.bound);
        ensure!(r.check.integral_to_bound, "N={}: {:?}", n, r.check.non_integral);
        ensure!(r.passed() && r.checked_to == 199, "N={}: s(n)a(n) not integral to 199", n);
    }
    Ok(())
}

fn duality() -> Check {
    let e = ok(e_eps_star(12, 20))?;
    let head = parse_poly("1 - 4q - 10q^4 - 12q^6 - 20q^9 - 8q^10 - 6q^12 - 56q^13 - 34q^16");
    for j in 0..17 {
        let c = e.coeff_int(j).unwrap_or_default();
        ensure!(c == head.get(&j).cloned().unwrap_or_default(), "E coefficient at q^{} is {}", j, c);
    }
    let space = ok(solve_space(12, &SolveOptions { prec: 30, ..Default::default() }))?;
    for (m, w) in [(1u64, 2i64), (4, 5), (6, 6), (9, 10), (10, 4), (12, 3)] {
        let f = &space[&m];
        let b = e.coeff_int(m as i64).unwrap_or_default();
        let a0 = f.coeff(0).unwrap_or_default();
        ensure!(a0 == -b / int(4), "f_{}: a(0) = {}", m, rat_to_string(&a0));
        ensure!(lift_weight(f) == int(w), "f_{}: weight {}", m, rat_to_string(&lift_weight(f)));
        ensure!(ok(duality_weight(f))? == int(w), "f_{}: duality weight", m);
    }
    Ok(())
}

fn weyl_data() -> Check {
    for n in [8u64, 12] {
        let f = ok(solve_fm(n, 1, 120))?;
        let w = ok(WeylChamber::containing_interior(&f))?;
        let rho = ok(weyl_vector(&f, &w))?;
        ensure!(rho == weyl_vector_closed_form(&w.field), "N={}: ρ = {}", n, rho);
        let cd = ok(cartan_for_disc(n))?;
        let one = QuadElem::one(cd.field.n1);
        let psi_rho = (&one + &cd.eta).scale(&rat(1, (cd.s * cd.n) as i64));
        ensure!(simple_data(&cd).rho == psi_rho && rho == psi_rho, "N={}: ψ(ρ) = {}", n, simple_data(&cd).rho);
        let b = ok(default_grade_bound(&w.field, &cd, &rho))?;
        let p = ok(expand_psi(&f, &b))?;
        let neg = p.negative_norms();
        ensure!(neg.iter().all(|&x| x == -1) && !neg.is_empty(), "N={}: negative norms {:?}", n, neg);
    }
    Ok(())
}

fn antisymmetry() -> Check {
    for n in [12u64, 8] {
        let f = ok(solve_fm(n, 1, 200))?;
        let cd = ok(cartan_for_disc(n))?;
        let w = ok(WeylChamber::containing_interior(&f))?;
        let rho = ok(weyl_vector(&f, &w))?;
        let b = ok(default_grade_bound(&w.field, &cd, &rho))?;
        let psi = ok(expand_psi(&f, &b))?;
        let phi = to_phi(&psi);
        let rep = check_antisymmetry(&phi, &cd, 2);
        ensure!(rep.passed && rep.compared > 0, "N={}: {:?}", n, rep.failures);
        let bad = to_phi(&ok(mutate_lowest_positive(&psi))?);
        ensure!(!check_antisymmetry(&bad, &cd, 2).passed, "N={}: mutated Φ passed", n);
        let ss = ok(sum_side_check(&phi, &cd))?;
        ensure!(ss.passed, "N={}: sum side {:?}", n, ss.mismatches);
    }
    Ok(())
}

fn asymptotics() -> Check {
    let f12 = ok(solve_fm(12, 12, 30))?;
    let f8 = ok(solve_fm(8, 8, 30))?;
    for (f, n, main, exact) in [
        (&f12, 18i64, 177366.0, "177246"),
        (&f12, 15, 106127.0, "106144"),
        (&f12, 17, 0.0, "0"),
        (&f8, 17, 1.2557e7, "12556992"),
        (&f8, 18, 1.02365e7, "10235352"),
    ] {
        let m = ok(main_term(f.n, f.m, n))?;
        let e = rat_to_string(&f.coeff(n).unwrap_or_default());
        ensure!(e == exact, "N={} n={}: exact {}", f.n, n, e);
        if main == 0.0 {
            ensure!(m == 0.0, "N={} n={}: main {}", f.n, n, m);
        } else {
            ensure!(((m - main) / main).abs() < 1e-3, "N={} n={}: main {}", f.n, n, m);
        }
    }
    Ok(())
}

fn positivity() -> Check {
    for (n, m) in [(12u64, 12u64), (8, 8)] {
        let f = ok(solve_fm(n, m, 201))?;
        ensure!(ok(positivity_scan(&f, 0, 200))?.passed, "N={}", n);
    }
    Ok(())
}

fn random_series(rng: &mut StdRng) -> QSeries {
    let s = rng.gen_range(-3i64..3);
    let c: Vec<Rational> = (0..rng.gen_range(1..10)).map(|_| rat(rng.gen_range(-9..9), rng.gen_range(1..4))).collect();
    QSeries::from_dense(s, &c, Some(s + 10))
}

fn properties() -> Check {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..200 {
        let (a, b, c) = (random_series(&mut rng), random_series(&mut rng), random_series(&mut rng));
        ensure!(&a * &b == &b * &a && &a + &b == &b + &a, "commutativity");
        ensure!(&(&a * &b) * &c == &a * &(&b * &c), "associativity");
        ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity");
    }
    for n1 in [2u64, 3, 21] {
        let r = check_relations(&ok(disc_form(n1))?);
        ensure!(r.unitary && r.braid && r.s_squared_is_negation && r.milgram, "Weil relations at N={}", n1);
    }
    for s in ["1^2 3^-2 4^1 6^2 12^1", "1^-2 2^3 4^1 8^2", "1^12 3^-3 7^3", "1^7 17^1"] {
        let q: EtaQuotient = ok(s.parse())?;
        let (l, r) = q.valence_sides();
        ensure!(l == r, "valence for {}", s);
    }
    for _ in 0..200 {
        let cd = ok(cartan_data(rng.gen_range(3..12)))?;
        let c: Vec<Rational> = (0..4).map(|_| int(rng.gen_range(-20..20))).collect();
        let x = cd.from_alpha_coords(&c[0], &c[1]);
        let y = cd.from_alpha_coords(&c[2], &c[3]);
        ensure!(cd.cartan_form((&c[0], &c[1]), (&c[2], &c[3])) == cd.pairing(&x, &y), "ψ isometry at a={}", cd.a);
        // r_1 v = v − (v, α_1)α_1 and r_2 likewise, in α-coordinates
        let a = int(cd.a as i64);
        let p1 = int(2) * &c[0] - &a * &c[1];
        let p2 = int(2) * &c[1] - &a * &c[0];
        ensure!(cd.from_alpha_coords(&(&c[0] - &p1), &c[1]) == reflect(&cd, Reflection::R1, &x), "r1 at a={}", cd.a);
        ensure!(cd.from_alpha_coords(&c[0], &(&c[1] - &p2)) == reflect(&cd, Reflection::R2, &x), "r2 at a={}", cd.a);
    }
    for n in [8u64, 12] {
        let base = ok(solve_space(n, &SolveOptions { prec: 40, ..Default::default() }))?;
        for order in [PoolOrder::Reversed, PoolOrder::Shuffled(7)] {
            let other = ok(solve_space(n, &SolveOptions { prec: 40, order, ..Default::default() }))?;
            for (m, f) in &base {
                ensure!(other.get(m).map(|g| g.table()) == Some(f.table()), "N={} f_{} under {:?}", n, m, order);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("f_m regression at N=12, 8, 21", regression),
        ("existence residues and f_1 levels", existence),
        ("Sturm integrality", integrality),
        ("Eisenstein duality and weights", duality),
        ("Weyl vectors and negative norms", weyl_data),
        ("antisymmetry, mutation control, sum side", antisymmetry),
        ("asymptotic comparison points", asymptotics),
        ("positivity to n=200", positivity),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(()) => println!("PASS {} {} ({:.1}s)", i + 1, name, secs),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {} ({:.1}s): {}", i + 1, name, secs, e);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
