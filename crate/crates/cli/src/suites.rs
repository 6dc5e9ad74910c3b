//! The `verify` suites: fixed computations with known answers.

use derived_series::bounds::{hall_bound, main_bound, mann_bound, section7_verify};
use derived_series::free_lie::{BracketExpr, FreeLieAlgebra};
use derived_series::graded_bridge::{build_l, build_overline_k};
use derived_series::lie_nq::{liedims_search_report, nilpotent_quotient, LiePresentation};
use derived_series::pc_group::{
    build_wreath, classify_small_quotient, collection_formula_check, derived_series, filtration_n,
    hall_witt_product, PcGroup, SmallQuotientCase,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::commands::{prime, CliResult};
use crate::report::Run;

pub const SEC5: &str = include_str!("../../../presentations/sec5_relators.lie");
pub const SEC6: &str = include_str!("../../../presentations/sec6_example_p3.lie");

const SAMPLES: usize = 1000;
const SEED: u64 = 2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Sec5,
    Sec6,
    Sec7,
    Group,
}

pub fn verify(run: &mut Run, suite: Suite) -> CliResult<()> {
    run.input("suite", &format!("{suite:?}"));
    let all = suite == Suite::All;
    if all || suite == Suite::Sec5 {
        run.timed("sec5", sec5)?;
    }
    if all || suite == Suite::Sec6 {
        run.timed("sec6", sec6)?;
    }
    if all || suite == Suite::Sec7 {
        run.timed("sec7", sec7);
    }
    if all || suite == Suite::Group {
        run.timed("group", group)?;
    }
    Ok(())
}

fn expr(s: &str) -> BracketExpr {
    BracketExpr::parse(s).expect("fixed expression parses")
}

fn sec5(run: &mut Run) -> CliResult<()> {
    let base = LiePresentation::parse(SEC5).expect("shipped presentation parses");
    let single = expr("[[a,b],[a,c]]");
    let double = expr("2[[a,b],[a,c]]");
    for p in [2u64, 3, 5, 7] {
        let q = nilpotent_quotient(&base.clone().with_prime(prime(p)?))
            .map_err(|e| crate::commands::CliError::Failure(e.to_string()))?;
        let twice = q.is_zero(&double).unwrap_or(false);
        run.check(
            format!("sec5 p={p} 2[[a,b],[a,c]] = 0"),
            twice,
            format!("zero: {twice}"),
        );
        let once = q.is_zero(&single).unwrap_or(false);
        let expected = p != 2;
        run.check(
            format!(
                "sec5 p={p} [[a,b],[a,c]] {}",
                if expected { "= 0" } else { "!= 0" }
            ),
            once == expected,
            format!("zero: {once}"),
        );
    }
    Ok(())
}

fn sec6(run: &mut Run) -> CliResult<()> {
    let free = FreeLieAlgebra::with_unit_weights(prime(5)?, 3, 4).expect("free algebra builds");
    let dims = free.dims();
    run.check(
        "free dims 3 gens class 4",
        dims == [3, 3, 8, 18],
        format!("{dims:?}"),
    );

    let pres = LiePresentation::parse(SEC6).expect("shipped presentation parses");
    let q =
        nilpotent_quotient(&pres).map_err(|e| crate::commands::CliError::Failure(e.to_string()))?;
    let alg = q.algebra();
    let dims = alg.dims();
    run.check("example dims", dims[..3] == [3, 3, 1], format!("{dims:?}"));
    let meet = alg.derived_subalgebra(2).dim_at(4);
    run.check("example dim L'' ∩ L4", meet == 3, format!("{meet}"));

    for p in [2u64, 3, 5, 7] {
        let report = liedims_search_report(prime(p)?)
            .map_err(|e| crate::commands::CliError::Failure(e.to_string()))?;
        let n = report.solutions.len();
        if p == 3 {
            let shape = report
                .solutions
                .iter()
                .all(|a| a[4] == 2 && a.iter().enumerate().all(|(i, &x)| i == 4 || x == 0));
            run.check(
                "search p=3",
                n > 0 && shape,
                format!(
                    "{n} solutions {:?}; each has α5 = 2 and other α zero: {shape}",
                    report.solutions
                ),
            );
        } else {
            run.check(
                format!("search p={p}"),
                n == 0,
                format!("{n} solutions among {} tuples", report.tuples),
            );
        }
    }
    Ok(())
}

fn sec7(run: &mut Run) {
    for d in 5..=20 {
        match section7_verify(d) {
            Ok(profile) => {
                run.check(
                    format!("replay d={d}"),
                    profile.minimum >= profile.main,
                    format!("minimum {} >= {}", profile.minimum, profile.main),
                );
                if d >= 6 {
                    let k = d - 3;
                    let b = profile.branches.iter().find(|b| b.k == k);
                    let lhs = (1i64 << (k + 3)) + 3 * k as i64 + 3;
                    let rhs = (1i64 << d) + 3 * d as i64 - 6;
                    let ok = b.is_some_and(|b| b.total == lhs) && lhs == rhs;
                    run.check(
                        format!("terminal identity d={d}"),
                        ok,
                        format!("2^(k+3)+3k+3 = {lhs}, 2^d+3d-6 = {rhs}"),
                    );
                }
            }
            Err(e) => {
                run.check(format!("replay d={d}"), false, e.to_string());
            }
        }
    }
    let h = hall_bound(3);
    run.check("hall d=3", h == 11, format!("{h}"));
    let eq4 = main_bound(4) == mann_bound(4);
    let above = (5..=40).all(|d| main_bound(d).unwrap_or(0) > mann_bound(d).unwrap_or(0));
    run.check(
        "main vs mann",
        eq4 && above,
        format!("equal at d=4: {eq4}; strictly above for 5..=40: {above}"),
    );
}

fn wreath(p: u64, n: usize) -> CliResult<PcGroup> {
    Ok(build_wreath(prime(p)?, n)
        .map_err(|e| crate::commands::CliError::Failure(e.to_string()))?
        .group()
        .clone())
}

fn group(run: &mut Run) -> CliResult<()> {
    let w3 = wreath(2, 3)?;
    let logs: Vec<usize> = derived_series(&w3).iter().map(|s| s.log_order()).collect();
    run.check(
        "W3 derived series",
        logs == [7, 4, 1, 0],
        format!("log orders {logs:?}"),
    );
    let small = classify_small_quotient(&w3, 1);
    run.check(
        "W3 small at d=1",
        small.as_ref().is_ok_and(|r| r.derived_quotient_log == 3),
        format!("{:?}", small.as_ref().map(|r| r.case)),
    );

    let w4 = wreath(2, 4)?;
    let logs: Vec<usize> = derived_series(&w4).iter().map(|s| s.log_order()).collect();
    let q = logs.get(2).zip(logs.get(3)).map(|(a, b)| a - b);
    let nontrivial = logs.get(3).is_some_and(|&l| l > 0);
    run.check(
        "W4 |P''/P'''| = 2^5, P''' != 1",
        q == Some(5) && nontrivial,
        format!("log orders {logs:?}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, g) in [("W3", &w3), ("W(3,2)", &wreath(3, 2)?)] {
        let mut bad = 0;
        for _ in 0..SAMPLES {
            let (x, y, z) = (
                g.random_element(&mut rng),
                g.random_element(&mut rng),
                g.random_element(&mut rng),
            );
            if !hall_witt_product(g, &x, &y, &z).is_ok_and(|e| e.is_identity()) {
                bad += 1;
            }
        }
        run.check(
            format!("hall-witt {name}"),
            bad == 0,
            format!("{bad} failures in {SAMPLES} samples"),
        );
        let mut bad = 0;
        for _ in 0..SAMPLES {
            let (x, y) = (g.random_element(&mut rng), g.random_element(&mut rng));
            if !collection_formula_check(g, &x, &y).unwrap_or(false) {
                bad += 1;
            }
        }
        run.check(
            format!("collection formula {name}"),
            bad == 0,
            format!("{bad} failures in {SAMPLES} samples"),
        );
    }

    match filtration_n(&w3, 1) {
        Ok(f) => {
            for (label, r) in [
                ("W3 strong centrality", f.check_strong_centrality(&w3)),
                ("W3 elementary quotients", f.check_elementary_quotients(&w3)),
                (
                    "W3 intersection identity",
                    f.check_intersection_identity(&w3),
                ),
            ] {
                run.check(
                    label,
                    r.is_ok(),
                    r.map_or_else(|e| e.to_string(), |_| "holds".into()),
                );
            }
        }
        Err(e) => {
            run.check("W3 filtration", false, e.to_string());
        }
    }
    run.check(
        "W3 case (ii)",
        small
            .as_ref()
            .is_ok_and(|r| r.case == SmallQuotientCase::Two),
        format!("{:?}", small.map(|r| r.case)),
    );

    for (name, g, d) in [("W3", &w3, 1), ("W4", &w4, 2)] {
        match build_overline_k(g, d) {
            Ok(k) => {
                let ok = k.algebra.audit().is_ok();
                run.check(
                    format!("{name} Kbar jacobi"),
                    ok,
                    format!("dims {:?}", k.dims()),
                );
            }
            Err(e) => {
                run.check(format!("{name} Kbar jacobi"), false, e.to_string());
            }
        }
        match build_l(g, d) {
            Ok((_, l)) => {
                let dims = l.dims();
                run.check(
                    format!("{name} L dims"),
                    dims == [3, 2, 1, 1],
                    format!("{dims:?}"),
                );
            }
            Err(e) => {
                run.check(format!("{name} L dims"), false, e.to_string());
            }
        }
    }
    Ok(())
}
