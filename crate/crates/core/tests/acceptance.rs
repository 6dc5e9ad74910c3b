//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion, then fails if any did.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::assoc;
use common::perm::{self, PermGroup};
use derived_series::bounds::{hall_bound, main_bound, mann_bound, section7_verify};
use derived_series::field_linalg::Prime;
use derived_series::free_lie::{BracketExpr, FreeLieAlgebra};
use derived_series::graded_bridge::{build_k, build_l, build_overline_k, lcs_graded_subring};
use derived_series::lie_nq::{
    alpha_presentation, liedims_search, nilpotent_quotient, LiePresentation,
};
use derived_series::pc_group::{
    build_wreath, classify_small_quotient, collection_formula_check, derived_series, filtration_n,
    hall_witt_product, PcGroup, SmallQuotientCase,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FREE_DIMS_LIMIT: Duration = Duration::from_secs(1);
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
const SEARCH_P7_LIMIT: Duration = Duration::from_secs(120);
const RELATORS_LIMIT: Duration = Duration::from_secs(1);
const W4_LIMIT: Duration = Duration::from_secs(30);
const REPLAY_LIMIT: Duration = Duration::from_secs(1);
const IDENTITY_SAMPLES: usize = 1000;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("{label} took {elapsed:?}, limit {limit:?}"),
    )
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn shipped(name: &str) -> LiePresentation {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../presentations")
        .join(name);
    LiePresentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn wreath(p: u64, levels: usize) -> PcGroup {
    build_wreath(prime(p), levels).unwrap().group().clone()
}

fn oracle_dims(pres: &LiePresentation) -> Vec<usize> {
    let p = pres.prime.get();
    let weights: Vec<usize> = pres.generators.iter().map(|g| g.weight).collect();
    let index = |n: &str| pres.generators.iter().position(|g| g.name == n).unwrap();
    let relators: Vec<_> = pres
        .relators
        .iter()
        .map(|r| assoc::eval(p, r, &index))
        .collect();
    let free_dims: Vec<usize> = (1..=pres.class)
        .map(|w| assoc::count_lyndon(&weights, w))
        .collect();
    assoc::quotient_dims(p, &weights, pres.class, &relators, &free_dims)
}

fn oracle_is_zero(pres: &LiePresentation, target: &BracketExpr) -> bool {
    let p = pres.prime.get();
    let weights: Vec<usize> = pres.generators.iter().map(|g| g.weight).collect();
    let index = |n: &str| pres.generators.iter().position(|g| g.name == n).unwrap();
    let relators: Vec<_> = pres
        .relators
        .iter()
        .map(|r| assoc::eval(p, r, &index))
        .collect();
    let mut t = assoc::eval(p, target, &index);
    t.truncate(&weights, pres.class);
    assoc::in_ideal(p, &weights, pres.class, &relators, &t)
}

fn free_lie_dimensions() -> Outcome {
    let start = Instant::now();
    let free = FreeLieAlgebra::with_unit_weights(prime(5), 3, 4).map_err(|e| e.to_string())?;
    let dims = free.dims();
    within("free algebra", start.elapsed(), FREE_DIMS_LIMIT)?;
    let oracle: Vec<usize> = (1..=4)
        .map(|w| assoc::count_lyndon(&[1, 1, 1], w))
        .collect();
    ensure(
        dims == oracle,
        format!("dims {dims:?}, Lyndon count {oracle:?}"),
    )?;
    ensure(
        dims[2] == 8,
        format!("degree 3 has {} elements, expected 8", dims[2]),
    )?;
    ensure(dims == [3, 3, 8, 18], format!("dims {dims:?}"))?;
    Ok(format!("dims {dims:?} in {:?}", start.elapsed()))
}

fn example_reproduction() -> Outcome {
    let pres = shipped("sec6_example_p3.lie");
    let start = Instant::now();
    let q = nilpotent_quotient(&pres).map_err(|e| e.to_string())?;
    let alg = q.algebra();
    let dims = alg.dims();
    let meet = alg.derived_subalgebra(2).dim_at(4);
    within("example", start.elapsed(), EXAMPLE_LIMIT)?;
    ensure(dims[..3] == [3, 3, 1], format!("dims {dims:?}"))?;
    ensure(meet == 3, format!("dim L'' ∩ L4 = {meet}"))?;
    let oracle = oracle_dims(&pres);
    ensure(
        dims == oracle,
        format!("dims {dims:?}, associative model {oracle:?}"),
    )?;
    Ok(format!("dims {dims:?}, dim L'' ∩ L4 = {meet}"))
}

fn parameter_search() -> Outcome {
    let mut lines = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let start = Instant::now();
        let sols = liedims_search(prime(p)).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if p == 7 {
            within("search over F_7", elapsed, SEARCH_P7_LIMIT)?;
        }
        if p == 3 {
            ensure(!sols.is_empty(), "no solutions over F_3")?;
            for s in &sols {
                ensure(*s == [0, 0, 0, 0, 2, 0, 0], format!("solution {s:?}"))?;
                let dims = oracle_dims(&alpha_presentation(prime(3), s));
                ensure(
                    dims[0] == 3 && dims[2] == 1,
                    format!("associative model gives {dims:?} for {s:?}"),
                )?;
            }
        } else {
            ensure(sols.is_empty(), format!("p={p}: solutions {sols:?}"))?;
        }
        lines.push(format!("p={p}: {} in {elapsed:.1?}", sols.len()));
    }
    Ok(lines.join(", "))
}

fn relator_computation() -> Outcome {
    let single = BracketExpr::parse("[[a,b],[a,c]]").unwrap();
    let double = BracketExpr::parse("2[[a,b],[a,c]]").unwrap();
    let mut seen = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let pres = shipped("sec5_relators.lie").with_prime(prime(p));
        let start = Instant::now();
        let q = nilpotent_quotient(&pres).map_err(|e| e.to_string())?;
        let once = q.is_zero(&single).map_err(|e| e.to_string())?;
        let twice = q.is_zero(&double).map_err(|e| e.to_string())?;
        within("quotient", start.elapsed(), RELATORS_LIMIT)?;
        ensure(twice, format!("p={p}: 2[[a,b],[a,c]] != 0"))?;
        ensure(
            once == (p != 2),
            format!("p={p}: [[a,b],[a,c]] zero = {once}"),
        )?;
        ensure(
            once == oracle_is_zero(&pres, &single),
            format!("p={p}: associative model disagrees"),
        )?;
        ensure(
            twice == oracle_is_zero(&pres, &double),
            format!("p={p}: associative model disagrees on 2x"),
        )?;
        seen.push(format!("p={p}:{}", if once { "0" } else { "nonzero" }));
    }
    Ok(format!("[[a,b],[a,c]] {}", seen.join(" ")))
}

fn group_engine() -> Outcome {
    let w3 = wreath(2, 3);
    let logs: Vec<usize> = derived_series(&w3).iter().map(|s| s.log_order()).collect();
    ensure(w3.log_order() == 7, format!("|W3| = 2^{}", w3.log_order()))?;
    ensure(logs == [7, 4, 1, 0], format!("W3 derived logs {logs:?}"))?;
    let oracle = PermGroup::generated(8, perm::sylow_generators(2, 3)).derived_orders();
    let ours: Vec<usize> = logs.iter().map(|&l| 1usize << l).collect();
    ensure(
        ours == oracle,
        format!("W3 {ours:?}, permutation oracle {oracle:?}"),
    )?;
    ensure(
        logs[1] - logs[2] == (1 << 1) + 1 && logs[2] > 0,
        "|P'/P''| is not small",
    )?;

    let start = Instant::now();
    let w4 = wreath(2, 4);
    let logs4: Vec<usize> = derived_series(&w4).iter().map(|s| s.log_order()).collect();
    let w4_time = start.elapsed();
    within("W4", w4_time, W4_LIMIT)?;
    ensure(
        logs4.len() >= 4 && logs4[2] - logs4[3] == 5 && logs4[3] > 0,
        format!("W4 derived logs {logs4:?}"),
    )?;
    let oracle = PermGroup::generated(16, perm::sylow_generators(2, 4)).derived_orders();
    let ours: Vec<usize> = logs4.iter().map(|&l| 1usize << l).collect();
    ensure(
        ours == oracle,
        format!("W4 {ours:?}, permutation oracle {oracle:?}"),
    )?;
    Ok(format!("W3 {logs:?}, W4 {logs4:?} in {w4_time:.1?}"))
}

fn identity_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let groups = [
        ("W3", wreath(2, 3)),
        ("W4", wreath(2, 4)),
        ("W(3,2)", wreath(3, 2)),
        ("W(5,2)", wreath(5, 2)),
    ];
    for (name, g) in &groups {
        for _ in 0..IDENTITY_SAMPLES {
            let (x, y, z) = (
                g.random_element(&mut rng),
                g.random_element(&mut rng),
                g.random_element(&mut rng),
            );
            let hw = hall_witt_product(g, &x, &y, &z).map_err(|e| e.to_string())?;
            ensure(
                hw.is_identity(),
                format!("{name}: Hall-Witt fails at {x:?} {y:?} {z:?}"),
            )?;
            let ok = collection_formula_check(g, &x, &y).map_err(|e| e.to_string())?;
            ensure(
                ok,
                format!("{name}: collection formula fails at {x:?} {y:?}"),
            )?;
        }
    }

    let mut algebras = Vec::new();
    algebras.push((
        "example".to_string(),
        nilpotent_quotient(&shipped("sec6_example_p3.lie"))
            .unwrap()
            .into_algebra(),
    ));
    for p in [2u64, 3, 5, 7] {
        let pres = shipped("sec5_relators.lie").with_prime(prime(p));
        algebras.push((
            format!("relators p={p}"),
            nilpotent_quotient(&pres).unwrap().into_algebra(),
        ));
    }
    let free = shipped("free_3gen_class4.lie");
    algebras.push((
        "free".into(),
        nilpotent_quotient(&free).unwrap().into_algebra(),
    ));
    algebras.push((
        "alpha p=3".into(),
        nilpotent_quotient(&alpha_presentation(prime(3), &[0, 0, 0, 0, 2, 0, 0]))
            .unwrap()
            .into_algebra(),
    ));
    let (w3, w4) = (&groups[0].1, &groups[1].1);
    for (name, g, d) in [("W3", w3, 1), ("W4", w4, 2)] {
        algebras.push((format!("{name} K"), build_k(g, d).unwrap().algebra));
        algebras.push((
            format!("{name} Kbar"),
            build_overline_k(g, d).unwrap().algebra,
        ));
        algebras.push((format!("{name} L"), build_l(g, d).unwrap().1));
    }
    algebras.push((
        "W(2,5) lcs".into(),
        lcs_graded_subring(&wreath(2, 5), 0, 4).unwrap().algebra,
    ));
    for (name, alg) in &algebras {
        alg.audit().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{} samples in each of {} groups, {} algebras audited",
        IDENTITY_SAMPLES,
        groups.len(),
        algebras.len()
    ))
}

fn filtration_checks() -> Outcome {
    let g = wreath(2, 3);
    let f = filtration_n(&g, 1).map_err(|e| e.to_string())?;
    f.check_strong_centrality(&g).map_err(|e| e.to_string())?;
    f.check_elementary_quotients(&g)
        .map_err(|e| e.to_string())?;
    f.check_intersection_identity(&g)
        .map_err(|e| e.to_string())?;
    let report = classify_small_quotient(&g, 1).map_err(|e| e.to_string())?;
    ensure(
        report.case == SmallQuotientCase::Two,
        format!("case {:?}", report.case),
    )?;

    // the same filtration on the permutation model
    let whole = PermGroup::generated(8, perm::sylow_generators(2, 3));
    let by = whole.gens.clone();
    let derived = whole.derived();
    let second = derived.derived();
    let mut n = vec![derived.clone()];
    while n.last().unwrap().order() > 1 {
        let next = n.last().unwrap().commutator_with(&whole, &by);
        n.push(next);
    }
    // n[i] is N_{i+2}
    let oracle_logs: Vec<(usize, usize)> = n
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            (
                i + 2,
                (w[0].order() / w[1].order()).trailing_zeros() as usize,
            )
        })
        .collect();
    ensure(
        f.quotient_logs() == oracle_logs,
        format!("logs {:?}, oracle {oracle_logs:?}", f.quotient_logs()),
    )?;
    for i in 0..n.len() {
        for j in 0..n.len() {
            let c = n[i].commutator_with(&n[j], &by);
            let target = n
                .get(i + j + 2)
                .cloned()
                .unwrap_or_else(|| PermGroup::generated(8, Vec::new()));
            ensure(
                c.is_subgroup_of(&target),
                format!("[N_{}, N_{}] not in N_{}", i + 2, j + 2, i + j + 4),
            )?;
        }
    }
    for w in n.windows(2) {
        ensure(
            w[0].elements
                .iter()
                .all(|x| w[1].contains(&perm::compose(x, x))),
            "quotient not elementary",
        )?;
    }
    let gamma2 = whole.commutator_with(&whole, &by);
    let gamma3 = gamma2.commutator_with(&whole, &by);
    ensure(
        n[1].order() == derived.intersection(&gamma3).order(),
        "N_3 != G' ∩ γ_3",
    )?;
    ensure(n[0].order() / n[1].order() == 4, "|G'/N_3| != p^2")?;
    ensure(n[1].order() / n[2].order() == 2, "|N_3/N_4| != p")?;
    ensure(n[2].elements == second.elements, "G'' != N_4")?;
    Ok(format!("logs {oracle_logs:?}, case (ii)"))
}

/// Branch totals from the closed forms stated for each branch.
fn stated_totals(d: usize) -> Vec<i64> {
    let p = |e: usize| 1i64 << e;
    let di = d as i64;
    let mut out = vec![
        p(d) + p(d - 2) + di - 1,
        p(d) + p(d - 3) + di,
        p(d) + p(d - 4) + di + 2,
    ];
    for k in 3..=d + 1 {
        let ki = k as i64;
        out.push(match d as i64 - ki {
            -1 => p(d) + 3 * di + 1,
            0 => p(d) + 3 * di - 2,
            1 => p(d) + 3 * di - 4,
            2 => p(d) + 3 * di - 5,
            3 => p(k + 3) + 3 * ki + 3,
            _ => p(d) + 3 * di - 6,
        });
    }
    out
}

fn replay() -> Outcome {
    let start = Instant::now();
    let profiles: Result<Vec<_>, _> = (5..=20).map(section7_verify).collect();
    let elapsed = start.elapsed();
    let profiles = profiles.map_err(|e| e.to_string())?;
    within("replay", elapsed, REPLAY_LIMIT)?;
    for prof in &profiles {
        let d = prof.d;
        let main = (1i64 << d) + 3 * d as i64 - 6;
        let totals: Vec<i64> = prof.branches.iter().map(|b| b.total).collect();
        let stated = stated_totals(d);
        ensure(
            totals == stated,
            format!("d={d}: totals {totals:?}, stated {stated:?}"),
        )?;
        ensure(
            stated.iter().all(|&t| t >= main),
            format!("d={d}: a branch is below {main}"),
        )?;
        ensure(
            prof.minimum == *stated.iter().min().unwrap(),
            format!("d={d}: minimum {}", prof.minimum),
        )?;
        if d >= 6 {
            let k = d - 3;
            let b = &prof.branches[k];
            ensure(
                b.case == "d=k+3",
                format!("d={d}: branch {k} is {}", b.case),
            )?;
            ensure(
                b.total == (1i64 << (k + 3)) + 3 * k as i64 + 3 && b.total == main,
                format!("d={d}: terminal identity"),
            )?;
        }
    }
    Ok(format!("d in 5..=20 in {elapsed:?}"))
}

fn bounds_table() -> Outcome {
    ensure(hall_bound(3) == 11, format!("hall(3) = {}", hall_bound(3)))?;
    for d in 1..=40usize {
        let pow = 2i64.pow(d as u32);
        let di = d as i64;
        let mann = mann_bound(d).map_err(|e| e.to_string())?;
        let main = main_bound(d).map_err(|e| e.to_string())?;
        ensure(mann == pow + 2 * di - 2, format!("mann({d}) = {mann}"))?;
        ensure(main == pow + 3 * di - 6, format!("main({d}) = {main}"))?;
        ensure(
            (main > mann) == (d >= 5),
            format!("d={d}: main {main}, mann {mann}"),
        )?;
    }
    Ok("hall(3) = 11; main > mann exactly for d >= 5".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("free Lie dimensions", free_lie_dimensions),
        ("example reproduction", example_reproduction),
        ("parameter search", parameter_search),
        ("relator computation", relator_computation),
        ("group engine", group_engine),
        ("identity suites", identity_suites),
        ("filtration checks", filtration_checks),
        ("case-analysis replay", replay),
        ("bounds table", bounds_table),
    ];
    println!();
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
