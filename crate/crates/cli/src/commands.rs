//! Command implementations. Each returns a finished [`RunReport`] or a [`CliError`].

use std::path::Path;

use derived_series::bounds::{
    bounds_table, p3_dichotomy_check, section7_verify, DichotomyInput, DichotomyVerdict,
};
use derived_series::field_linalg::Prime;
use derived_series::free_lie::{witt_dimension, BracketExpr, FreeLieAlgebra};
use derived_series::graded_bridge::{build_k, build_l, lcs_graded_subring, BridgeError};
use derived_series::lie_nq::{nilpotent_quotient, LiePresentation, NqError};
use derived_series::pc_group::{
    build_wreath, classify_small_quotient, derived_series, filtration_n, lower_central_series,
    PcError, PcGroup, PcParseError, SmallQuotientCase, Subgroup,
};
use serde::Serialize;

use crate::report::Run;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input. Exit code 2.
    Usage(String),
    /// The input is well formed but a required check failed. Exit code 1.
    Failure(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn prime(p: u64) -> CliResult<Prime> {
    Prime::new(p).map_err(|e| CliError::Usage(format!("--p {p}: {e}")))
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

pub fn freelie_dims(run: &mut Run, gens: usize, class: usize, p: u64) -> CliResult<()> {
    run.input("gens", &gens.to_string());
    run.input("class", &class.to_string());
    run.input("p", &p.to_string());
    let free = run.timed("basis", |_| {
        FreeLieAlgebra::with_unit_weights(prime(p)?, gens, class)
            .map_err(|e| CliError::Usage(e.to_string()))
    })?;
    let dims = free.dims();
    for (w, &dim) in dims.iter().enumerate() {
        let w = w + 1;
        let witt =
            witt_dimension(gens as u64, w as u32).map_err(|e| CliError::Usage(e.to_string()))?;
        run.check(
            format!("witt weight {w}"),
            witt == dim as u64,
            format!("basis has {dim} elements, Witt formula gives {witt}"),
        );
    }
    run.data("prime", p);
    run.data("gens", gens);
    run.data("class", class);
    run.data("dims", &dims);
    Ok(())
}

#[derive(Serialize)]
struct Evaluation {
    expr: String,
    value: String,
    zero: bool,
}

pub fn nq_run(run: &mut Run, path: &Path, p: Option<u64>, evals: &[String]) -> CliResult<()> {
    let src = read(path)?;
    run.input("presentation", &src);
    let mut pres = LiePresentation::parse(&src)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file_name(path))))?;
    if let Some(p) = p {
        run.input("p", &p.to_string());
        pres = pres.with_prime(prime(p)?);
    }
    for e in evals {
        run.input("eval", e);
        let expr =
            BracketExpr::parse(e).map_err(|err| CliError::Usage(format!("--eval '{e}': {err}")))?;
        pres.evaluations.push(expr);
    }
    let q = run
        .timed("quotient", |_| nilpotent_quotient(&pres))
        .map_err(|e| match e {
            NqError::InhomogeneousRelator(_) => {
                CliError::Usage(format!("{}: {e}", file_name(path)))
            }
            other => CliError::Failure(other.to_string()),
        })?;
    let alg = q.algebra();
    let class = pres.class;
    run.check(
        "jacobi",
        alg.audit().is_ok(),
        "antisymmetry and Jacobi on all basis triples",
    );
    let mut evaluations = Vec::new();
    for expr in &pres.evaluations {
        let v = q
            .evaluate(expr)
            .map_err(|e| CliError::Usage(format!("eval {expr}: {e}")))?;
        evaluations.push(Evaluation {
            expr: expr.to_string(),
            value: alg.format_vector(&v),
            zero: v.iter().all(|&c| c == 0),
        });
    }
    run.data("input", file_name(path));
    run.data("prime", pres.prime.get());
    run.data("class", class);
    run.data("dims", alg.dims());
    run.data("free_dims", q.free_dims());
    run.data("derived_dims", alg.derived_subalgebra(1).dims(class));
    run.data("second_derived_dims", alg.derived_subalgebra(2).dims(class));
    run.data("evaluations", &evaluations);
    run.data("structure", alg.snapshot());
    Ok(())
}

pub enum GroupSource {
    File(std::path::PathBuf),
    Wreath(u64, usize),
}

fn load_group(run: &mut Run, source: &GroupSource) -> CliResult<(PcGroup, String)> {
    match source {
        GroupSource::File(path) => {
            let src = read(path)?;
            run.input("presentation", &src);
            let g = PcGroup::parse(&src).map_err(|e| match e {
                PcParseError::Invalid(err @ PcError::Inconsistent(_)) => {
                    CliError::Failure(format!("{}: {err}", file_name(path)))
                }
                other => CliError::Usage(format!("{}: {other}", file_name(path))),
            })?;
            Ok((g, file_name(path)))
        }
        GroupSource::Wreath(p, n) => {
            run.input("wreath", &format!("{p},{n}"));
            let w = build_wreath(prime(*p)?, *n).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((w.group().clone(), format!("wreath {p},{n}")))
        }
    }
}

fn logs(series: &[Subgroup]) -> Vec<usize> {
    let mut out: Vec<usize> = series.iter().map(Subgroup::log_order).collect();
    if out.last() != Some(&0) {
        out.push(0);
    }
    out
}

fn bridge_failure(e: BridgeError) -> CliError {
    CliError::Failure(e.to_string())
}

pub fn group_analyze(run: &mut Run, source: &GroupSource, d: Option<usize>) -> CliResult<()> {
    let (g, name) = load_group(run, source)?;
    let consistent = g.check_consistency();
    run.check(
        "consistency",
        consistent.is_ok(),
        consistent.as_ref().map_or_else(
            |e| e.to_string(),
            |_| "all overlaps collect to the same word".into(),
        ),
    );
    consistent.map_err(|e| CliError::Failure(e.to_string()))?;
    let ds = derived_series(&g);
    let lcs = lower_central_series(&g);
    let ds_logs = logs(&ds);
    run.data("input", name);
    run.data("prime", g.prime().get());
    run.data("log_order", g.log_order());
    run.data("derived_series_logs", &ds_logs);
    run.data("derived_length", ds_logs.len() - 1);
    run.data("lower_central_series_logs", logs(&lcs));
    let Some(d) = d else {
        return Ok(());
    };
    run.input("d", &d.to_string());
    if ds.get(d).is_none_or(Subgroup::is_trivial) {
        return Err(CliError::Failure(format!("G^({d}) is trivial")));
    }
    run.data("d", d);

    let f = filtration_n(&g, d).map_err(|e| CliError::Failure(e.to_string()))?;
    run.data("filtration_logs", f.quotient_logs());
    let r = f.check_strong_centrality(&g);
    run.check(
        "strong centrality",
        r.is_ok(),
        r.map_or_else(|e| e.to_string(), |_| "[N_i, N_j] <= N_{i+j}".into()),
    );
    let r = f.check_elementary_quotients(&g);
    run.check(
        "elementary quotients",
        r.is_ok(),
        r.map_or_else(|e| e.to_string(), |_| "N_i/N_{i+1} has exponent p".into()),
    );
    let r = f.check_intersection_identity(&g);
    run.check(
        "intersection identity",
        r.is_ok(),
        r.map_or_else(
            |e| e.to_string(),
            |_| "N_{2^d+1} = G^(d) ∩ γ_{2^d+1}(G)".into(),
        ),
    );

    let k = build_k(&g, d).map_err(bridge_failure)?;
    run.data("k_dims", k.dims());

    let small = classify_small_quotient(&g, d);
    match &small {
        Ok(report) => {
            run.check(
                "small derived quotient",
                true,
                format!(
                    "|G^({d})/G^({})| = p^{} and G^({}) != 1",
                    d + 1,
                    report.derived_quotient_log,
                    d + 1
                ),
            );
            run.data("small_quotient", report);
        }
        Err(PcError::NotSmall {
            measured, expected, ..
        }) => {
            run.inapplicable(
                "small derived quotient",
                format!(
                    "|G^({d})/G^({})| = p^{measured}, small needs p^{expected} with G^({}) != 1",
                    d + 1,
                    d + 1
                ),
            );
        }
        Err(e) => {
            run.check("small derived quotient", false, e.to_string());
        }
    }
    match (&small, d) {
        (Ok(report), 1..) if report.case == SmallQuotientCase::Two => {
            let (kbar, l) = build_l(&g, d).map_err(bridge_failure)?;
            run.check(
                "jacobi on L",
                l.audit().is_ok(),
                "antisymmetry and Jacobi on all basis triples",
            );
            run.data("kbar_dims", kbar.dims());
            run.data("l_dims", l.dims());
        }
        (Ok(_), 1..) => run.inapplicable(
            "graded algebra L",
            "case (i): L is defined in case (ii) only",
        ),
        (Ok(_), 0) => run.inapplicable("graded algebra L", "needs d >= 1"),
        _ => run.inapplicable("graded algebra L", "G^(d)/G^(d+1) is not small"),
    }

    match lcs_graded_subring(&g, d, 4) {
        Ok(sub) => {
            run.data("lcs_subring_dims", sub.algebra.dims());
            let input = DichotomyInput::from(&sub);
            match p3_dichotomy_check(&input) {
                DichotomyVerdict::Holds { first, third } => run.check(
                    "p3 dichotomy",
                    true,
                    format!("first horn {first}, third horn {third}"),
                ),
                DichotomyVerdict::Violated => {
                    run.check("p3 dichotomy", false, "neither horn holds")
                }
                DichotomyVerdict::Inapplicable { reason } => {
                    run.inapplicable("p3 dichotomy", reason);
                    true
                }
            };
            run.data("dichotomy_input", input);
        }
        Err(BridgeError::NotElementary(why)) => run.inapplicable("p3 dichotomy", why),
        Err(e) => return Err(bridge_failure(e)),
    }
    Ok(())
}

pub fn bounds_table_cmd(run: &mut Run, d_min: usize, d_max: usize) -> CliResult<()> {
    if d_min > d_max {
        return Err(CliError::Usage(format!(
            "--d-min {d_min} exceeds --d-max {d_max}"
        )));
    }
    if d_max > 60 {
        return Err(CliError::Usage(
            "--d-max above 60 overflows 64-bit bounds".into(),
        ));
    }
    run.input("d_min", &d_min.to_string());
    run.input("d_max", &d_max.to_string());
    let rows = bounds_table(d_min, d_max);
    for r in &rows {
        if let (Some(main), Some(mann)) = (r.main, r.mann) {
            let d = r.d;
            let (ok, rel) = match d {
                0..=3 => (main < mann, "<"),
                4 => (main == mann, "="),
                _ => (main > mann, ">"),
            };
            run.check(
                format!("main vs mann d={d}"),
                ok,
                format!("main {main} {rel} mann {mann}"),
            );
        }
    }
    run.data("rows", &rows);
    Ok(())
}

pub fn bounds_replay(run: &mut Run, d: usize) -> CliResult<()> {
    run.input("d", &d.to_string());
    if d > 60 {
        return Err(CliError::Usage(
            "--d above 60 overflows 64-bit bounds".into(),
        ));
    }
    match section7_verify(d) {
        Ok(profile) => {
            run.check(
                format!("replay d={d}"),
                profile.minimum >= profile.main,
                format!(
                    "minimum {} over {} branches, bound {}",
                    profile.minimum,
                    profile.branches.len(),
                    profile.main
                ),
            );
            run.data("profile", profile);
            Ok(())
        }
        Err(e @ derived_series::bounds::BoundsError::DTooSmall { .. }) => {
            Err(CliError::Usage(e.to_string()))
        }
        Err(e) => {
            run.check(format!("replay d={d}"), false, e.to_string());
            Ok(())
        }
    }
}
