//! `dseries`: verification runs and data emission for the derived-series toolkit.

mod commands;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, GroupSource};
use report::Run;
use suites::Suite;

#[derive(Parser)]
#[command(
    name = "dseries",
    version,
    about = "Graded Lie algebras, p-group series and derived-series bounds"
)]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Free Lie algebras.
    #[command(subcommand)]
    Freelie(FreelieCmd),
    /// Nilpotent quotients of graded Lie presentations.
    #[command(subcommand)]
    Nq(NqCmd),
    /// Run a fixed verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Polycyclic p-groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Closed-form bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Subcommand)]
enum FreelieCmd {
    /// Per-weight dimensions of the free Lie algebra on unit-weight generators.
    Dims {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        gens: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        class: u64,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum NqCmd {
    /// Compute the quotient of a `.lie` presentation.
    Run {
        file: PathBuf,
        /// Override the field characteristic in the file.
        #[arg(long)]
        p: Option<u64>,
        /// Extra element to evaluate in the quotient; repeatable.
        #[arg(long = "eval", value_name = "EXPR")]
        evals: Vec<String>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Series, filtration, classification and graded rings of a group.
    Analyze {
        /// A `.pc` presentation.
        #[arg(required_unless_present = "wreath", conflicts_with = "wreath")]
        file: Option<PathBuf>,
        /// Iterated wreath product of `n` copies of C_p, given as `p,n`.
        #[arg(long, value_name = "P,N")]
        wreath: Option<String>,
        /// Derived term to analyze.
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Hall, Mann and main bounds per derived length.
    Table {
        #[arg(long, default_value_t = 1)]
        d_min: usize,
        #[arg(long, default_value_t = 12)]
        d_max: usize,
    },
    /// Line-by-line replay of the case analysis for one `d >= 5`.
    Replay {
        #[arg(long)]
        d: usize,
    },
}

fn parse_wreath(s: &str) -> Result<(u64, usize), CliError> {
    let bad = || CliError::Usage(format!("--wreath '{s}': expected P,N"));
    let (p, n) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        p.trim().parse().map_err(|_| bad())?,
        n.trim().parse().map_err(|_| bad())?,
    ))
}

fn dispatch(command: &Command, timings: bool) -> Result<Run, CliError> {
    let start = Instant::now();
    let mut run = match command {
        Command::Freelie(FreelieCmd::Dims { gens, class, p }) => {
            let mut run = Run::new("freelie dims", timings);
            commands::freelie_dims(&mut run, *gens as usize, *class as usize, *p)?;
            run
        }
        Command::Nq(NqCmd::Run { file, p, evals }) => {
            let mut run = Run::new("nq run", timings);
            commands::nq_run(&mut run, file, *p, evals)?;
            run
        }
        Command::Verify { suite } => {
            let mut run = Run::new(
                &format!("verify {}", format!("{suite:?}").to_lowercase()),
                timings,
            );
            suites::verify(&mut run, *suite)?;
            run
        }
        Command::Group(GroupCmd::Analyze { file, wreath, d }) => {
            let source = match (file, wreath) {
                (Some(f), _) => GroupSource::File(f.clone()),
                (None, Some(w)) => {
                    let (p, n) = parse_wreath(w)?;
                    GroupSource::Wreath(p, n)
                }
                (None, None) => return Err(CliError::Usage("give a file or --wreath".into())),
            };
            let mut run = Run::new("group analyze", timings);
            commands::group_analyze(&mut run, &source, *d)?;
            run
        }
        Command::Bounds(BoundsCmd::Table { d_min, d_max }) => {
            let mut run = Run::new("bounds table", timings);
            commands::bounds_table_cmd(&mut run, *d_min, *d_max)?;
            run
        }
        Command::Bounds(BoundsCmd::Replay { d }) => {
            let mut run = Run::new("bounds replay", timings);
            commands::bounds_replay(&mut run, *d)?;
            run
        }
    };
    run.record_time("total", start.elapsed().as_secs_f64() * 1e3);
    Ok(run)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match dispatch(&cli.command, cli.out.timings) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Failure(_) => 1,
            });
        }
    };
    let mut artifacts = Vec::new();
    if let Some(path) = &cli.out.out {
        artifacts.push(path.display().to_string());
    }
    let report = run.finish(artifacts);
    if let Some(path) = &cli.out.out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if cli.out.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    let failed = report.failed();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        ExitCode::from(1)
    }
}
