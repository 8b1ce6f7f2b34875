//! Command-line front-end: run mechanisms on bid files, execute property
//! suites, and launch experiments.
//!
//! Exit codes: 0 on success, 1 when a checked property fails (or an
//! expected failure does not materialize), 2 on usage or input errors.
//! Identical command lines over identical inputs produce identical bytes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use admission::experiments::{
    admittance_sweep, estimate_divergence, sample_profile, tight_scalability_instance, trial_rng,
    worst_case_astar_instance,
};
use admission::io;
use admission::mechanisms::{self, abar, astar, omniscient, Mechanism};
use admission::scalar::parse_rate;
use admission::verifier::{
    brute_force_ic, check_all_or_none, check_feasibility, check_permutation_equivariance,
    check_scalability, extract_win_interval, grid_utility_family, BidGrid, PropertyReport,
};
use admission::verifier::check_monotonicity;
use admission::{BidProfile, DropSchedule, Error, Rate};

#[derive(Parser)]
#[command(
    name = "admission",
    version,
    about = "Strategy-proof admission auctions for a capacity-one access point"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on a bid-profile file and print the exact result.
    Run(RunArgs),
    /// Run a property suite and print one JSON report per line.
    Verify(VerifyArgs),
    /// Run an experiment, print its JSON summary, and optionally write
    /// CSV/JSON artifacts.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Mechanism: abar, astar, f, or t.
    #[arg(long)]
    mech: String,
    /// Bid-profile JSON file: {"capacity": "10", "bids": ["5", "4"]}.
    #[arg(long)]
    bids: PathBuf,
    /// Constant drop parameter applied at every rank (default 0.1).
    #[arg(long)]
    drop: Option<String>,
    /// Per-rank drop parameters from a JSON file: {"d": ["0.1", "0.2"]}.
    #[arg(long, conflicts_with = "drop")]
    drop_file: Option<PathBuf>,
    /// Draw a single outcome from the distribution instead of printing it.
    #[arg(long, requires = "seed")]
    sample: bool,
    /// Seed for --sample.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: feasibility, ic, weak-ic, monotonicity, scalability,
    /// all-or-none, anonymity, or win-interval.
    #[arg(long)]
    suite: String,
    /// Mechanism under test (required by feasibility, ic, weak-ic,
    /// monotonicity, and anonymity).
    #[arg(long)]
    mech: Option<String>,
    /// Bid-profile file to check (for win-interval: the other users' bids).
    #[arg(long)]
    bids: Option<PathBuf>,
    /// Number of users for grid and random checks (default 3).
    #[arg(long)]
    n: Option<usize>,
    /// Grid step of the form 1/k (default 1/20; win-interval 1/1000).
    #[arg(long)]
    grid: Option<String>,
    /// Constant drop parameter (default 0.1).
    #[arg(long)]
    drop: Option<String>,
    /// Per-rank drop parameters from a JSON file.
    #[arg(long, conflicts_with = "drop")]
    drop_file: Option<PathBuf>,
    /// Check this many uniform random profiles instead of a bid file.
    #[arg(long)]
    random: Option<u64>,
    /// Seed for random profiles (default 0).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Expect the property to fail; exit 0 only if it does.
    #[arg(long)]
    expect_fail: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment: divergence, sweep, tight-instance, or worst-case.
    name: String,
    /// Number of users.
    #[arg(long)]
    n: Option<usize>,
    /// Instance parameter m.
    #[arg(long)]
    m: Option<usize>,
    /// Constant drop parameter (default 0.1).
    #[arg(long)]
    d: Option<String>,
    /// Number of Monte Carlo samples.
    #[arg(long)]
    samples: Option<u64>,
    /// Seed for the sample stream (default 0).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory to write CSV/JSON artifacts into.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_profile(path: &Path) -> Result<BidProfile, Error> {
    io::parse_bid_file(&read_file(path)?)
}

/// Resolves the drop schedule for an `n`-user profile: an explicit file, a
/// constant value, or the default constant 0.1.
fn resolve_drops(
    drop: &Option<String>,
    drop_file: &Option<PathBuf>,
    n: usize,
) -> Result<DropSchedule, Error> {
    if let Some(path) = drop_file {
        let schedule = io::parse_drop_file(&read_file(path)?)?;
        schedule.require_users(n)?;
        return Ok(schedule);
    }
    let value: Rate = match drop {
        Some(text) => parse_rate(text)?,
        None => parse_rate("0.1").expect("default drop parses"),
    };
    DropSchedule::uniform(value, n.saturating_sub(1))
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn cmd_run(args: RunArgs) -> Result<u8, Error> {
    let mechanism = Mechanism::parse(&args.mech)?;
    let profile = load_profile(&args.bids)?;
    let n = profile.len();
    let drops = resolve_drops(&args.drop, &args.drop_file, n)?;
    let dist = mechanisms::run_distribution(mechanism, &profile, Some(&drops))?;
    if args.sample {
        let seed = args.seed.expect("clap enforces --seed with --sample");
        emit(&io::sampled_json(mechanism, n, seed, dist.sample(seed)));
    } else if mechanism.is_deterministic() {
        emit(&io::outcome_json(mechanism, n, &dist.entries()[0].0));
    } else {
        emit(&io::distribution_json(mechanism, n, &dist));
    }
    Ok(0)
}

fn require_mech(mech: &Option<String>) -> Result<Mechanism, Error> {
    match mech {
        Some(m) => Mechanism::parse(m),
        None => Err(Error::InvalidParameter(
            "this suite requires --mech".into(),
        )),
    }
}

/// The profiles a verify suite runs over: one from a file, or a seeded
/// uniform random stream.
enum ProfileSource {
    File(BidProfile),
    Random { count: u64, n: usize, seed: u64 },
}

impl ProfileSource {
    fn resolve(args: &VerifyArgs) -> Result<Self, Error> {
        match (&args.bids, args.random) {
            (Some(path), None) => Ok(ProfileSource::File(load_profile(path)?)),
            (None, Some(count)) => Ok(ProfileSource::Random {
                count,
                n: args.n.unwrap_or(3),
                seed: args.seed,
            }),
            (None, None) => Err(Error::InvalidParameter(
                "this suite requires --bids or --random".into(),
            )),
            (Some(_), Some(_)) => Err(Error::InvalidParameter(
                "--bids and --random are mutually exclusive".into(),
            )),
        }
    }

    fn for_each(
        self,
        mut f: impl FnMut(&BidProfile) -> Result<PropertyReport, Error>,
    ) -> Result<PropertyReport, Error> {
        match self {
            ProfileSource::File(profile) => f(&profile),
            ProfileSource::Random { count, n, seed } => {
                let mut cases = 0u64;
                let mut last_id = String::new();
                for trial in 0..count {
                    let mut rng = trial_rng(seed, trial);
                    let profile = sample_profile(n, &mut rng);
                    let report = f(&profile)?;
                    cases += report.cases;
                    last_id = report.property_id.clone();
                    if !report.passed {
                        return Ok(PropertyReport { cases, ..report });
                    }
                }
                Ok(PropertyReport {
                    property_id: last_id,
                    mechanism: None,
                    passed: true,
                    cases,
                    counterexample: None,
                })
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    let grid_default = |d: &str| BidGrid::parse(d).expect("default grid parses");
    let grid = match &args.grid {
        Some(text) => BidGrid::parse(text)?,
        None => grid_default(if args.suite == "win-interval" {
            "1/1000"
        } else {
            "1/20"
        }),
    };
    if grid.denominator() < 2 {
        return Err(Error::InvalidParameter(
            "--grid must be 1/k with k >= 2".into(),
        ));
    }
    let n = args.n.unwrap_or(3);
    if n == 0 {
        return Err(Error::InvalidParameter("need --n of at least 1".into()));
    }

    let report: PropertyReport = match args.suite.as_str() {
        "ic" | "weak-ic" => {
            let mechanism = require_mech(&args.mech)?;
            let drops = resolve_drops(&args.drop, &args.drop_file, n)?;
            let utilities = grid_utility_family(&grid);
            brute_force_ic(
                mechanism,
                &grid,
                n,
                &utilities,
                Some(&drops),
                args.suite == "weak-ic",
            )?
        }
        "monotonicity" => {
            let mechanism = require_mech(&args.mech)?;
            let drops = resolve_drops(&args.drop, &args.drop_file, n)?;
            check_monotonicity(mechanism, &grid, n, Some(&drops))?
        }
        "feasibility" => {
            let mechanism = require_mech(&args.mech)?;
            let drop = args.drop.clone();
            let drop_file = args.drop_file.clone();
            ProfileSource::resolve(&args)?.for_each(|profile| {
                let drops = resolve_drops(&drop, &drop_file, profile.len())?;
                check_feasibility(mechanism, profile, Some(&drops))
            })?
        }
        "scalability" => {
            ProfileSource::resolve(&args)?.for_each(|profile| Ok(check_scalability(profile)))?
        }
        "all-or-none" => {
            let drop = args.drop.clone();
            let drop_file = args.drop_file.clone();
            ProfileSource::resolve(&args)?.for_each(|profile| {
                let drops = resolve_drops(&drop, &drop_file, profile.len())?;
                check_all_or_none(profile, &drops)
            })?
        }
        "anonymity" => {
            let mechanism = require_mech(&args.mech)?;
            let drop = args.drop.clone();
            let drop_file = args.drop_file.clone();
            let seed = args.seed;
            ProfileSource::resolve(&args)?.for_each(|profile| {
                let drops = resolve_drops(&drop, &drop_file, profile.len())?;
                check_permutation_equivariance(mechanism, profile, Some(&drops), 24, seed)
            })?
        }
        "win-interval" => {
            let drop = args.drop.clone();
            let drop_file = args.drop_file.clone();
            match ProfileSource::resolve(&args)? {
                ProfileSource::File(others_profile) => {
                    let others = others_profile.bids().to_vec();
                    let drops = resolve_drops(&drop, &drop_file, others.len() + 1)?;
                    let (_, report) =
                        extract_win_interval(Mechanism::Astar, &others, &grid, Some(&drops))?;
                    report
                }
                ProfileSource::Random { count, n, seed } => {
                    let mut cases = 0u64;
                    let mut aggregated: Option<PropertyReport> = None;
                    for trial in 0..count {
                        let others: Vec<Rate> = if n == 1 {
                            Vec::new()
                        } else {
                            let mut rng = trial_rng(seed, trial);
                            sample_profile::<admission::Int>(n - 1, &mut rng)
                                .bids()
                                .to_vec()
                        };
                        let drops = resolve_drops(&drop, &drop_file, others.len() + 1)?;
                        let (_, report) =
                            extract_win_interval(Mechanism::Astar, &others, &grid, Some(&drops))?;
                        cases += report.cases;
                        let failed = !report.passed;
                        aggregated = Some(PropertyReport { cases, ..report });
                        if failed {
                            break;
                        }
                    }
                    aggregated.ok_or_else(|| {
                        Error::InvalidParameter("need --random of at least 1".into())
                    })?
                }
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown suite `{other}` (expected feasibility, ic, weak-ic, monotonicity, \
                 scalability, all-or-none, anonymity, or win-interval)"
            )));
        }
    };

    emit(&io::report_json(&args.suite, &report, args.expect_fail));
    Ok(u8::from(report.passed == args.expect_fail))
}

fn write_artifact(out: &Option<PathBuf>, name: &str, contents: &str) -> Result<(), Error> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<u8, Error> {
    let drop_value: Rate = match &args.d {
        Some(text) => parse_rate(text)?,
        None => parse_rate("0.1").expect("default drop parses"),
    };
    match args.name.as_str() {
        "divergence" => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("divergence requires --n".into()))?;
            let samples = args.samples.unwrap_or(100_000);
            let drops = DropSchedule::uniform(drop_value, n.saturating_sub(1))?;
            let run = estimate_divergence(n, &drops, samples, args.seed)?;
            let summary = io::divergence_json(&run, args.seed);
            write_artifact(&args.out, "divergence.csv", &io::divergence_csv(&run))?;
            write_artifact(
                &args.out,
                "divergence.json",
                &serde_json::to_string(&summary).expect("serializable"),
            )?;
            emit(&summary);
            Ok(u8::from(!run.estimate.within_bound()))
        }
        "sweep" => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("sweep requires --n".into()))?;
            let samples = args.samples.unwrap_or(1000);
            let drops = DropSchedule::uniform(drop_value, n.saturating_sub(1))?;
            let sweep = admittance_sweep(n, samples, args.seed, &drops)?;
            let conforming = sweep.rows.iter().all(|row| {
                row.single_price.clone() - Rate::from_integer(1.into()) <= row.abar
                    && row.abar <= row.single_price
                    && row.abar >= (row.multi_price.clone() / Rate::from_integer(2.into())).floor()
            });
            let summary = io::sweep_json(&sweep, &drops.max_drop());
            write_artifact(&args.out, "sweep.csv", &io::sweep_csv(&sweep))?;
            write_artifact(
                &args.out,
                "sweep.json",
                &serde_json::to_string(&summary).expect("serializable"),
            )?;
            emit(&summary);
            Ok(u8::from(!conforming))
        }
        "tight-instance" => {
            let m = args
                .m
                .ok_or_else(|| Error::InvalidParameter("tight-instance requires --m".into()))?;
            let profile: BidProfile = tight_scalability_instance(m)?;
            let summary = io::tight_instance_json(
                m,
                &profile,
                abar::admitted_count(&profile),
                omniscient::multi_price_count(&profile),
            );
            write_artifact(
                &args.out,
                "tight_instance.json",
                &serde_json::to_string(&summary).expect("serializable"),
            )?;
            emit(&summary);
            Ok(u8::from(summary["passed"] != serde_json::Value::Bool(true)))
        }
        "worst-case" => {
            let n = args
                .n
                .ok_or_else(|| Error::InvalidParameter("worst-case requires --n".into()))?;
            let m = args
                .m
                .ok_or_else(|| Error::InvalidParameter("worst-case requires --m".into()))?;
            let profile: BidProfile = worst_case_astar_instance(n, m)?;
            let drops = DropSchedule::uniform(drop_value, n.saturating_sub(1))?;
            let summary = io::worst_case_json(
                n,
                m,
                &profile,
                astar::run(&profile, &drops)?.winner_count(),
                omniscient::single_price_count(&profile),
            );
            write_artifact(
                &args.out,
                "worst_case.json",
                &serde_json::to_string(&summary).expect("serializable"),
            )?;
            emit(&summary);
            Ok(u8::from(summary["passed"] != serde_json::Value::Bool(true)))
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown experiment `{other}` (expected divergence, sweep, tight-instance, or \
             worst-case)"
        ))),
    }
}
