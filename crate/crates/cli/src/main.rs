//! tiecop: copula estimation and goodness-of-fit for bivariate data with
//! ties, interval-censored at the rank level.
//!
//! Exit codes: 0 success, 2 input problem, 3 numerical failure.

mod data;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use tiecop::{
    bootstrap_ci, fit_average_rank, fit_censoring, fit_random_break, gof_test, run_scenario,
    CensoredData, Error, Family, ScenarioConfig, Seed, TieStrategy,
};

#[derive(Parser)]
#[command(name = "tiecop", version, about = "Copula fitting for tied bivariate data")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit a copula family by maximum pseudo-likelihood
    Fit(FitArgs),
    /// Bootstrap confidence interval for the fitted parameter
    Ci(CiArgs),
    /// Goodness-of-fit test with a tie-preserving bootstrap
    Gof(GofArgs),
    /// Run a Monte Carlo scenario from a config file
    Simulate(SimArgs),
}

#[derive(Args)]
struct DataArgs {
    /// CSV file holding the bivariate sample
    data: PathBuf,
    /// Column for the first margin: 0-based index or header name
    #[arg(long, default_value = "0")]
    col_x: String,
    /// Column for the second margin: 0-based index or header name
    #[arg(long, default_value = "1")]
    col_y: String,
    /// Treat the first row as a header
    #[arg(long)]
    header: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataArgs,
    /// clayton, survival-clayton, gumbel, or gaussian
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Optional optimizer starting point on the tau scale
    #[arg(long)]
    tau0: Option<f64>,
    /// Estimator: censoring, average-rank, or random-break
    #[arg(long, default_value = "censoring")]
    method: String,
    /// Rank completions for the random-break estimator
    #[arg(long, default_value_t = 100)]
    m: usize,
    /// Root seed for stochastic estimators
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CiArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    tau0: Option<f64>,
    /// Bootstrap replicates (at least 100)
    #[arg(long, default_value_t = 1000)]
    b: u32,
    /// Interval level is 1 - alpha
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GofArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long)]
    tau0: Option<f64>,
    /// Bootstrap replicates (at least 100)
    #[arg(long, default_value_t = 1000)]
    b: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report (count + 1) / (B + 1) instead of count / B
    #[arg(long)]
    plus_one: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    /// Scenario config file (flat key = value lines)
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON aggregate here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write replicate-level rows to this CSV file
    #[arg(long)]
    records: Option<PathBuf>,
}

/// Input problems exit with 2, numerical failures with 3.
enum Fail {
    Input(String),
    Numerical(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Numerical(_) | Error::BootstrapUnstable { .. } => Fail::Numerical(e.to_string()),
            _ => Fail::Input(e.to_string()),
        }
    }
}

fn load(args: &DataArgs) -> Result<(data::Dataset, CensoredData), Fail> {
    let ds = data::load_csv(&args.data, &args.col_x, &args.col_y, args.header)
        .map_err(Fail::Input)?;
    let cd = CensoredData::from_raw(&ds.x, &ds.y)?;
    Ok((ds, cd))
}

fn data_json(ds: &data::Dataset, cd: &CensoredData) -> serde_json::Value {
    serde_json::json!({
        "path": ds.path,
        "col_x": ds.col_x,
        "col_y": ds.col_y,
        "ties": cd.tie_summary(),
    })
}

fn emit(report: serde_json::Value, out: Option<&PathBuf>) -> Result<(), Fail> {
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| Fail::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_fit(a: &FitArgs) -> Result<(), Fail> {
    let (ds, cd) = load(&a.data)?;
    let t0 = Instant::now();
    let fit = match a.method.as_str() {
        "censoring" => fit_censoring(a.family, &cd, a.tau0)?,
        "average-rank" => fit_average_rank(a.family, &cd, a.tau0)?,
        "random-break" => fit_random_break(a.family, &cd, a.m, Seed(a.seed), a.tau0)?,
        other => {
            return Err(Fail::Input(format!(
                "unknown method '{other}' (expected censoring, average-rank, random-break)"
            )))
        }
    };
    emit(
        serde_json::json!({
            "schema": "tiecop/1",
            "command": "fit",
            "config": {
                "family": a.family, "method": a.method, "tau0": a.tau0,
                "m": a.m, "seed": a.seed,
            },
            "data": data_json(&ds, &cd),
            "result": fit,
            "elapsed_seconds": t0.elapsed().as_secs_f64(),
        }),
        a.out.as_ref(),
    )
}

fn cmd_ci(a: &CiArgs) -> Result<(), Fail> {
    let (ds, cd) = load(&a.data)?;
    let t0 = Instant::now();
    let ci = bootstrap_ci(a.family, &cd, a.b as usize, a.alpha, Seed(a.seed), a.tau0)?;
    emit(
        serde_json::json!({
            "schema": "tiecop/1",
            "command": "ci",
            "config": {
                "family": a.family, "tau0": a.tau0, "B": a.b,
                "alpha": a.alpha, "seed": a.seed,
            },
            "data": data_json(&ds, &cd),
            "result": {
                "fit": ci.fit,
                "tau_lo": ci.tau_lo, "tau_hi": ci.tau_hi,
                "theta_lo": ci.theta_lo, "theta_hi": ci.theta_hi,
                "alpha": ci.alpha, "B": ci.b, "b_failed": ci.b_failed,
            },
            "elapsed_seconds": t0.elapsed().as_secs_f64(),
        }),
        a.out.as_ref(),
    )
}

fn cmd_gof(a: &GofArgs) -> Result<(), Fail> {
    let (ds, cd) = load(&a.data)?;
    let t0 = Instant::now();
    let rep = gof_test(
        a.family,
        &cd,
        a.b as usize,
        Seed(a.seed),
        TieStrategy::Match,
        a.plus_one,
        a.tau0,
    )?;
    emit(
        serde_json::json!({
            "schema": "tiecop/1",
            "command": "gof",
            "config": {
                "family": a.family, "tau0": a.tau0, "B": a.b,
                "seed": a.seed, "plus_one": a.plus_one,
            },
            "data": data_json(&ds, &cd),
            "result": {
                "fit": rep.fit,
                "statistic": rep.statistic,
                "p_value": rep.p_value,
                "B": rep.b, "b_failed": rep.b_failed,
            },
            "elapsed_seconds": t0.elapsed().as_secs_f64(),
        }),
        a.out.as_ref(),
    )
}

fn cmd_simulate(a: &SimArgs) -> Result<(), Fail> {
    let text = std::fs::read_to_string(&a.scenario)
        .map_err(|e| Fail::Input(format!("cannot read {}: {e}", a.scenario.display())))?;
    let mut cfg = ScenarioConfig::parse(&text)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let t0 = Instant::now();
    let report = run_scenario(&cfg)?;
    if let Some(path) = &a.records {
        std::fs::write(path, report.records_csv())
            .map_err(|e| Fail::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(
        serde_json::json!({
            "schema": "tiecop/1",
            "command": "simulate",
            "result": report,
            "elapsed_seconds": t0.elapsed().as_secs_f64(),
        }),
        a.out.as_ref(),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot set thread count: {e}");
            return ExitCode::from(2);
        }
    }
    let res = match &cli.cmd {
        Cmd::Fit(a) => cmd_fit(a),
        Cmd::Ci(a) => cmd_ci(a),
        Cmd::Gof(a) => cmd_gof(a),
        Cmd::Simulate(a) => cmd_simulate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
