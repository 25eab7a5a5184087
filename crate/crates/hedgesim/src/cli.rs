//! Command-line front end: `price`, `simulate`, `verify`, `sweep`.
//!
//! Every command takes a scenario file plus optional overrides; reports
//! land in `--out` as JSON (and CSV ledgers with `--ledgers`). Outputs
//! are byte-identical for a fixed seed whatever `--workers` says.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{InstrumentBlock, MarketBlock, ScenarioConfig};
use crate::error::{EngineError, Result};
use crate::hedge::{self, HedgeStrategy, DeltaKind};
use crate::pricing::{bs_price, intrinsic_price, probabilistic_price, time_value_closed_form};
use crate::report::{write_hedge_ledgers, write_storage_ledgers, RunReport};
use crate::storage;
use crate::verify::run_all_checks;

#[derive(Debug, Parser)]
#[command(name = "hedgesim", version, about = "Self-financing hedging simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Scenario TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override run.master_seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override run.n_paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Override run.n_steps.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output directory (default from config, else `runs/<hash8>`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Retain and write per-path ledgers as CSV.
    #[arg(long)]
    pub ledgers: bool,
    /// Worker threads (0 = machine default).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Emit JSON instead of the human-readable table (price/verify).
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form prices for the configured instrument.
    Price(CommonOpts),
    /// Monte Carlo run; writes report.json (+ ledgers.csv).
    Simulate(CommonOpts),
    /// Built-in invariant suite; exit 2 if any check fails.
    Verify(CommonOpts),
    /// Run all five hedging strategies and tabulate the distributions.
    Sweep(CommonOpts),
}

fn load_scenario(opts: &CommonOpts) -> Result<(ScenarioConfig, PathBuf)> {
    let path = opts.config.as_ref().ok_or_else(|| {
        EngineError::Config("this command needs --config <scenario.toml>".into())
    })?;
    let mut scenario = ScenarioConfig::load(path)?;
    if let Some(seed) = opts.seed {
        scenario.run.master_seed = seed;
    }
    if let Some(paths) = opts.paths {
        scenario.run.n_paths = paths;
    }
    if let Some(steps) = opts.steps {
        scenario.run.n_steps = Some(steps);
    }
    if opts.ledgers {
        scenario.run.retain_ledgers = true;
    }
    if opts.workers > 0 {
        scenario.run.workers = opts.workers;
    }
    scenario.validate()?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((scenario, base))
}

fn out_dir(opts: &CommonOpts, scenario: &ScenarioConfig) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| scenario.run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("runs").join(&scenario.hash()[..8]))
}

/// Runs `body` inside a rayon pool of the requested width.
fn with_workers<T: Send>(workers: usize, body: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if workers == 0 {
        return body();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| {
        EngineError::Config(format!("cannot build a {workers}-thread worker pool: {e}"))
    })?;
    pool.install(body)
}

#[derive(Serialize)]
struct PriceOutput {
    instrument: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    risk_neutral: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    probabilistic: Option<f64>,
    intrinsic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_value_closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dispatch_volumes: Option<Vec<f64>>,
}

fn cmd_price(opts: &CommonOpts) -> Result<i32> {
    let (scenario, base) = load_scenario(opts)?;
    let output = match (&scenario.market, &scenario.instrument) {
        (MarketBlock::Gbm(gbm), InstrumentBlock::Call(call)) => {
            let f = bs_price(gbm.f0, 0.0, call, gbm.sigma0)?;
            let g = probabilistic_price(gbm.f0, 0.0, call, gbm.sigma0, gbm.mu0)?;
            let i = intrinsic_price(gbm.f0, call);
            let tv = if gbm.sigma0 > 0.0 {
                Some(time_value_closed_form(call, gbm.f0, gbm.sigma0, call.expiry)?)
            } else {
                None
            };
            PriceOutput {
                instrument: "call",
                risk_neutral: Some(f),
                probabilistic: Some(g),
                intrinsic: i,
                time_value_closed_form: tv,
                dispatch_volumes: None,
            }
        }
        (MarketBlock::Curve(market), InstrumentBlock::Storage(spec)) => {
            let curve = market.initial_curve(&base)?;
            let (plan, value) = storage::intrinsic_optimize(&curve, spec, spec.q_initial)?;
            let volumes = (0..plan.len()).map(|j| plan.volume(j, spec)).collect();
            PriceOutput {
                instrument: "storage",
                risk_neutral: None,
                probabilistic: None,
                intrinsic: value,
                time_value_closed_form: None,
                dispatch_volumes: Some(volumes),
            }
        }
        _ => unreachable!("validated"),
    };
    if opts.json {
        println!("{}", serde_json::to_string_pretty(&output)?);
    } else if output.instrument == "call" {
        println!("instrument            call");
        println!("risk-neutral value f  {:.10}", output.risk_neutral.unwrap());
        println!("probabilistic value g {:.10}", output.probabilistic.unwrap());
        println!("intrinsic value I     {:.10}", output.intrinsic);
        match output.time_value_closed_form {
            Some(tv) => println!("time value (closed)   {tv:.10}"),
            None => println!("time value (closed)   0 (zero volatility)"),
        }
    } else {
        println!("instrument            storage");
        println!("intrinsic value I(0)  {:.10}", output.intrinsic);
        println!("dispatch plan (volume per period, + injects / - withdraws):");
        for (j, v) in output.dispatch_volumes.as_ref().unwrap().iter().enumerate() {
            println!("  period {j:>3}: {v:>10.4}");
        }
    }
    Ok(0)
}

fn simulate_scenario(
    scenario: &ScenarioConfig,
    base: &Path,
    dir: &Path,
) -> Result<RunReport> {
    if scenario.is_storage() {
        let cfg = scenario.storage_run(base)?;
        let out = storage::run_rolling_intrinsic(&cfg)?;
        if let Some(ledgers) = &out.ledgers {
            write_storage_ledgers(&dir.join("ledgers.csv"), ledgers)?;
        }
        Ok(RunReport::for_storage_run(scenario, &out))
    } else {
        let cfg = scenario.hedge_run()?;
        let out = hedge::run_paths(&cfg)?;
        if let Some(ledgers) = &out.ledgers {
            write_hedge_ledgers(&dir.join("ledgers.csv"), ledgers)?;
        }
        Ok(RunReport::for_hedge_run(scenario, &out))
    }
}

fn cmd_simulate(opts: &CommonOpts) -> Result<i32> {
    let (scenario, base) = load_scenario(opts)?;
    let dir = out_dir(opts, &scenario);
    let started = Instant::now();
    let report =
        with_workers(scenario.run.workers, || simulate_scenario(&scenario, &base, &dir))?;
    report.write_json(&dir.join("report.json"))?;
    let d = &report.terminal_distribution;
    println!(
        "{} paths x {} steps: mean {:.6}  std {:.6}  se {:.6}",
        d.n_paths, report.steps_per_path, d.mean, d.std_dev, d.standard_error
    );
    if let Some(est) = &report.storage_estimators {
        println!(
            "time value: exercise {:.6} (se {:.6})  hedge-cash {:.6} (se {:.6})",
            est.exercise_estimate, est.exercise_se, est.hedge_cash_estimate, est.hedge_cash_se
        );
    }
    println!("report: {}", dir.join("report.json").display());
    eprintln!("wall time: {:.2}s", started.elapsed().as_secs_f64());
    Ok(0)
}

fn cmd_verify(opts: &CommonOpts) -> Result<i32> {
    // a provided config is validated as part of the suite
    let mut config_ok = true;
    let mut config_detail = String::from("no config given");
    if let Some(path) = &opts.config {
        match ScenarioConfig::load(path) {
            Ok(_) => config_detail = format!("{} parses and validates", path.display()),
            Err(e) => {
                config_ok = false;
                config_detail = e.to_string();
            }
        }
    }
    let results = with_workers(opts.workers, run_all_checks)?;
    let mut all_pass = config_ok;
    if opts.json {
        #[derive(Serialize)]
        struct VerifyOutput<'a> {
            config_valid: bool,
            config_detail: &'a str,
            checks: &'a [crate::verify::CheckResult],
        }
        for r in &results {
            all_pass &= r.passed;
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&VerifyOutput {
                config_valid: config_ok,
                config_detail: &config_detail,
                checks: &results
            })?
        );
    } else {
        println!("{:<42} {:>14} {:>10}  status", "check", "measured", "bound");
        if opts.config.is_some() {
            println!(
                "{:<42} {:>14} {:>10}  {}",
                "config_valid",
                "-",
                "-",
                if config_ok { "PASS" } else { "FAIL" }
            );
        }
        for r in &results {
            all_pass &= r.passed;
            println!(
                "{:<42} {:>14.6e} {:>10.1e}  {}",
                r.name,
                r.measured,
                r.bound,
                if r.passed { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(if all_pass { 0 } else { 2 })
}

fn sweep_strategies(scenario: &ScenarioConfig) -> Vec<(String, HedgeStrategy)> {
    // reuse the configured bid-offer parameters when present
    let bid_offer = match scenario.strategy.hedge {
        HedgeStrategy::BidOffer { k, inner } => HedgeStrategy::BidOffer { k, inner },
        _ => HedgeStrategy::BidOffer { k: 8.0, inner: DeltaKind::RiskNeutral },
    };
    [
        HedgeStrategy::None,
        HedgeStrategy::RiskNeutralDelta,
        HedgeStrategy::DriftAdjustedDelta,
        HedgeStrategy::IntrinsicDelta,
        bid_offer,
    ]
    .into_iter()
    .map(|s| (s.label(), s))
    .collect()
}

fn cmd_sweep(opts: &CommonOpts) -> Result<i32> {
    let (scenario, _base) = load_scenario(opts)?;
    if scenario.is_storage() {
        return Err(EngineError::Config(
            "sweep compares vanilla hedging strategies; use a call scenario".into(),
        ));
    }
    let dir = out_dir(opts, &scenario);
    let started = Instant::now();

    #[derive(Serialize)]
    struct SweepRow {
        strategy: String,
        mean: f64,
        std_dev: f64,
        standard_error: f64,
        q05: f64,
        q95: f64,
    }
    let mut rows = Vec::new();
    with_workers(scenario.run.workers, || {
        for (label, strategy) in sweep_strategies(&scenario) {
            let mut variant = scenario.clone();
            variant.strategy.hedge = strategy;
            let cfg = variant.hedge_run()?;
            let out = hedge::run_paths(&cfg)?;
            let report = RunReport::for_hedge_run(&variant, &out);
            report.write_json(&dir.join(format!("report_{label}.json")))?;
            let d = &out.distribution;
            rows.push(SweepRow {
                strategy: label,
                mean: d.mean,
                std_dev: d.std_dev,
                standard_error: d.standard_error,
                q05: d.quantiles.q05,
                q95: d.quantiles.q95,
            });
        }
        Ok(())
    })?;

    let table_path = dir.join("comparison.json");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(&table_path, serde_json::to_string_pretty(&rows)?)?;
    println!(
        "{:<24} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "strategy", "mean", "std", "se", "q05", "q95"
    );
    for r in &rows {
        println!(
            "{:<24} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
            r.strategy, r.mean, r.std_dev, r.standard_error, r.q05, r.q95
        );
    }
    println!("comparison: {}", table_path.display());
    eprintln!("wall time: {:.2}s", started.elapsed().as_secs_f64());
    Ok(0)
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Price(opts) => cmd_price(opts),
        Command::Simulate(opts) => cmd_simulate(opts),
        Command::Verify(opts) => cmd_verify(opts),
        Command::Sweep(opts) => cmd_sweep(opts),
    }
}
