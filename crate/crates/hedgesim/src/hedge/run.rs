//! Monte Carlo driver: many independent paths through the ledger,
//! terminal-distribution statistics and streamed per-path diagnostics.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{EngineError, Result};
use crate::hedge::ledger::{step_ledger, LedgerRow, PortfolioState, StepContext};
use crate::hedge::strategy::HedgeStrategy;
use crate::market::{simulate_gbm_path, GbmSpec, SeedSpec, TimeGrid};
use crate::math::stats;
use crate::pricing::{bs_delta, CallSpec, PricingModel};

/// Hard cap on retained ledger rows; larger runs must stream.
const MAX_RETAINED_ROWS: usize = 1 << 25;

/// Monotonicity tolerance: increments of an intrinsically hedged
/// portfolio are non-negative in exact arithmetic; anything below this
/// is rounding noise from the accounting sums.
pub const DPI_NOISE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Quantiles {
    pub q01: f64,
    pub q05: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q95: f64,
    pub q99: f64,
}

/// Sample distribution of terminal portfolio values.
#[derive(Debug, Clone, Serialize)]
pub struct TerminalDistribution {
    #[serde(skip)]
    pub samples: Vec<f64>,
    pub n_paths: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub standard_error: f64,
    pub quantiles: Quantiles,
}

impl TerminalDistribution {
    pub fn from_samples(samples: Vec<f64>) -> Self {
        let mean = stats::mean(&samples);
        let std_dev = stats::std_dev(&samples);
        let standard_error = std_dev / (samples.len() as f64).sqrt();
        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q = |p| stats::quantile_sorted(&sorted, p);
        let quantiles = Quantiles {
            q01: q(0.01),
            q05: q(0.05),
            q25: q(0.25),
            q50: q(0.50),
            q75: q(0.75),
            q95: q(0.95),
            q99: q(0.99),
        };
        Self { n_paths: samples.len(), mean, std_dev, standard_error, quantiles, samples }
    }
}

/// Full description of one Monte Carlo hedging run.
#[derive(Debug, Clone, Serialize)]
pub struct HedgeRunConfig {
    pub gbm: GbmSpec,
    pub grid: TimeGrid,
    pub call: CallSpec,
    pub model: PricingModel,
    pub strategy: HedgeStrategy,
    pub n_paths: usize,
    pub master_seed: u64,
    /// Keep every ledger row of every path (memory!). Off by default;
    /// statistics and diagnostics are streamed either way.
    pub retain_ledgers: bool,
    /// Accumulate the drift/variance decomposition integrals. Costs one
    /// extra delta evaluation per step; disable for pure-payoff runs.
    pub collect_drift_diagnostics: bool,
}

impl HedgeRunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1 {
            return Err(EngineError::Config("n_paths must be >= 1".into()));
        }
        GbmSpec::new(self.gbm.f0, self.gbm.mu0, self.gbm.sigma0)?;
        TimeGrid::new(self.grid.t_start, self.grid.t_end, self.grid.n_steps)?;
        CallSpec::new(self.call.strike, self.call.expiry)?;
        let horizon_end = self.grid.t_end;
        if (horizon_end - self.call.expiry).abs() > 1e-9 * self.call.expiry.max(1.0) {
            return Err(EngineError::Config(format!(
                "grid must end at option expiry: t_end={horizon_end}, expiry={}",
                self.call.expiry
            )));
        }
        if let HedgeStrategy::BidOffer { k, .. } = self.strategy {
            if k < 0.0 {
                return Err(EngineError::Config("bid-offer k must be >= 0".into()));
            }
            if k * self.grid.dt() >= 1.0 {
                return Err(EngineError::Config(format!(
                    "bid-offer relaxation is unstable: k * dt = {} must be < 1",
                    k * self.grid.dt()
                )));
            }
        }
        if self.retain_ledgers && self.n_paths.saturating_mul(self.grid.n_steps + 1) > MAX_RETAINED_ROWS
        {
            return Err(EngineError::Config(format!(
                "retaining {} x {} ledger rows exceeds the {} row budget; \
                 reduce paths/steps or disable ledger retention",
                self.n_paths,
                self.grid.n_steps + 1,
                MAX_RETAINED_ROWS
            )));
        }
        Ok(())
    }
}

/// Streamed per-path integrals used by the drift and variance reports.
/// Index = path index.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunDiagnostics {
    /// Terminal payoff per path.
    pub payoff: Vec<f64>,
    /// `sum (f' + h) mu F dt`: the drift integrand of the risk-neutral
    /// decomposition, with `f'` the Black-Scholes delta at step start.
    pub drift_integral_rn: Vec<f64>,
    /// `sum h mu F dt`: the drift integrand of the probabilistic
    /// decomposition.
    pub drift_integral_p: Vec<f64>,
    /// `sum (f' + h) (dF - mu F dt)`: the martingale part of the
    /// portfolio increment; its covariance with the drift integral is
    /// the cross term the two-term variance formula omits.
    pub martingale_integral: Vec<f64>,
    /// `sum (f' + h)^2 sigma^2 F^2 dt`: the diffusion variance term.
    pub quadratic_integral: Vec<f64>,
    /// `sum h dF` over the path: the cumulative hedge gain.
    pub hedge_gain: Vec<f64>,
    /// `sum (dH + dP + dC)` over the path: replication residual.
    pub replication_sum: Vec<f64>,
    /// Smallest per-step portfolio increment on the path.
    pub min_step_dpi: Vec<f64>,
    /// Step index where the minimum occurred.
    pub min_step_dpi_at: Vec<u32>,
    /// Number of steps with `dPi < -DPI_NOISE_FLOOR`.
    pub negative_dpi_steps: Vec<u32>,
}

/// Result of a Monte Carlo hedging run.
#[derive(Debug, Clone)]
pub struct HedgeRunOutput {
    pub config: HedgeRunConfig,
    pub distribution: TerminalDistribution,
    pub diagnostics: RunDiagnostics,
    /// Present only when `retain_ledgers` was set.
    pub ledgers: Option<Vec<Vec<LedgerRow>>>,
}

struct PathResult {
    terminal: f64,
    payoff: f64,
    y_rn: f64,
    y_p: f64,
    z_mart: f64,
    q_var: f64,
    hedge_gain: f64,
    repl_sum: f64,
    min_dpi: f64,
    min_dpi_at: u32,
    neg_dpi: u32,
    rows: Option<Vec<LedgerRow>>,
}

fn run_one_path(cfg: &HedgeRunConfig, path_index: u64) -> Result<PathResult> {
    let seed = SeedSpec { master_seed: cfg.master_seed, path_index };
    let path = simulate_gbm_path(&cfg.gbm, &cfg.grid, seed)?;
    let dt = cfg.grid.dt();
    let ctx = StepContext {
        call: &cfg.call,
        model: cfg.model,
        strategy: &cfg.strategy,
        sigma0: cfg.gbm.sigma0,
        mu0: cfg.gbm.mu0,
        dt,
    };

    let mut state = PortfolioState::opening(cfg.gbm.f0, &cfg.call, cfg.model, cfg.gbm.sigma0, cfg.gbm.mu0)?;
    let opening = state;
    let mut rows: Option<Vec<LedgerRow>> =
        cfg.retain_ledgers.then(|| Vec::with_capacity(cfg.grid.n_steps + 1));

    // step 0: hedge set-up at the initial price, zero cost
    let (next, setup_row) = step_ledger(&state, cfg.gbm.f0, 0.0, cfg.grid.t_start, 0, &ctx)?;
    state = next;
    if let Some(r) = rows.as_mut() {
        r.push(setup_row);
    }

    let mut y_rn = 0.0;
    let mut y_p = 0.0;
    let mut z_mart = 0.0;
    let mut q_var = 0.0;
    let mut hedge_gain = 0.0;
    let mut repl_sum = 0.0;
    let mut min_dpi = f64::INFINITY;
    let mut min_dpi_at = 0u32;
    let mut neg_dpi = 0u32;

    let sigma = cfg.gbm.sigma0;
    let mu = cfg.gbm.mu0;
    for i in 0..cfg.grid.n_steps {
        let f = path.values[i];
        let df = path.increment(i);
        let t = cfg.grid.time_at(i);
        let t_new = cfg.grid.time_at(i + 1);
        let h_held = state.hedge_position;

        if cfg.collect_drift_diagnostics {
            let f_prime = bs_delta(f, t, &cfg.call, sigma)?;
            let x = f_prime + h_held;
            let drift_part = mu * f * dt;
            y_rn += x * drift_part;
            y_p += h_held * drift_part;
            z_mart += x * (df - drift_part);
            q_var += x * x * sigma * sigma * f * f * dt;
        }
        hedge_gain += h_held * df;

        let (next, row) = step_ledger(&state, f, df, t_new, i + 1, &ctx)?;
        repl_sum += row.d_hedge_value + row.d_cash + row.d_option_value;
        if row.d_portfolio < min_dpi {
            min_dpi = row.d_portfolio;
            min_dpi_at = (i + 1) as u32;
        }
        if row.d_portfolio < -DPI_NOISE_FLOOR {
            neg_dpi += 1;
        }
        state = next;
        if let Some(r) = rows.as_mut() {
            r.push(row);
        }
    }

    if let Some(r) = rows.as_ref() {
        debug_assert!(super::ledger::check_rows(&opening, r, 1e-9).is_empty());
    }

    Ok(PathResult {
        terminal: state.portfolio,
        payoff: cfg.call.payoff(path.terminal()),
        y_rn,
        y_p,
        z_mart,
        q_var,
        hedge_gain,
        repl_sum,
        min_dpi,
        min_dpi_at,
        neg_dpi,
        rows,
    })
}

/// Runs `n_paths` independent ledgers and aggregates. Deterministic for
/// a fixed `master_seed` regardless of thread count: every path draws
/// from its own `(master_seed, path_index)` stream and results are
/// reduced in path order.
pub fn run_paths(cfg: &HedgeRunConfig) -> Result<HedgeRunOutput> {
    cfg.validate()?;
    let results: Vec<PathResult> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|idx| run_one_path(cfg, idx))
        .collect::<Result<_>>()?;

    let mut samples = Vec::with_capacity(cfg.n_paths);
    let mut diag = RunDiagnostics::default();
    let mut ledgers = cfg.retain_ledgers.then(Vec::new);
    for r in results {
        samples.push(r.terminal);
        diag.payoff.push(r.payoff);
        diag.drift_integral_rn.push(r.y_rn);
        diag.drift_integral_p.push(r.y_p);
        diag.martingale_integral.push(r.z_mart);
        diag.quadratic_integral.push(r.q_var);
        diag.hedge_gain.push(r.hedge_gain);
        diag.replication_sum.push(r.repl_sum);
        diag.min_step_dpi.push(r.min_dpi);
        diag.min_step_dpi_at.push(r.min_dpi_at);
        diag.negative_dpi_steps.push(r.neg_dpi);
        if let (Some(ls), Some(rows)) = (ledgers.as_mut(), r.rows) {
            ls.push(rows);
        }
    }

    Ok(HedgeRunOutput {
        config: cfg.clone(),
        distribution: TerminalDistribution::from_samples(samples),
        diagnostics: diag,
        ledgers,
    })
}
