//! Market models: seeded geometric Brownian motion paths and the
//! bond-numeraire/currency change of variables.
//!
//! The underlying follows `dF = mu0 F dt + sigma0 F dW`. Paths are
//! generated with the exact log-space step
//! `F_{i+1} = F_i * exp((mu0 - sigma0^2/2) dt + sigma0 sqrt(dt) z_i)`,
//! which keeps every value positive and makes the discrete marginal law
//! exactly lognormal (no Euler bias).
//!
//! A persistent real drift survives only on markets too illiquid for
//! everyone to arbitrage it away, while the ledger rebalances at every
//! observation as if liquidity were perfect. Drifted runs are therefore
//! an idealization: the bid-offer strategy's `k` is the only friction
//! control, and there is no transaction-cost model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Uniform observation grid on `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if n_steps < 1 {
            return Err(EngineError::InvalidInput("n_steps must be >= 1".into()));
        }
        if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
            return Err(EngineError::InvalidInput(format!(
                "time grid must satisfy t_start < t_end, got [{t_start}, {t_end}]"
            )));
        }
        Ok(Self { t_start, t_end, n_steps })
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.n_steps as f64
    }

    /// Grid time of step `i`; the last index lands on `t_end` exactly.
    pub fn time_at(&self, i: usize) -> f64 {
        if i >= self.n_steps {
            self.t_end
        } else {
            self.t_start + i as f64 * self.dt()
        }
    }
}

/// Geometric Brownian motion parameters: initial spot, relative drift
/// (1/year) and relative volatility (1/sqrt(year)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmSpec {
    pub f0: f64,
    pub mu0: f64,
    pub sigma0: f64,
}

impl GbmSpec {
    pub fn new(f0: f64, mu0: f64, sigma0: f64) -> Result<Self> {
        if !(f0 > 0.0) {
            return Err(EngineError::InvalidInput(format!("f0 must be positive, got {f0}")));
        }
        if !(sigma0 >= 0.0) {
            return Err(EngineError::InvalidInput(format!(
                "sigma0 must be non-negative, got {sigma0}"
            )));
        }
        if !mu0.is_finite() {
            return Err(EngineError::InvalidInput("mu0 must be finite".into()));
        }
        Ok(Self { f0, mu0, sigma0 })
    }
}

/// Identifies one reproducible random stream: `(master_seed, path_index)`
/// fully determines a path, independent of how many paths run
/// concurrently or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub path_index: u64,
}

impl SeedSpec {
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        // ChaCha streams are pairwise independent, one per path
        rng.set_stream(self.path_index);
        rng
    }
}

/// Continuously compounded rate used for the bond-to-currency change of
/// units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumeraireRate {
    pub r: f64,
}

/// One discretized realization of the underlying on a grid.
#[derive(Debug, Clone)]
pub struct PricePath {
    pub grid: TimeGrid,
    /// `n_steps + 1` values, `values[0] == f0`.
    pub values: Vec<f64>,
}

impl PricePath {
    pub fn increment(&self, i: usize) -> f64 {
        self.values[i + 1] - self.values[i]
    }

    pub fn terminal(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// Generates a GBM path with the exact lognormal step.
pub fn simulate_gbm_path(spec: &GbmSpec, grid: &TimeGrid, seed: SeedSpec) -> Result<PricePath> {
    GbmSpec::new(spec.f0, spec.mu0, spec.sigma0)?;
    TimeGrid::new(grid.t_start, grid.t_end, grid.n_steps)?;
    let mut rng = seed.rng();
    let dt = grid.dt();
    let drift = (spec.mu0 - 0.5 * spec.sigma0 * spec.sigma0) * dt;
    let vol = spec.sigma0 * dt.sqrt();
    let mut values = Vec::with_capacity(grid.n_steps + 1);
    let mut f = spec.f0;
    values.push(f);
    for _ in 0..grid.n_steps {
        let z: f64 = rng.sample(StandardNormal);
        f *= (drift + vol * z).exp();
        values.push(f);
    }
    Ok(PricePath { grid: *grid, values })
}

/// Expected increment over `dt`: `<dF> = mu0 * f * dt`.
pub fn expected_increment(spec: &GbmSpec, f: f64, dt: f64) -> f64 {
    spec.mu0 * f * dt
}

/// Bond-numeraire value to currency units: `v_bar = e^{r t} v`. Applied
/// uniformly to spot, option, hedge-value and cash series when reporting
/// in currency. The inverse transform is the same call with rate `-r`.
pub fn to_currency_units(value: f64, t: f64, rate: NumeraireRate) -> f64 {
    (rate.r * t).exp() * value
}
