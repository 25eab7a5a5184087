//! Storage-market domain types: the storage asset, the forward curve
//! and its lognormal factor model, and the dispatch plan.

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

/// Box-constrained storage: volume bounds, per-period injection and
/// withdrawal limits, required start and end levels, and the volume
/// lattice pitch on which dispatch is solved exactly.
///
/// `rate_in_max` / `rate_out_max` are volumes per delivery period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StorageSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub rate_in_max: f64,
    pub rate_out_max: f64,
    pub q_initial: f64,
    pub q_terminal: f64,
    /// Volume lattice pitch. Must divide the rate bounds and every
    /// level gap so that the lattice DP is exact, checked by
    /// [`StorageSpec::lattice`].
    pub lattice_step: f64,
}

/// Integerized view of the storage box: everything in lattice units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub n_levels: i64,
    pub initial: i64,
    pub terminal: i64,
    pub max_inject: i64,
    pub max_withdraw: i64,
}

fn to_units(value: f64, step: f64, name: &str) -> Result<i64> {
    let raw = value / step;
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-9 * raw.abs().max(1.0) {
        return Err(EngineError::Config(format!(
            "{name} = {value} is not a multiple of the lattice step {step}"
        )));
    }
    Ok(rounded as i64)
}

impl StorageSpec {
    /// Validates the box and the lattice exactness condition.
    pub fn lattice(&self) -> Result<Lattice> {
        if !(self.lattice_step > 0.0) {
            return Err(EngineError::Config("lattice_step must be positive".into()));
        }
        if !(self.q_min <= self.q_initial && self.q_initial <= self.q_max) {
            return Err(EngineError::Config(format!(
                "q_initial = {} outside [{}, {}]",
                self.q_initial, self.q_min, self.q_max
            )));
        }
        if !(self.q_min <= self.q_terminal && self.q_terminal <= self.q_max) {
            return Err(EngineError::Config(format!(
                "q_terminal = {} outside [{}, {}]",
                self.q_terminal, self.q_min, self.q_max
            )));
        }
        if !(self.rate_in_max > 0.0) || !(self.rate_out_max > 0.0) {
            return Err(EngineError::Config("rate bounds must be positive".into()));
        }
        let step = self.lattice_step;
        let lattice = Lattice {
            n_levels: to_units(self.q_max - self.q_min, step, "q_max - q_min")? + 1,
            initial: to_units(self.q_initial - self.q_min, step, "q_initial - q_min")?,
            terminal: to_units(self.q_terminal - self.q_min, step, "q_terminal - q_min")?,
            max_inject: to_units(self.rate_in_max, step, "rate_in_max")?,
            max_withdraw: to_units(self.rate_out_max, step, "rate_out_max")?,
        };
        if lattice.max_inject < 1 || lattice.max_withdraw < 1 {
            return Err(EngineError::Config(
                "rate bounds must be at least one lattice step per period".into(),
            ));
        }
        if lattice.n_levels > 100_000 {
            return Err(EngineError::Config(format!(
                "{} volume levels exceeds the desk-scale budget",
                lattice.n_levels
            )));
        }
        Ok(lattice)
    }

    pub fn level_of(&self, units: i64) -> f64 {
        self.q_min + units as f64 * self.lattice_step
    }
}

/// Forward curve observed at `t`: prices for the remaining delivery
/// periods on a uniform grid. Period `j` (relative) delivers over
/// `[T - dt, T)` with label `T = (first_period + j + 1) * delta_t`; the
/// grid shrinks from the front as periods deliver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardCurve {
    /// Observation time (years).
    pub t: f64,
    /// Absolute index of the front (next-delivering) period.
    pub first_period: usize,
    /// Period length = observation step (years).
    pub delta_t: f64,
    /// `values[j]` is the price of absolute period `first_period + j`.
    pub values: Vec<f64>,
}

impl ForwardCurve {
    pub fn new(t: f64, first_period: usize, delta_t: f64, values: Vec<f64>) -> Result<Self> {
        if !(delta_t > 0.0) {
            return Err(EngineError::InvalidInput("delta_t must be positive".into()));
        }
        if values.iter().any(|&v| !(v > 0.0)) {
            return Err(EngineError::InvalidInput("forward prices must be positive".into()));
        }
        Ok(Self { t, first_period, delta_t, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Delivery label (period end time) of relative period `j`.
    pub fn delivery_time(&self, j: usize) -> f64 {
        (self.first_period + j + 1) as f64 * self.delta_t
    }
}

/// Volatility per delivery period: either flat across the curve or one
/// value per absolute period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Flat(f64),
    PerPeriod(Vec<f64>),
}

/// Lognormal martingale factor model for the curve: per-period
/// volatility and exponentially decaying cross-maturity correlation
/// `corr(dF(u), dF(v)) = exp(-beta |u - v|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFactorModel {
    pub sigma: SigmaSpec,
    pub beta: f64,
}

impl CurveFactorModel {
    pub fn validate(&self, n_periods: usize) -> Result<()> {
        if !(self.beta >= 0.0) {
            return Err(EngineError::Config("beta must be non-negative".into()));
        }
        match &self.sigma {
            SigmaSpec::Flat(s) if *s >= 0.0 => Ok(()),
            SigmaSpec::Flat(s) => {
                Err(EngineError::Config(format!("sigma must be non-negative, got {s}")))
            }
            SigmaSpec::PerPeriod(v) => {
                if v.len() != n_periods {
                    return Err(EngineError::Config(format!(
                        "sigma has {} entries but the curve has {} periods",
                        v.len(),
                        n_periods
                    )));
                }
                if v.iter().any(|s| !(*s >= 0.0)) {
                    return Err(EngineError::Config("sigma entries must be non-negative".into()));
                }
                Ok(())
            }
        }
    }

    pub fn sigma_for(&self, absolute_period: usize) -> f64 {
        match &self.sigma {
            SigmaSpec::Flat(s) => *s,
            SigmaSpec::PerPeriod(v) => v[absolute_period],
        }
    }
}

/// Dispatch plan over the remaining periods, in lattice units.
///
/// Sign convention: `volume_units[j] > 0` injects (buys) during period
/// `j`, `< 0` withdraws (sells). The plan's intrinsic value is
/// `I = -sum_j volume_j * F_j`, positive when the plan buys low and
/// sells high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExercisePlan {
    pub volume_units: Vec<i64>,
}

impl ExercisePlan {
    /// Dispatched volume of relative period `j`.
    pub fn volume(&self, j: usize, storage: &StorageSpec) -> f64 {
        self.volume_units[j] as f64 * storage.lattice_step
    }

    /// Dispatch rate `q-dot` (volume per year) of relative period `j`.
    pub fn rate(&self, j: usize, storage: &StorageSpec, delta_t: f64) -> f64 {
        self.volume(j, storage) / delta_t
    }

    pub fn len(&self) -> usize {
        self.volume_units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volume_units.is_empty()
    }
}
