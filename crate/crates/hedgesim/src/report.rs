//! Machine-readable run outputs: the JSON report and CSV ledgers.
//!
//! Reports are byte-identical for identical configs and seeds whatever
//! the worker count, so wall-clock timing is deliberately not part of
//! the file (the CLI prints it to stderr instead).

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::hedge::{DriftDecomposition, HedgeRunOutput, LedgerRow, TerminalDistribution, VarianceCheck};
use crate::pricing::PricingModel;
use crate::storage::{StorageEstimators, StorageLedgerRow, StorageRunOutput};

#[derive(Debug, Clone, Serialize)]
pub struct EngineInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl EngineInfo {
    pub fn current() -> Self {
        Self { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

/// Time value realized by the intrinsic hedge, reported when the run
/// qualifies (driftless, intrinsic strategy and leg).
#[derive(Debug, Clone, Serialize)]
pub struct IntrinsicTimeValue {
    pub estimate: f64,
    pub standard_error: f64,
    pub closed_form: f64,
    pub gap_se_units: f64,
}

/// Top-level JSON report for one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub engine: EngineInfo,
    pub config_hash: String,
    pub master_seed: u64,
    pub scenario: ScenarioConfig,
    pub steps_per_path: usize,
    pub terminal_distribution: TerminalDistribution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift_decomposition_risk_neutral: Option<DriftDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift_decomposition_probabilistic: Option<DriftDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variance_check: Option<VarianceCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intrinsic_monotonicity: Option<crate::hedge::MonotonicityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intrinsic_time_value: Option<IntrinsicTimeValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub storage_estimators: Option<StorageEstimators>,
}

impl RunReport {
    pub fn for_hedge_run(scenario: &ScenarioConfig, output: &HedgeRunOutput) -> Self {
        // attach whichever estimators apply; silently skip the ones the
        // run cannot support (e.g. drift split on an intrinsic leg)
        let rn = crate::hedge::drift_decomposition(output, PricingModel::RiskNeutral).ok();
        let p = crate::hedge::drift_decomposition(output, PricingModel::Probabilistic).ok();
        let var = crate::hedge::variance_formula_check(output).ok();
        let monotonicity = crate::hedge::intrinsic_monotonicity_audit(output).ok();
        let intrinsic_time_value =
            crate::hedge::intrinsic_time_value_estimate(output).ok().map(|(estimate, se)| {
                let cfg = &output.config;
                let closed_form = crate::pricing::time_value_closed_form(
                    &cfg.call,
                    cfg.gbm.f0,
                    cfg.gbm.sigma0,
                    cfg.call.expiry,
                )
                .unwrap_or(f64::NAN);
                IntrinsicTimeValue {
                    estimate,
                    standard_error: se,
                    closed_form,
                    gap_se_units: (estimate - closed_form).abs() / se,
                }
            });
        Self {
            engine: EngineInfo::current(),
            config_hash: scenario.hash(),
            master_seed: output.config.master_seed,
            scenario: scenario.normalized(),
            steps_per_path: output.config.grid.n_steps,
            terminal_distribution: output.distribution.clone(),
            drift_decomposition_risk_neutral: rn,
            drift_decomposition_probabilistic: p,
            variance_check: var,
            intrinsic_monotonicity: monotonicity,
            intrinsic_time_value,
            storage_estimators: None,
        }
    }

    pub fn for_storage_run(scenario: &ScenarioConfig, output: &StorageRunOutput) -> Self {
        Self {
            engine: EngineInfo::current(),
            config_hash: scenario.hash(),
            master_seed: output.config.master_seed,
            scenario: scenario.normalized(),
            steps_per_path: output.config.initial_curve.len(),
            terminal_distribution: output.distribution.clone(),
            drift_decomposition_risk_neutral: None,
            drift_decomposition_probabilistic: None,
            variance_check: None,
            intrinsic_monotonicity: None,
            intrinsic_time_value: None,
            storage_estimators: output.estimators.clone(),
        }
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_json_pretty()?.as_bytes())?;
        file.write_all(b"\n")?;
        Ok(())
    }
}

/// Per-path vanilla ledgers, columns `path,step,t,F,dF,h,dh,C,H,P,Pi`.
pub fn write_hedge_ledgers(path: &Path, ledgers: &[Vec<LedgerRow>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["path", "step", "t", "F", "dF", "h", "dh", "C", "H", "P", "Pi"])?;
    for (path_idx, rows) in ledgers.iter().enumerate() {
        for row in rows {
            let s = &row.state;
            w.write_record(&[
                path_idx.to_string(),
                row.step.to_string(),
                s.t.to_string(),
                row.price.to_string(),
                row.d_price.to_string(),
                s.hedge_position.to_string(),
                row.d_hedge_position.to_string(),
                s.option_value.to_string(),
                s.hedge_value.to_string(),
                s.cash.to_string(),
                s.portfolio.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Per-path storage ledgers, columns `path,step,t,level,I,E,S,H,P,Pi`.
pub fn write_storage_ledgers(path: &Path, ledgers: &[Vec<StorageLedgerRow>]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["path", "step", "t", "level", "I", "E", "S", "H", "P", "Pi"])?;
    for (path_idx, rows) in ledgers.iter().enumerate() {
        for row in rows {
            w.write_record(&[
                path_idx.to_string(),
                row.step.to_string(),
                row.t.to_string(),
                row.level.to_string(),
                row.intrinsic_value.to_string(),
                row.exercise_value.to_string(),
                row.target_function.to_string(),
                row.hedge_value.to_string(),
                row.cash.to_string(),
                row.portfolio.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
