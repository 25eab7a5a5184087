//! Scenario configuration: one TOML file fully reproduces a run.
//!
//! ```toml
//! [market.gbm]
//! f0 = 100.0
//! mu0 = 0.0
//! sigma0 = 0.2
//!
//! [instrument.call]
//! strike = 100.0
//! expiry = 1.0
//!
//! [strategy]
//! model = "risk_neutral"
//! [strategy.hedge]
//! kind = "risk_neutral_delta"
//!
//! [run]
//! n_steps = 512
//! n_paths = 10000
//! master_seed = 42
//! ```
//!
//! Storage scenarios use `[market.curve]` (sigma, beta and the initial
//! curve as CSV path or inline points) with `[instrument.storage]`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{EngineError, Result};
use crate::hedge::{HedgeRunConfig, HedgeStrategy};
use crate::market::{GbmSpec, TimeGrid};
use crate::pricing::{CallSpec, PricingModel};
use crate::storage::{curve_from_points, read_curve_csv, CurveFactorModel, ForwardCurve, SigmaSpec, StorageRunConfig, StorageSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarketBlock {
    Gbm(GbmSpec),
    Curve(CurveMarket),
}

/// Forward-curve market description. The initial curve comes from a CSV
/// file (columns `T,F`) or inline `points = [[T, F], ...]`; exactly one
/// of the two must be given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMarket {
    pub sigma: SigmaSpec,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(f64, f64)>>,
}

impl CurveMarket {
    pub fn factor_model(&self) -> CurveFactorModel {
        CurveFactorModel { sigma: self.sigma.clone(), beta: self.beta }
    }

    /// Loads the initial curve; relative CSV paths resolve against
    /// `base_dir` (the config file's directory).
    pub fn initial_curve(&self, base_dir: &Path) -> Result<ForwardCurve> {
        match (&self.curve_csv, &self.points) {
            (Some(path), None) => {
                let resolved =
                    if path.is_absolute() { path.clone() } else { base_dir.join(path) };
                read_curve_csv(&resolved)
            }
            (None, Some(points)) => curve_from_points(points),
            (Some(_), Some(_)) => Err(EngineError::Config(
                "give either curve_csv or points, not both".into(),
            )),
            (None, None) => {
                Err(EngineError::Config("curve market needs curve_csv or points".into()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrumentBlock {
    Call(CallSpec),
    Storage(StorageSpec),
}

fn default_model() -> PricingModel {
    PricingModel::RiskNeutral
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyBlock {
    pub hedge: HedgeStrategy,
    #[serde(default = "default_model")]
    pub model: PricingModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunBlock {
    #[serde(default)]
    pub t_start: f64,
    /// Observation steps. Required for call scenarios; storage scenarios
    /// derive it from the curve (one step per delivery period).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    pub n_paths: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub retain_ledgers: bool,
    /// Worker threads; 0 picks the machine default. Reports are
    /// byte-identical for any value.
    #[serde(default)]
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub market: MarketBlock,
    pub instrument: InstrumentBlock,
    pub strategy: StrategyBlock,
    pub run: RunBlock,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            EngineError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self)
            .map_err(|e| EngineError::Config(format!("cannot serialize config: {e}")))
    }

    /// Structural validation beyond what the engines re-check.
    pub fn validate(&self) -> Result<()> {
        match (&self.market, &self.instrument) {
            (MarketBlock::Gbm(gbm), InstrumentBlock::Call(call)) => {
                GbmSpec::new(gbm.f0, gbm.mu0, gbm.sigma0)?;
                CallSpec::new(call.strike, call.expiry)?;
                let n_steps = self.run.n_steps.ok_or_else(|| {
                    EngineError::Config("call scenarios need run.n_steps".into())
                })?;
                let grid = TimeGrid::new(self.run.t_start, call.expiry, n_steps)?;
                if let HedgeStrategy::BidOffer { k, .. } = self.strategy.hedge {
                    if k * grid.dt() >= 1.0 {
                        return Err(EngineError::Config(format!(
                            "bid-offer relaxation unstable: k * dt = {}",
                            k * grid.dt()
                        )));
                    }
                }
                Ok(())
            }
            (MarketBlock::Curve(curve), InstrumentBlock::Storage(storage)) => {
                storage.lattice()?;
                if curve.beta < 0.0 {
                    return Err(EngineError::Config("beta must be non-negative".into()));
                }
                Ok(())
            }
            (MarketBlock::Gbm(_), InstrumentBlock::Storage(_)) => Err(EngineError::Config(
                "storage scenarios run on a (driftless) forward-curve market; \
                 use [market.curve]"
                    .into(),
            )),
            (MarketBlock::Curve(_), InstrumentBlock::Call(_)) => Err(EngineError::Config(
                "call scenarios run on a spot market; use [market.gbm]".into(),
            )),
        }
    }

    /// The scenario with execution-only fields (worker count, output
    /// directory) cleared: two runs that differ only in those produce
    /// identical results, so they share a hash and a report echo.
    pub fn normalized(&self) -> ScenarioConfig {
        let mut c = self.clone();
        c.run.workers = 0;
        c.run.out_dir = None;
        c
    }

    /// SHA-256 of the canonical JSON form of the normalized config;
    /// stable under key reordering and formatting of the source file.
    pub fn hash(&self) -> String {
        let canonical =
            serde_json::to_string(&self.normalized()).expect("config is always serializable");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        format!("{:x}", hasher.finalize())
    }

    pub fn is_storage(&self) -> bool {
        matches!(self.instrument, InstrumentBlock::Storage(_))
    }

    /// Assembles the vanilla-hedging run config.
    pub fn hedge_run(&self) -> Result<HedgeRunConfig> {
        let (MarketBlock::Gbm(gbm), InstrumentBlock::Call(call)) =
            (&self.market, &self.instrument)
        else {
            return Err(EngineError::Config("not a call scenario".into()));
        };
        let n_steps = self
            .run
            .n_steps
            .ok_or_else(|| EngineError::Config("call scenarios need run.n_steps".into()))?;
        Ok(HedgeRunConfig {
            gbm: *gbm,
            grid: TimeGrid::new(self.run.t_start, call.expiry, n_steps)?,
            call: *call,
            model: self.strategy.model,
            strategy: self.strategy.hedge,
            n_paths: self.run.n_paths,
            master_seed: self.run.master_seed,
            retain_ledgers: self.run.retain_ledgers,
            collect_drift_diagnostics: true,
        })
    }

    /// Assembles the storage run config; `base_dir` anchors relative
    /// curve CSV paths.
    pub fn storage_run(&self, base_dir: &Path) -> Result<StorageRunConfig> {
        let (MarketBlock::Curve(curve_market), InstrumentBlock::Storage(storage)) =
            (&self.market, &self.instrument)
        else {
            return Err(EngineError::Config("not a storage scenario".into()));
        };
        let initial_curve = curve_market.initial_curve(base_dir)?;
        if let Some(n) = self.run.n_steps {
            if n != initial_curve.len() {
                return Err(EngineError::Config(format!(
                    "run.n_steps = {n} but the curve has {} delivery periods \
                     (one observation step per period)",
                    initial_curve.len()
                )));
            }
        }
        Ok(StorageRunConfig {
            storage: *storage,
            factor_model: curve_market.factor_model(),
            initial_curve,
            n_paths: self.run.n_paths,
            master_seed: self.run.master_seed,
            hedging: !matches!(self.strategy.hedge, HedgeStrategy::None),
            retain_ledgers: self.run.retain_ledgers,
        })
    }
}
