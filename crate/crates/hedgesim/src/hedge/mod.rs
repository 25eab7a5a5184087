//! Self-financing hedging engine for a vanilla call: per-step ledger,
//! pluggable strategies, Monte Carlo over paths and the terminal
//! distribution estimators.

pub mod analysis;
pub mod ledger;
pub mod run;
pub mod strategy;

pub use analysis::{
    drift_decomposition, intrinsic_monotonicity_audit, intrinsic_time_value_estimate,
    variance_formula_check, DriftDecomposition, MonotonicityReport, VarianceCheck,
};
pub use ledger::{check_rows, step_ledger, IdentityViolation, LedgerRow, PortfolioState, StepContext};
pub use run::{run_paths, HedgeRunConfig, HedgeRunOutput, Quantiles, RunDiagnostics, TerminalDistribution};
pub use strategy::{target_hedge, DeltaKind, HedgeStrategy, StrategyContext};
