//! Storage option on a driftless forward-curve market: correlated curve
//! simulation, exact lattice dispatch, the rolling-intrinsic ledger and
//! its time-value estimators.
//!
//! Sign convention used throughout: dispatch volumes and rates follow
//! the storage level derivative `q-dot` — positive injects (buys),
//! negative withdraws (sells). The intrinsic value is
//! `I = -sum volume * F`, so buying low and selling high is positive.

pub mod curve;
pub mod dispatch;
pub mod ledger;
pub mod probe;
pub mod run;
pub mod types;

pub use curve::{curve_from_points, read_curve_csv, step_curve};
pub use dispatch::{intrinsic_optimize, plan_value};
pub use ledger::{
    open_position, rolling_intrinsic_step, StorageLedgerRow, StorageState, StorageStepRecord,
};
pub use probe::{theta_gamma_probe, ThetaProbeReport};
pub use run::{
    run_rolling_intrinsic, StorageEstimators, StoragePathStats, StorageRunConfig,
    StorageRunOutput, StorageSnapshot,
};
pub use types::{CurveFactorModel, ExercisePlan, ForwardCurve, Lattice, SigmaSpec, StorageSpec};
