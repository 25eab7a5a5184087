//! Frozen-curve theta probe.
//!
//! The target function `S = I - E` has no explicit time dependence:
//! advancing one period with the curve frozen books `dE` and shortens
//! `I` by exactly the same amount (the old plan's tail stays optimal on
//! an unchanged curve), so `dS = 0`. The probe replays retained steps
//! with the price increments forced to zero and measures the residual,
//! which can only be floating-point rounding on lattice-aligned levels.

use serde::Serialize;

use crate::error::{EngineError, Result};
use crate::storage::dispatch::intrinsic_optimize;
use crate::storage::run::StorageRunOutput;
use crate::storage::types::ForwardCurve;

#[derive(Debug, Clone, Serialize)]
pub struct ThetaProbeReport {
    pub steps_checked: usize,
    /// Largest `|dS|` seen across all frozen replays.
    pub max_abs_ds: f64,
    /// Steps where the re-solved plan differed from the old plan's tail
    /// (possible only on value ties; the values still agree).
    pub plan_tail_mismatches: usize,
}

/// Replays every retained step of every path with `dF = 0` and checks
/// `dS = (I_new - I_old) - dE = 0`.
pub fn theta_gamma_probe(output: &StorageRunOutput) -> Result<ThetaProbeReport> {
    let snapshots = output.snapshots.as_ref().ok_or_else(|| {
        EngineError::Unavailable("theta probe needs a run with retained ledgers".into())
    })?;
    let storage = &output.config.storage;
    let mut steps_checked = 0usize;
    let mut max_abs_ds = 0.0f64;
    let mut plan_tail_mismatches = 0usize;

    for path in snapshots {
        for snap in path {
            let front_volume = snap.plan.volume(0, storage);
            let d_exercise = front_volume * snap.curve.values[0];
            let new_level = snap.level + front_volume;
            // frozen curve: survivors keep their prices
            let frozen = ForwardCurve::new(
                snap.curve.t + snap.curve.delta_t,
                snap.curve.first_period + 1,
                snap.curve.delta_t,
                snap.curve.values[1..].to_vec(),
            )?;
            let (new_plan, new_intrinsic) = intrinsic_optimize(&frozen, storage, new_level)?;
            let ds = (new_intrinsic - snap.intrinsic_value) - d_exercise;
            if ds.abs() > max_abs_ds {
                max_abs_ds = ds.abs();
            }
            if new_plan.volume_units != snap.plan.volume_units[1..] {
                plan_tail_mismatches += 1;
            }
            steps_checked += 1;
        }
    }
    Ok(ThetaProbeReport { steps_checked, max_abs_ds, plan_tail_mismatches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::storage::run::{run_rolling_intrinsic, StorageRunConfig};
    use crate::storage::types::{CurveFactorModel, SigmaSpec, StorageSpec};

    fn config(retain: bool) -> StorageRunConfig {
        StorageRunConfig {
            storage: StorageSpec {
                q_min: 0.0,
                q_max: 40.0,
                rate_in_max: 10.0,
                rate_out_max: 20.0,
                q_initial: 10.0,
                q_terminal: 0.0,
                lattice_step: 10.0,
            },
            factor_model: CurveFactorModel { sigma: SigmaSpec::Flat(0.7), beta: 1.5 },
            initial_curve: ForwardCurve::new(
                0.0,
                0,
                1.0 / 12.0,
                vec![21.0, 19.5, 24.0, 18.0, 26.5, 23.0],
            )
            .unwrap(),
            n_paths: 64,
            master_seed: 99,
            hedging: true,
            retain_ledgers: retain,
        }
    }

    #[test]
    fn frozen_replay_has_zero_theta() {
        let out = run_rolling_intrinsic(&config(true)).unwrap();
        let report = theta_gamma_probe(&out).unwrap();
        assert_eq!(report.steps_checked, 64 * 6);
        assert!(
            report.max_abs_ds <= 1e-9,
            "frozen-curve dS should be rounding only, got {}",
            report.max_abs_ds
        );
    }

    #[test]
    fn unavailable_without_retained_ledgers() {
        let out = run_rolling_intrinsic(&config(false)).unwrap();
        assert!(matches!(theta_gamma_probe(&out), Err(EngineError::Unavailable(_))));
    }

    #[test]
    fn inactive_front_period_books_nothing() {
        // a plan that starts with a zero action must keep E unchanged
        // and I unchanged by the roll-off
        let storage = StorageSpec {
            q_min: 0.0,
            q_max: 1.0,
            rate_in_max: 1.0,
            rate_out_max: 1.0,
            q_initial: 0.0,
            q_terminal: 0.0,
            lattice_step: 1.0,
        };
        // cheapest period is the second: optimal plan waits one period
        let curve = ForwardCurve::new(0.0, 0, 0.25, vec![15.0, 10.0, 20.0]).unwrap();
        let (plan, value) = intrinsic_optimize(&curve, &storage, 0.0).unwrap();
        assert_eq!(plan.volume_units, vec![0, 1, -1]);
        let frozen =
            ForwardCurve::new(0.25, 1, 0.25, curve.values[1..].to_vec()).unwrap();
        let (_, tail_value) = intrinsic_optimize(&frozen, &storage, 0.0).unwrap();
        assert_eq!(tail_value, value); // dE = 0 and I unchanged
    }
}
