//! Exact intrinsic dispatch optimization on the volume lattice.
//!
//! The intrinsic value of the storage for the remaining horizon is the
//! optimum of a linear program over dispatch volumes; on a lattice whose
//! pitch divides all rate bounds and level gaps the optimum is attained
//! on lattice points, so backward dynamic programming over (period,
//! level) solves it exactly. Ties are broken toward the zero action,
//! then toward withdrawal, which makes re-solved plans deterministic.

use crate::error::{EngineError, Result};
use crate::storage::types::{ExercisePlan, ForwardCurve, Lattice, StorageSpec};

/// Canonical plan value: `I = -sum_j volume_j * F_j`, folded back to
/// front. The DP recursion accumulates its values in exactly this
/// order, so a plan's canonical value is bit-identical to the DP value
/// that selected it; frozen-curve replays and brute-force comparisons
/// stay exact instead of drifting by summation order.
pub fn plan_value(plan: &ExercisePlan, curve: &ForwardCurve, storage: &StorageSpec) -> f64 {
    debug_assert_eq!(plan.len(), curve.len());
    let mut acc = 0.0;
    for j in (0..plan.len()).rev() {
        acc += -(plan.volume_units[j] as f64 * storage.lattice_step) * curve.values[j];
    }
    acc
}

/// Checks that `q_terminal` is reachable before running the DP and
/// names the earliest delivery period at which it stops being so.
fn check_feasible(lattice: &Lattice, level_units: i64, n_periods: usize) -> Result<()> {
    if level_units < 0 || level_units >= lattice.n_levels {
        return Err(EngineError::Infeasible {
            period: 0,
            reason: format!(
                "starting level {} outside the volume box [0, {}]",
                level_units,
                lattice.n_levels - 1
            ),
        });
    }
    let mut lo = level_units;
    let mut hi = level_units;
    for j in 0..=n_periods {
        let remaining = (n_periods - j) as i64;
        let need_lo = lattice.terminal - lattice.max_inject * remaining;
        let need_hi = lattice.terminal + lattice.max_withdraw * remaining;
        if hi < need_lo || lo > need_hi {
            return Err(EngineError::Infeasible {
                period: j,
                reason: format!(
                    "levels reachable at period {j} are [{lo}, {hi}] but reaching \
                     q_terminal needs [{need_lo}, {need_hi}]"
                ),
            });
        }
        lo = (lo - lattice.max_withdraw).max(0);
        hi = (hi + lattice.max_inject).min(lattice.n_levels - 1);
    }
    Ok(())
}

/// Solves the intrinsic dispatch problem for the remaining horizon from
/// storage level `level`, returning the optimal plan and its value
/// `I = -sum volume * F`.
pub fn intrinsic_optimize(
    curve: &ForwardCurve,
    storage: &StorageSpec,
    level: f64,
) -> Result<(ExercisePlan, f64)> {
    let lattice = storage.lattice()?;
    let level_units = {
        let raw = (level - storage.q_min) / storage.lattice_step;
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-6 {
            return Err(EngineError::InvalidInput(format!(
                "storage level {level} is not on the volume lattice"
            )));
        }
        rounded as i64
    };
    let n = curve.len();
    check_feasible(&lattice, level_units, n)?;

    let n_levels = lattice.n_levels as usize;
    // backward value table and chosen action per (period, level)
    let mut value_next = vec![f64::NEG_INFINITY; n_levels];
    let mut value_here = vec![f64::NEG_INFINITY; n_levels];
    value_next[lattice.terminal as usize] = 0.0;
    let mut action = vec![0i64; n * n_levels];

    // candidate actions in tie-break preference order:
    // zero first, then withdrawal before injection at equal magnitude
    let mut candidates = vec![0i64];
    for m in 1..=lattice.max_withdraw.max(lattice.max_inject) {
        if m <= lattice.max_withdraw {
            candidates.push(-m);
        }
        if m <= lattice.max_inject {
            candidates.push(m);
        }
    }

    for j in (0..n).rev() {
        let price = curve.values[j];
        for q in 0..n_levels as i64 {
            let mut best = f64::NEG_INFINITY;
            let mut best_action = 0i64;
            for &d in &candidates {
                let q_next = q + d;
                if q_next < 0 || q_next >= lattice.n_levels {
                    continue;
                }
                let continuation = value_next[q_next as usize];
                if continuation == f64::NEG_INFINITY {
                    continue;
                }
                // cash of the dispatch: buy (d > 0) pays, sell earns
                let v = -(d as f64 * storage.lattice_step) * price + continuation;
                if v > best {
                    best = v;
                    best_action = d;
                }
            }
            value_here[q as usize] = best;
            action[j * n_levels + q as usize] = best_action;
        }
        std::mem::swap(&mut value_next, &mut value_here);
    }

    let total = value_next[level_units as usize];
    debug_assert!(total.is_finite(), "feasibility precheck admitted an infeasible level");

    // forward extraction of the argmax chain
    let mut volume_units = Vec::with_capacity(n);
    let mut q = level_units;
    for j in 0..n {
        let d = action[j * n_levels + q as usize];
        volume_units.push(d);
        q += d;
    }
    debug_assert_eq!(q, lattice.terminal);

    let plan = ExercisePlan { volume_units };
    debug_assert_eq!(plan_value(&plan, curve, storage), total);
    Ok((plan, total))
}
