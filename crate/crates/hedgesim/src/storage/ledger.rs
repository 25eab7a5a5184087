//! Rolling-intrinsic storage ledger.
//!
//! The position is `Pi = I + H + P`: intrinsic value of the remaining
//! horizon, forward-hedge value and cash. Under the rolling-intrinsic
//! strategy the hedge mirrors the dispatch plan (`h_t(T) = q-dot`), so
//! after every rebalance `H = -I` holds identically. A step follows the
//! same causal order as the vanilla ledger:
//!
//! 1. the front period delivers: book the exercise trade
//!    `dE = volume * F_front` at the old curve and move the storage
//!    level (no cash: the delivered volume was bought or sold through
//!    the hedge);
//! 2. the surviving curve diffuses, increments are observed;
//! 3. the dispatch is re-optimized from the new level on the new curve;
//! 4. the hedge is rebalanced at observed prices:
//!    `dP = -sum (F + dF) d(volume)`.
//!
//! Because the new plan is optimal where the old tail is merely
//! feasible, every rebalance books non-negative cash; the cumulative
//! rebalance cash is the Monte Carlo time value.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::storage::curve::step_curve;
use crate::storage::dispatch::intrinsic_optimize;
use crate::storage::types::{CurveFactorModel, ExercisePlan, ForwardCurve, StorageSpec};

/// Ledger state after a step (or after the opening rebalance).
#[derive(Debug, Clone)]
pub struct StorageState {
    pub curve: ForwardCurve,
    pub plan: ExercisePlan,
    /// Current storage level (lattice-aligned volume).
    pub level: f64,
    /// `I(t)`: optimal dispatch value of the remaining horizon.
    pub intrinsic_value: f64,
    /// `E(t)`: cumulative value of closed (delivered) trades.
    pub exercise_value: f64,
    /// Cash booked by the opening hedge.
    pub setup_cash: f64,
    /// Cash accumulated by plan-revision trades since the opening; this
    /// single accumulator backs both cash-flow time-value estimators.
    pub rebalance_cash: f64,
    /// Spot cash from exercising unhedged (zero when hedging).
    pub exercise_cash: f64,
    pub hedging: bool,
}

impl StorageState {
    /// Hedge value; mirrors the intrinsic value exactly while hedging.
    pub fn hedge_value(&self) -> f64 {
        if self.hedging {
            -self.intrinsic_value
        } else {
            0.0
        }
    }

    pub fn cash(&self) -> f64 {
        if self.hedging {
            self.setup_cash + self.rebalance_cash
        } else {
            self.exercise_cash
        }
    }

    pub fn portfolio(&self) -> f64 {
        self.intrinsic_value + self.hedge_value() + self.cash()
    }

    /// Target function `S = I - E`.
    pub fn target_function(&self) -> f64 {
        self.intrinsic_value - self.exercise_value
    }

    pub fn row(&self, step: usize) -> StorageLedgerRow {
        StorageLedgerRow {
            step,
            t: self.curve.t,
            level: self.level,
            intrinsic_value: self.intrinsic_value,
            exercise_value: self.exercise_value,
            target_function: self.target_function(),
            hedge_value: self.hedge_value(),
            cash: self.cash(),
            portfolio: self.portfolio(),
        }
    }
}

/// One CSV-able snapshot of the storage ledger.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StorageLedgerRow {
    pub step: usize,
    pub t: f64,
    pub level: f64,
    pub intrinsic_value: f64,
    pub exercise_value: f64,
    pub target_function: f64,
    pub hedge_value: f64,
    pub cash: f64,
    pub portfolio: f64,
}

/// What one step booked.
#[derive(Debug, Clone, Copy)]
pub struct StorageStepRecord {
    /// Exercise trade value `volume * F_front` of the delivered period.
    pub d_exercise: f64,
    /// Cash booked by the rebalance (zero when not hedging).
    pub d_rebalance: f64,
}

/// Opens the position at `t = 0`: solve the dispatch, and when hedging
/// place the full forward hedge. The opening trade books cash equal to
/// the intrinsic value and a hedge worth its negative, so the portfolio
/// stays at `I(0)` through the set-up.
pub fn open_position(
    curve: &ForwardCurve,
    storage: &StorageSpec,
    hedging: bool,
) -> Result<StorageState> {
    let (plan, intrinsic) = intrinsic_optimize(curve, storage, storage.q_initial)?;
    Ok(StorageState {
        curve: curve.clone(),
        plan,
        level: storage.q_initial,
        intrinsic_value: intrinsic,
        exercise_value: 0.0,
        setup_cash: if hedging { intrinsic } else { 0.0 },
        rebalance_cash: 0.0,
        exercise_cash: 0.0,
        hedging,
    })
}

/// Advances the ledger by one delivery period (see the module doc for
/// the ordering contract).
pub fn rolling_intrinsic_step<R: Rng>(
    state: &StorageState,
    storage: &StorageSpec,
    model: &CurveFactorModel,
    rng: &mut R,
) -> Result<(StorageState, StorageStepRecord)> {
    // (1) the front period delivers at the old curve
    let front_volume = state.plan.volume(0, storage);
    let d_exercise = front_volume * state.curve.values[0];
    let new_level = state.level + front_volume;

    // (2) surviving periods diffuse
    let (new_curve, _increments) = step_curve(&state.curve, model, rng)?;

    // (3) re-optimize from the new level
    let (new_plan, new_intrinsic) = intrinsic_optimize(&new_curve, storage, new_level)?;

    // (4) rebalance the hedge at observed prices
    let mut d_rebalance = 0.0;
    if state.hedging {
        for j in 0..new_curve.len() {
            let d_volume = new_plan.volume(j, storage) - state.plan.volume(j + 1, storage);
            d_rebalance -= new_curve.values[j] * d_volume;
        }
    }

    let next = StorageState {
        curve: new_curve,
        plan: new_plan,
        level: new_level,
        intrinsic_value: new_intrinsic,
        exercise_value: state.exercise_value + d_exercise,
        setup_cash: state.setup_cash,
        rebalance_cash: state.rebalance_cash + d_rebalance,
        exercise_cash: if state.hedging {
            state.exercise_cash
        } else {
            state.exercise_cash - d_exercise
        },
        hedging: state.hedging,
    };
    Ok((next, StorageStepRecord { d_exercise, d_rebalance }))
}
