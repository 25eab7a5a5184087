//! Hedging policies: a rule mapping (time, observed price, current
//! position) to the next hedge position.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pricing::{bs_delta, intrinsic_delta, probabilistic_delta, CallSpec};

/// Which delta feeds a delta-based policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaKind {
    RiskNeutral,
    DriftAdjusted,
    Intrinsic,
}

/// The five built-in policies.
///
/// `BidOffer` only partially adjusts towards the inner delta each step,
/// `h <- h - k (h + delta) dt`: the explicit Euler form of the
/// relaxation `dh = -k (h + C') dt`. `k = 0` never trades, large `k`
/// tracks the full delta hedge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HedgeStrategy {
    None,
    RiskNeutralDelta,
    DriftAdjustedDelta,
    IntrinsicDelta,
    BidOffer { k: f64, inner: DeltaKind },
}

impl HedgeStrategy {
    pub fn label(&self) -> String {
        match self {
            HedgeStrategy::None => "none".into(),
            HedgeStrategy::RiskNeutralDelta => "risk_neutral_delta".into(),
            HedgeStrategy::DriftAdjustedDelta => "drift_adjusted_delta".into(),
            HedgeStrategy::IntrinsicDelta => "intrinsic_delta".into(),
            HedgeStrategy::BidOffer { k, .. } => format!("bid_offer(k={k})"),
        }
    }
}

/// Market inputs a policy may consult when rebalancing.
#[derive(Debug, Clone, Copy)]
pub struct StrategyContext<'a> {
    pub call: &'a CallSpec,
    pub sigma0: f64,
    pub mu0: f64,
    /// Observation step width; the bid-offer relaxation uses it.
    pub dt: f64,
}

impl StrategyContext<'_> {
    /// Time used inside delta formulas: the final rebalance floors the
    /// remaining life at `dt/2` so deltas stay finite approaching
    /// expiry. Option-leg repricing is unaffected (it switches to the
    /// exact payoff at expiry).
    fn delta_time(&self, t: f64) -> f64 {
        t.min(self.call.expiry - 0.5 * self.dt)
    }

    fn delta(&self, kind: DeltaKind, t: f64, f: f64) -> Result<f64> {
        let td = self.delta_time(t);
        match kind {
            DeltaKind::RiskNeutral => bs_delta(f, td, self.call, self.sigma0),
            DeltaKind::DriftAdjusted => {
                probabilistic_delta(f, td, self.call, self.sigma0, self.mu0)
            }
            DeltaKind::Intrinsic => Ok(intrinsic_delta(f, self.call)),
        }
    }
}

/// Target position after observing price `f` at time `t` while holding
/// `h_current`. Policies are evaluated at the post-move price: the
/// increment is decided only after the move is seen.
pub fn target_hedge(
    strategy: &HedgeStrategy,
    t: f64,
    f: f64,
    h_current: f64,
    ctx: &StrategyContext,
) -> Result<f64> {
    match strategy {
        HedgeStrategy::None => Ok(h_current),
        HedgeStrategy::RiskNeutralDelta => Ok(-ctx.delta(DeltaKind::RiskNeutral, t, f)?),
        HedgeStrategy::DriftAdjustedDelta => Ok(-ctx.delta(DeltaKind::DriftAdjusted, t, f)?),
        HedgeStrategy::IntrinsicDelta => Ok(-ctx.delta(DeltaKind::Intrinsic, t, f)?),
        HedgeStrategy::BidOffer { k, inner } => {
            let delta = ctx.delta(*inner, t, f)?;
            Ok(h_current - k * (h_current + delta) * ctx.dt)
        }
    }
}
