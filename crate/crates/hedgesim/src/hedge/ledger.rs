//! Exact discrete-time portfolio ledger.
//!
//! The portfolio is `Pi = C + H + P`: option leg, hedge value
//! `H = h F`, cash account. One step follows a strict causal order:
//!
//! 1. observe the price increment `dF`;
//! 2. reprice the option leg at `(t + dt, F + dF)`;
//! 3. compute the new target hedge at the new price;
//! 4. book the trade at the new price: `dP = -(F + dF) dh`.
//!
//! Booking the trade at the observed post-move price is what makes the
//! portfolio self-financing in discrete time: `d(H + P) = h dF` holds
//! with no `O(dt)` truncation, so opening or closing any hedge position
//! never moves `Pi`. All bookkeeping is exact accounting on the realized
//! increments, never a truncated expansion.

use serde::Serialize;

use crate::error::{EngineError, Result};
use crate::hedge::strategy::{target_hedge, HedgeStrategy, StrategyContext};
use crate::pricing::{option_value, CallSpec, PricingModel};

/// Portfolio snapshot after a step.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PortfolioState {
    pub t: f64,
    /// Option leg value under the configured pricing model (`C`).
    pub option_value: f64,
    /// Hedge position in units of underlying (`h`).
    pub hedge_position: f64,
    /// Hedge value `H = h F`.
    pub hedge_value: f64,
    /// Cash account (`P`).
    pub cash: f64,
    /// `Pi = C + H + P`, stored as that exact sum.
    pub portfolio: f64,
}

impl PortfolioState {
    /// Opening state: no hedge, no cash, portfolio equals the initial
    /// option value.
    pub fn opening(f0: f64, call: &CallSpec, model: PricingModel, sigma0: f64, mu0: f64) -> Result<Self> {
        let c0 = option_value(model, f0, 0.0, call, sigma0, mu0)?;
        Ok(Self {
            t: 0.0,
            option_value: c0,
            hedge_position: 0.0,
            hedge_value: 0.0,
            cash: 0.0,
            portfolio: c0,
        })
    }

    fn check_consistency(&self) -> Result<()> {
        let sum = self.option_value + self.hedge_value + self.cash;
        let scale = 1.0 + self.option_value.abs() + self.hedge_value.abs() + self.cash.abs();
        if (self.portfolio - sum).abs() > 1e-9 * scale {
            return Err(EngineError::LedgerInvariant(format!(
                "Pi = {} but C + H + P = {}",
                self.portfolio, sum
            )));
        }
        Ok(())
    }
}

/// One ledger step: pre-step price and increment, the booked deltas and
/// the post-step state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LedgerRow {
    pub step: usize,
    /// Price before the step.
    pub price: f64,
    /// Observed increment over the step.
    pub d_price: f64,
    pub d_hedge_position: f64,
    pub d_cash: f64,
    pub d_hedge_value: f64,
    pub d_option_value: f64,
    pub d_portfolio: f64,
    pub state: PortfolioState,
}

/// Everything a step needs besides the state itself.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub call: &'a CallSpec,
    pub model: PricingModel,
    pub strategy: &'a HedgeStrategy,
    pub sigma0: f64,
    pub mu0: f64,
    pub dt: f64,
}

impl<'a> StepContext<'a> {
    fn strategy_ctx(&self) -> StrategyContext<'a> {
        StrategyContext { call: self.call, sigma0: self.sigma0, mu0: self.mu0, dt: self.dt }
    }
}

/// Advances the ledger by one observed increment. `t_new` is the grid
/// time after the step (callers pass exact grid times so the final step
/// lands on expiry without rounding drift).
///
/// The initial hedge set-up is the same call with `df = 0` and
/// `t_new = 0`: rebalancing at an unchanged price moves cash and hedge
/// value by equal and opposite amounts, so `Pi` stays continuous.
pub fn step_ledger(
    state: &PortfolioState,
    f: f64,
    df: f64,
    t_new: f64,
    step: usize,
    ctx: &StepContext,
) -> Result<(PortfolioState, LedgerRow)> {
    state.check_consistency()?;
    let f_new = f + df;
    if !(f_new > 0.0) {
        return Err(EngineError::InvalidInput(format!(
            "price must stay positive, got F + dF = {f_new}"
        )));
    }

    // (2) reprice the option leg at the new time and price
    let c_new = option_value(ctx.model, f_new, t_new, ctx.call, ctx.sigma0, ctx.mu0)?;

    // (3) new target hedge, decided at the observed post-move price
    let h_new = target_hedge(ctx.strategy, t_new, f_new, state.hedge_position, &ctx.strategy_ctx())?;
    let dh = h_new - state.hedge_position;

    // (4) the trade is booked at the post-move price
    let d_cash = -f_new * dh;
    let cash_new = state.cash + d_cash;
    let hedge_value_new = h_new * f_new;

    let new_state = PortfolioState {
        t: t_new,
        option_value: c_new,
        hedge_position: h_new,
        hedge_value: hedge_value_new,
        cash: cash_new,
        portfolio: c_new + hedge_value_new + cash_new,
    };
    let row = LedgerRow {
        step,
        price: f,
        d_price: df,
        d_hedge_position: dh,
        d_cash,
        d_hedge_value: hedge_value_new - state.hedge_value,
        d_option_value: c_new - state.option_value,
        d_portfolio: new_state.portfolio - state.portfolio,
        state: new_state,
    };
    Ok((new_state, row))
}

/// A detected violation of the per-step accounting identities.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityViolation {
    pub step: usize,
    pub identity: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks the three ledger identities on every row:
/// `dP = -(F + dF) dh`, `d(H + P) = h dF` (with `h` the position held
/// across the step) and `Pi = C + H + P`. `tol` is an absolute bound on
/// the residual scaled by the row's own magnitudes; the identities are
/// exact accounting, so anything beyond a few ulps is a real violation.
pub fn check_rows(opening: &PortfolioState, rows: &[LedgerRow], tol: f64) -> Vec<IdentityViolation> {
    let mut violations = Vec::new();
    let mut prev_h = opening.hedge_position;
    let mut prev_hp = opening.hedge_value + opening.cash;
    for row in rows {
        let s = &row.state;
        let f_new = row.price + row.d_price;
        let scale = 1.0 + f_new.abs() * (1.0 + prev_h.abs() + row.d_hedge_position.abs());

        let booked = -f_new * row.d_hedge_position;
        if (row.d_cash - booked).abs() > tol * scale {
            violations.push(IdentityViolation {
                step: row.step,
                identity: "dP = -(F + dF) dh",
                lhs: row.d_cash,
                rhs: booked,
            });
        }
        let dhp = (s.hedge_value + s.cash) - prev_hp;
        let carried = prev_h * row.d_price;
        if (dhp - carried).abs() > tol * scale {
            violations.push(IdentityViolation {
                step: row.step,
                identity: "d(H + P) = h dF",
                lhs: dhp,
                rhs: carried,
            });
        }
        let dh_expected = prev_h * row.d_price + f_new * row.d_hedge_position;
        if (row.d_hedge_value - dh_expected).abs() > tol * scale {
            violations.push(IdentityViolation {
                step: row.step,
                identity: "dH = h dF + (F + dF) dh",
                lhs: row.d_hedge_value,
                rhs: dh_expected,
            });
        }
        let sum = s.option_value + s.hedge_value + s.cash;
        if (s.portfolio - sum).abs() > tol * scale {
            violations.push(IdentityViolation {
                step: row.step,
                identity: "Pi = C + H + P",
                lhs: s.portfolio,
                rhs: sum,
            });
        }
        prev_h = s.hedge_position;
        prev_hp = s.hedge_value + s.cash;
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixtures() -> (CallSpec, PortfolioState) {
        let call = CallSpec::new(100.0, 1.0).unwrap();
        let state =
            PortfolioState::opening(100.0, &call, PricingModel::RiskNeutral, 0.2, 0.0).unwrap();
        (call, state)
    }

    #[test]
    fn opening_state_matches_option_value() {
        let (_, state) = fixtures();
        assert_eq!(state.hedge_position, 0.0);
        assert_eq!(state.hedge_value, 0.0);
        assert_eq!(state.cash, 0.0);
        assert!((state.portfolio - 7.965567455405796).abs() < 1e-12);
    }

    #[test]
    fn fixed_hedge_step_books_no_cash() {
        let (call, state) = fixtures();
        let strategy = HedgeStrategy::None;
        let ctx = StepContext {
            call: &call,
            model: PricingModel::RiskNeutral,
            strategy: &strategy,
            sigma0: 0.2,
            mu0: 0.0,
            dt: 1.0 / 64.0,
        };
        let (next, row) = step_ledger(&state, 100.0, 2.5, 1.0 / 64.0, 1, &ctx).unwrap();
        assert_eq!(row.d_cash, 0.0);
        assert_eq!(row.d_hedge_position, 0.0);
        // with h = 0 the portfolio change is the option change alone
        assert!((row.d_portfolio - row.d_option_value).abs() < 1e-12);
        assert_eq!(next.cash, 0.0);
    }

    #[test]
    fn rebalance_at_unchanged_price_is_value_neutral() {
        let (call, state) = fixtures();
        let strategy = HedgeStrategy::RiskNeutralDelta;
        let ctx = StepContext {
            call: &call,
            model: PricingModel::RiskNeutral,
            strategy: &strategy,
            sigma0: 0.2,
            mu0: 0.0,
            dt: 1.0 / 64.0,
        };
        // set-up trade: df = 0 at t = 0
        let (next, row) = step_ledger(&state, 100.0, 0.0, 0.0, 0, &ctx).unwrap();
        assert!(row.d_hedge_position < 0.0); // short delta
        assert_eq!(row.d_cash, -100.0 * row.d_hedge_position);
        assert_eq!(row.d_hedge_value, 100.0 * row.d_hedge_position);
        // H(+0) + P(+0) = 0 and Pi continuous
        assert!((next.hedge_value + next.cash).abs() < 1e-12);
        assert!((row.d_portfolio).abs() < 1e-12);
    }

    #[test]
    fn upward_strike_crossing_gains_exactly_the_overshoot() {
        // intrinsic leg + intrinsic hedge, held flat below the strike:
        // crossing K from below books dPi = F' - K
        let call = CallSpec::new(100.0, 1.0).unwrap();
        let state =
            PortfolioState::opening(95.0, &call, PricingModel::Intrinsic, 0.2, 0.0).unwrap();
        let strategy = HedgeStrategy::IntrinsicDelta;
        let ctx = StepContext {
            call: &call,
            model: PricingModel::Intrinsic,
            strategy: &strategy,
            sigma0: 0.2,
            mu0: 0.0,
            dt: 0.25,
        };
        let (state, setup) = step_ledger(&state, 95.0, 0.0, 0.0, 0, &ctx).unwrap();
        assert_eq!(setup.d_hedge_position, 0.0); // below strike: no hedge
        let (_, row) = step_ledger(&state, 95.0, 8.0, 0.25, 1, &ctx).unwrap();
        assert_eq!(row.d_portfolio, 3.0); // F' - K = 103 - 100
    }

    #[test]
    fn inconsistent_state_rejected() {
        let (call, mut state) = fixtures();
        state.portfolio += 1.0;
        let strategy = HedgeStrategy::None;
        let ctx = StepContext {
            call: &call,
            model: PricingModel::RiskNeutral,
            strategy: &strategy,
            sigma0: 0.2,
            mu0: 0.0,
            dt: 0.01,
        };
        assert!(matches!(
            step_ledger(&state, 100.0, 1.0, 0.01, 1, &ctx),
            Err(EngineError::LedgerInvariant(_))
        ));
    }

    #[test]
    fn corrupted_rows_are_flagged() {
        let (call, state) = fixtures();
        let strategy = HedgeStrategy::RiskNeutralDelta;
        let ctx = StepContext {
            call: &call,
            model: PricingModel::RiskNeutral,
            strategy: &strategy,
            sigma0: 0.2,
            mu0: 0.0,
            dt: 0.25,
        };
        let mut rows = Vec::new();
        let (s1, r1) = step_ledger(&state, 100.0, 0.0, 0.0, 0, &ctx).unwrap();
        rows.push(r1);
        let (_s2, r2) = step_ledger(&s1, 100.0, 3.0, 0.25, 1, &ctx).unwrap();
        rows.push(r2);
        assert!(check_rows(&state, &rows, 1e-9).is_empty());

        // negative control: nudge the cash booking
        rows[1].d_cash += 0.01;
        rows[1].state.cash += 0.01;
        let violations = check_rows(&state, &rows, 1e-9);
        assert!(!violations.is_empty());
        assert!(violations.iter().any(|v| v.identity.starts_with("dP")));
    }
}
