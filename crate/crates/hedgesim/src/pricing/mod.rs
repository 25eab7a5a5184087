//! Closed-form pricers for a European call.
//!
//! Three valuations of the same payoff are carried through the ledger:
//! the risk-neutral value `f` (Black-Scholes), the probabilistic value
//! `g` (expected payoff under the drifted real measure) and the
//! intrinsic value `I` (payoff applied to today's price). All three
//! agree with `max(F - K, 0)` at expiry, which is what makes the
//! terminal portfolio independent of the valuation choice.

pub mod black_scholes;
pub mod time_value;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};

pub use black_scholes::{bs_delta, bs_price};
pub use time_value::{
    gamma_integrand, lognormal_density, time_value_closed_form, time_value_quadrature,
    TimeValueParams,
};

/// European call: strike and expiry (years).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CallSpec {
    pub strike: f64,
    pub expiry: f64,
}

impl CallSpec {
    pub fn new(strike: f64, expiry: f64) -> Result<Self> {
        if !(strike > 0.0) {
            return Err(EngineError::InvalidInput(format!(
                "strike must be positive, got {strike}"
            )));
        }
        if !(expiry > 0.0) {
            return Err(EngineError::InvalidInput(format!(
                "expiry must be positive, got {expiry}"
            )));
        }
        Ok(Self { strike, expiry })
    }

    pub fn payoff(&self, f: f64) -> f64 {
        (f - self.strike).max(0.0)
    }
}

/// Which valuation labels the option leg of the portfolio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PricingModel {
    RiskNeutral,
    Probabilistic,
    Intrinsic,
}

/// Intrinsic call value `max(F - K, 0)`; no explicit time dependence.
pub fn intrinsic_price(f: f64, spec: &CallSpec) -> f64 {
    spec.payoff(f)
}

/// Intrinsic delta: the step function `1 if F > K else 0`. The value at
/// `F = K` is fixed to 0 (right-continuous payoff, left-continuous
/// delta) so that runs are deterministic; the event has measure zero.
pub fn intrinsic_delta(f: f64, spec: &CallSpec) -> f64 {
    if f > spec.strike {
        1.0
    } else {
        0.0
    }
}

/// Expected terminal payoff under GBM with drift `mu0`: the zero-rate
/// Black-Scholes formula evaluated at the drift-adjusted forward
/// `F e^{mu0 tau}`. For `mu0 = 0` this is exactly `bs_price`.
///
/// The drifted closed form is the GBM specialization of the abstract
/// conditional-expectation definition; other processes would need their
/// own expected-payoff integral.
pub fn probabilistic_price(f: f64, t: f64, spec: &CallSpec, sigma0: f64, mu0: f64) -> Result<f64> {
    let tau = (spec.expiry - t).max(0.0);
    bs_price(f * (mu0 * tau).exp(), t, spec, sigma0)
}

/// `d(probabilistic_price)/dF = e^{mu0 tau} N(d1(F e^{mu0 tau}))`.
pub fn probabilistic_delta(f: f64, t: f64, spec: &CallSpec, sigma0: f64, mu0: f64) -> Result<f64> {
    let tau = (spec.expiry - t).max(0.0);
    let growth = (mu0 * tau).exp();
    Ok(growth * bs_delta(f * growth, t, spec, sigma0)?)
}

/// Option value under the selected model.
pub fn option_value(
    model: PricingModel,
    f: f64,
    t: f64,
    spec: &CallSpec,
    sigma0: f64,
    mu0: f64,
) -> Result<f64> {
    match model {
        PricingModel::RiskNeutral => bs_price(f, t, spec, sigma0),
        PricingModel::Probabilistic => probabilistic_price(f, t, spec, sigma0, mu0),
        PricingModel::Intrinsic => Ok(intrinsic_price(f, spec)),
    }
}

/// Option delta under the selected model.
pub fn option_delta(
    model: PricingModel,
    f: f64,
    t: f64,
    spec: &CallSpec,
    sigma0: f64,
    mu0: f64,
) -> Result<f64> {
    match model {
        PricingModel::RiskNeutral => bs_delta(f, t, spec, sigma0),
        PricingModel::Probabilistic => probabilistic_delta(f, t, spec, sigma0, mu0),
        PricingModel::Intrinsic => Ok(intrinsic_delta(f, spec)),
    }
}
