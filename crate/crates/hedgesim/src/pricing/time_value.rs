//! Closed-form call time value from the driftless-GBM gamma integral.
//!
//! The time value of a call equals the expected accumulated gamma P&L of
//! an intrinsically hedged position,
//! `V_T = integral_0^T Gamma(t) dt` with
//! `Gamma(t) = (sigma K / 2) (2 pi t)^{-1/2} exp(-(ln(K/F0) + sigma^2 t / 2)^2 / (2 sigma^2 t))`.
//! Substituting `y = sqrt(t)` the integral has an antiderivative in error
//! functions, giving the closed form evaluated here. It coincides with
//! `bs_price - intrinsic_price`; the two routes are kept fully separate
//! so the identity stays a meaningful cross-check.

use crate::error::{EngineError, Result};
use crate::math::{erf, quad};
use crate::pricing::CallSpec;

/// Parameters of the reduced gamma integral:
/// `a = sigma / (2 sqrt(2))`, `b = ln(K / F0) / (sigma sqrt(2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeValueParams {
    pub a: f64,
    pub b: f64,
}

impl TimeValueParams {
    pub fn new(spec: &CallSpec, f0: f64, sigma0: f64) -> Result<Self> {
        if !(sigma0 > 0.0) {
            return Err(EngineError::InvalidInput(format!(
                "sigma0 must be positive, got {sigma0}"
            )));
        }
        if !(f0 > 0.0) {
            return Err(EngineError::InvalidInput(format!("f0 must be positive, got {f0}")));
        }
        Ok(Self {
            a: sigma0 / (2.0 * std::f64::consts::SQRT_2),
            b: (spec.strike / f0).ln() / (sigma0 * std::f64::consts::SQRT_2),
        })
    }
}

/// Driftless GBM transition density
/// `P(F, t) = (F sigma sqrt(2 pi t))^{-1} exp(-(ln(F/F0) + sigma^2 t/2)^2 / (2 sigma^2 t))`.
pub fn lognormal_density(f: f64, t: f64, f0: f64, sigma0: f64) -> Result<f64> {
    if !(f > 0.0) || !(t > 0.0) {
        return Err(EngineError::InvalidInput(format!(
            "lognormal density needs F > 0 and t > 0, got F={f}, t={t}"
        )));
    }
    if !(sigma0 > 0.0) || !(f0 > 0.0) {
        return Err(EngineError::InvalidInput(
            "lognormal density needs sigma0 > 0 and f0 > 0".into(),
        ));
    }
    let var = sigma0 * sigma0 * t;
    let arg = (f / f0).ln() + 0.5 * var;
    Ok((-arg * arg / (2.0 * var)).exp() / (f * sigma0 * (2.0 * std::f64::consts::PI * t).sqrt()))
}

/// Gamma P&L rate of the intrinsically hedged call,
/// `Gamma(t) = (sigma^2 K^2 / 2) P(K, t)` written out explicitly.
pub fn gamma_integrand(t: f64, spec: &CallSpec, f0: f64, sigma0: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(EngineError::InvalidInput(format!("gamma integrand needs t > 0, got {t}")));
    }
    if !(sigma0 > 0.0) || !(f0 > 0.0) {
        return Err(EngineError::InvalidInput(
            "gamma integrand needs sigma0 > 0 and f0 > 0".into(),
        ));
    }
    let var = sigma0 * sigma0 * t;
    let arg = (spec.strike / f0).ln() + 0.5 * var;
    Ok(0.5 * sigma0 * spec.strike / (2.0 * std::f64::consts::PI * t).sqrt()
        * (-arg * arg / (2.0 * var)).exp())
}

/// Closed-form `V_T = integral_0^T Gamma dt`, branching on the sign of
/// `b` (the two error-function antiderivative branches meet at `F0 = K`):
///
/// ```text
/// F0 < K:  V_T = ((F0 - K) + F0 erf(k1) + K erf(k2)) / 2
/// F0 > K:  V_T = ((K - F0) + F0 erf(k1) + K erf(k2)) / 2
/// k1 = (sigma^2 T/2 - ln(K/F0)) / (sigma sqrt(2 T))
/// k2 = (sigma^2 T/2 + ln(K/F0)) / (sigma sqrt(2 T))
/// ```
pub fn time_value_closed_form(spec: &CallSpec, f0: f64, sigma0: f64, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(EngineError::InvalidInput(format!(
            "closed-form time value needs T > 0, got {horizon}"
        )));
    }
    let params = TimeValueParams::new(spec, f0, sigma0)?;
    let k = spec.strike;
    let log_kf = (k / f0).ln();
    let denom = sigma0 * (2.0 * horizon).sqrt();
    let half_var = 0.5 * sigma0 * sigma0 * horizon;
    let k1 = (half_var - log_kf) / denom;
    let k2 = (half_var + log_kf) / denom;
    // b > 0 below the strike, b < 0 above; the branches share the
    // error-function part and meet at b = 0
    let boundary = if params.b > 0.0 {
        f0 - k
    } else if params.b < 0.0 {
        k - f0
    } else {
        0.0
    };
    Ok(0.5 * (boundary + f0 * erf(k1) + k * erf(k2)))
}

/// Adaptive quadrature of `integral_0^T Gamma dt`, the independent route
/// against the closed form. Integrates in `y = sqrt(t)` where the
/// integrand is smooth: `Gamma(y^2) * 2y = sigma K / sqrt(2 pi) * exp(...)`.
pub fn time_value_quadrature(spec: &CallSpec, f0: f64, sigma0: f64, horizon: f64) -> Result<f64> {
    if !(sigma0 > 0.0) || !(horizon > 0.0) || !(f0 > 0.0) {
        return Err(EngineError::InvalidInput(
            "quadrature time value needs sigma0 > 0, T > 0, f0 > 0".into(),
        ));
    }
    let k = spec.strike;
    let log_kf = (k / f0).ln();
    let scale = sigma0 * k / (2.0 * std::f64::consts::PI).sqrt();
    let integrand = move |y: f64| {
        if y == 0.0 {
            // limit: 0 off the money, scale at the money
            return if log_kf == 0.0 { scale } else { 0.0 };
        }
        let var = sigma0 * sigma0 * y * y;
        let arg = log_kf + 0.5 * var;
        scale * (-arg * arg / (2.0 * var)).exp()
    };
    Ok(quad::integrate(&integrand, 0.0, horizon.sqrt(), 1e-10))
}
