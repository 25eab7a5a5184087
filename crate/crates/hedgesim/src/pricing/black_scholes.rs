//! Zero-rate Black-Scholes call pricer.
//!
//! Prices are denominated in riskless-bond units, so no discounting
//! appears: `f = F N(d1) - K N(d2)` with
//! `d1 = (ln(F/K) + sigma^2 tau / 2) / (sigma sqrt(tau))`.

use crate::error::{EngineError, Result};
use crate::math::normal_cdf;
use crate::pricing::CallSpec;

fn check_inputs(f: f64, t: f64, spec: &CallSpec) -> Result<f64> {
    if !(f > 0.0) {
        return Err(EngineError::InvalidInput(format!("spot must be positive, got {f}")));
    }
    let slack = 1e-9 * spec.expiry.max(1.0);
    if t > spec.expiry + slack {
        return Err(EngineError::InvalidInput(format!(
            "valuation time {t} is past expiry {}",
            spec.expiry
        )));
    }
    Ok((spec.expiry - t).max(0.0))
}

/// Call value solving the zero-rate Black-Scholes equation with terminal
/// condition `max(F - K, 0)`; at `t = T_e` returns the payoff exactly.
pub fn bs_price(f: f64, t: f64, spec: &CallSpec, sigma0: f64) -> Result<f64> {
    let tau = check_inputs(f, t, spec)?;
    if tau == 0.0 || sigma0 == 0.0 {
        return Ok((f - spec.strike).max(0.0));
    }
    let srt = sigma0 * tau.sqrt();
    let d1 = ((f / spec.strike).ln() + 0.5 * sigma0 * sigma0 * tau) / srt;
    let d2 = d1 - srt;
    Ok(f * normal_cdf(d1) - spec.strike * normal_cdf(d2))
}

/// `d(bs_price)/dF = N(d1)`; strictly inside (0, 1) for `t < T_e` and
/// positive volatility.
pub fn bs_delta(f: f64, t: f64, spec: &CallSpec, sigma0: f64) -> Result<f64> {
    let tau = check_inputs(f, t, spec)?;
    if tau == 0.0 || sigma0 == 0.0 {
        return Ok(if f > spec.strike { 1.0 } else { 0.0 });
    }
    let srt = sigma0 * tau.sqrt();
    let d1 = ((f / spec.strike).ln() + 0.5 * sigma0 * sigma0 * tau) / srt;
    Ok(normal_cdf(d1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call() -> CallSpec {
        CallSpec::new(100.0, 1.0).unwrap()
    }

    #[test]
    fn terminal_boundary_is_exact_payoff() {
        let c = call();
        assert_eq!(bs_price(120.0, 1.0, &c, 0.2).unwrap(), 20.0);
        assert_eq!(bs_price(80.0, 1.0, &c, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn zero_vol_out_of_the_money_is_zero() {
        let c = call();
        assert_eq!(bs_price(80.0, 0.0, &c, 0.0).unwrap(), 0.0);
        assert_eq!(bs_price(80.0, 0.5, &c, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn atm_one_year_golden_value() {
        // independent oracle: lognormal expected-payoff quadrature,
        // frozen at 40-digit precision
        let c = call();
        let v = bs_price(100.0, 0.0, &c, 0.2).unwrap();
        assert!((v - 7.965567455405796).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn delta_limits() {
        let c = call();
        assert!((bs_delta(10.0 * 100.0, 0.0, &c, 0.2).unwrap() - 1.0).abs() < 1e-6);
        assert!(bs_delta(100.0 / 10.0, 0.0, &c, 0.2).unwrap() < 1e-6);
        let d = bs_delta(100.0, 0.0, &c, 0.2).unwrap();
        assert!(d > 0.0 && d < 1.0);
    }

    #[test]
    fn delta_matches_central_difference() {
        let c = call();
        let eps = 1e-4;
        for &f in &[70.0, 100.0, 140.0] {
            let fd = (bs_price(f + eps, 0.0, &c, 0.2).unwrap()
                - bs_price(f - eps, 0.0, &c, 0.2).unwrap())
                / (2.0 * eps);
            let an = bs_delta(f, 0.0, &c, 0.2).unwrap();
            assert!((fd - an).abs() < 1e-6, "f={f} fd={fd} analytic={an}");
        }
    }

    #[test]
    fn past_expiry_rejected() {
        let c = call();
        assert!(bs_price(100.0, 1.5, &c, 0.2).is_err());
        assert!(bs_delta(100.0, 1.5, &c, 0.2).is_err());
    }

    #[test]
    fn price_dominates_intrinsic_before_expiry() {
        let c = call();
        for &f in &[60.0, 90.0, 100.0, 110.0, 160.0] {
            let v = bs_price(f, 0.25, &c, 0.2).unwrap();
            assert!(v >= (f - 100.0).max(0.0));
        }
    }
}
