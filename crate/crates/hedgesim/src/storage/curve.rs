//! Forward-curve evolution and ingestion.
//!
//! One observation step delivers the front period and moves every
//! surviving delivery point by an exact lognormal martingale factor
//! `exp(-sigma^2 dt / 2 + sigma sqrt(dt) z_j)`. The per-maturity normals
//! follow an AR(1) thread across the curve,
//! `z_j = rho z_{j-1} + sqrt(1 - rho^2) eps_j` with `rho = exp(-beta dT)`,
//! which reproduces the exponential cross-maturity correlation
//! `corr(dF(u), dF(v)) = exp(-beta |u - v|)` exactly on the uniform
//! delivery grid.

use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{EngineError, Result};
use crate::storage::types::{CurveFactorModel, ForwardCurve};

/// Advances the curve by one observation step: the front period drops
/// off (delivered), the survivors diffuse. Returns the new curve and
/// the per-surviving-period price increments.
pub fn step_curve<R: Rng>(
    curve: &ForwardCurve,
    model: &CurveFactorModel,
    rng: &mut R,
) -> Result<(ForwardCurve, Vec<f64>)> {
    if curve.is_empty() {
        return Err(EngineError::InvalidInput("cannot step an empty curve".into()));
    }
    let dt = curve.delta_t;
    let survivors = curve.len() - 1;
    let mut values = Vec::with_capacity(survivors);
    let mut increments = Vec::with_capacity(survivors);

    let rho = (-model.beta * dt).exp();
    let comp = (1.0 - rho * rho).max(0.0).sqrt();
    let mut z_prev = 0.0;
    for j in 0..survivors {
        let eps: f64 = rng.sample(StandardNormal);
        let z = if j == 0 { eps } else { rho * z_prev + comp * eps };
        z_prev = z;
        let sigma = model.sigma_for(curve.first_period + 1 + j);
        let old = curve.values[j + 1];
        let new = old * (-0.5 * sigma * sigma * dt + sigma * dt.sqrt() * z).exp();
        increments.push(new - old);
        values.push(new);
    }
    let next = ForwardCurve::new(curve.t + dt, curve.first_period + 1, dt, values)?;
    Ok((next, increments))
}

/// Reads an initial forward curve from CSV with columns `T,F`: delivery
/// labels must be `1..n` times the period length (uniform grid starting
/// one period out).
pub fn read_curve_csv(path: &Path) -> Result<ForwardCurve> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 2 {
            return Err(EngineError::Config(format!(
                "curve CSV row {:?} needs two columns T,F",
                record.position().map(|p| p.line())
            )));
        }
        let t: f64 = record[0].trim().parse().map_err(|e| {
            EngineError::Config(format!("bad delivery time {:?}: {e}", &record[0]))
        })?;
        let f: f64 = record[1].trim().parse().map_err(|e| {
            EngineError::Config(format!("bad forward price {:?}: {e}", &record[1]))
        })?;
        points.push((t, f));
    }
    curve_from_points(&points)
}

/// Builds the t=0 curve from `(delivery_label, price)` pairs, checking
/// grid uniformity.
pub fn curve_from_points(points: &[(f64, f64)]) -> Result<ForwardCurve> {
    if points.is_empty() {
        return Err(EngineError::Config("curve must have at least one period".into()));
    }
    let dt = points[0].0;
    if !(dt > 0.0) {
        return Err(EngineError::Config(format!(
            "first delivery label must be one period out, got {}",
            points[0].0
        )));
    }
    for (i, (t, _)) in points.iter().enumerate() {
        let expected = (i + 1) as f64 * dt;
        if (t - expected).abs() > 1e-6 * expected {
            return Err(EngineError::Config(format!(
                "delivery grid must be uniform: label {i} is {t}, expected {expected}"
            )));
        }
    }
    ForwardCurve::new(0.0, 0, dt, points.iter().map(|&(_, f)| f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::SeedSpec;
    use crate::storage::types::SigmaSpec;

    fn flat_curve(n: usize) -> ForwardCurve {
        ForwardCurve::new(0.0, 0, 1.0 / 12.0, vec![20.0; n]).unwrap()
    }

    fn rng(path: u64) -> rand_chacha::ChaCha8Rng {
        SeedSpec { master_seed: 31, path_index: path }.rng()
    }

    #[test]
    fn zero_vol_only_rolls_off() {
        let model = CurveFactorModel { sigma: SigmaSpec::Flat(0.0), beta: 1.0 };
        let c = flat_curve(4);
        let (next, d) = step_curve(&c, &model, &mut rng(0)).unwrap();
        assert_eq!(next.values, vec![20.0; 3]);
        assert_eq!(next.first_period, 1);
        assert!(d.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn large_beta_decorrelates_and_zero_beta_comonotone() {
        let n_samples = 10_000;
        for (beta, check) in [(1e6, "low"), (0.0, "high")] {
            let model = CurveFactorModel { sigma: SigmaSpec::Flat(0.5), beta };
            let mut xs = Vec::with_capacity(n_samples);
            let mut ys = Vec::with_capacity(n_samples);
            for path in 0..n_samples {
                let c = flat_curve(3);
                let (next, _) = step_curve(&c, &model, &mut rng(path as u64)).unwrap();
                xs.push((next.values[0] / 20.0).ln());
                ys.push((next.values[1] / 20.0).ln());
            }
            let mx = crate::math::stats::mean(&xs);
            let my = crate::math::stats::mean(&ys);
            let mut cov = 0.0;
            let mut vx = 0.0;
            let mut vy = 0.0;
            for i in 0..n_samples {
                cov += (xs[i] - mx) * (ys[i] - my);
                vx += (xs[i] - mx).powi(2);
                vy += (ys[i] - my).powi(2);
            }
            let corr = cov / (vx.sqrt() * vy.sqrt());
            match check {
                "low" => assert!(corr.abs() < 0.05, "beta={beta} corr={corr}"),
                _ => assert!(corr > 0.99, "beta={beta} corr={corr}"),
            }
        }
    }

    #[test]
    fn per_maturity_martingale_within_four_standard_errors() {
        let model = CurveFactorModel { sigma: SigmaSpec::Flat(0.6), beta: 2.0 };
        let n_samples = 20_000;
        let mut front = Vec::with_capacity(n_samples);
        let mut back = Vec::with_capacity(n_samples);
        for path in 0..n_samples {
            let c = flat_curve(3);
            let (_, d) = step_curve(&c, &model, &mut rng(path as u64)).unwrap();
            front.push(d[0]);
            back.push(d[1]);
        }
        for series in [&front, &back] {
            let m = crate::math::stats::mean(series);
            let se = crate::math::stats::standard_error(series);
            assert!(m.abs() < 4.0 * se, "curve increment mean {m} exceeds 4 x {se}");
        }
    }

    #[test]
    fn curve_points_validation() {
        assert!(curve_from_points(&[(0.25, 10.0), (0.5, 11.0)]).is_ok());
        assert!(curve_from_points(&[(0.25, 10.0), (0.8, 11.0)]).is_err());
        assert!(curve_from_points(&[(0.0, 10.0)]).is_err());
        assert!(curve_from_points(&[]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = std::env::temp_dir().join("hedgesim_curve_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("curve.csv");
        std::fs::write(&path, "T,F\n0.25,10.5\n0.5,12.25\n0.75,9.75\n").unwrap();
        let c = read_curve_csv(&path).unwrap();
        assert_eq!(c.values, vec![10.5, 12.25, 9.75]);
        assert!((c.delta_t - 0.25).abs() < 1e-12);
        std::fs::remove_file(&path).ok();
    }
}
