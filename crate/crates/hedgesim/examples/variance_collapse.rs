//! Discrete-hedging error of the risk-neutral delta strategy: the
//! terminal spread shrinks like 1/sqrt(n_steps) as rebalancing becomes
//! continuous, while the mean stays pinned at the option value.
//!
//! Run with: `cargo run --release --example variance_collapse`

use hedgesim::hedge::{run_paths, HedgeRunConfig, HedgeStrategy};
use hedgesim::market::{GbmSpec, TimeGrid};
use hedgesim::pricing::{bs_price, CallSpec, PricingModel};

fn main() -> hedgesim::Result<()> {
    let call = CallSpec::new(100.0, 1.0)?;
    let anchor = bs_price(100.0, 0.0, &call, 0.2)?;
    println!("risk-neutral delta hedging, 10000 paths, driftless; f(0) = {anchor:.6}\n");
    println!("{:>8} {:>12} {:>12}", "n_steps", "mean", "std");

    let mut points = Vec::new();
    for n_steps in [64usize, 256, 1024, 4096] {
        let cfg = HedgeRunConfig {
            gbm: GbmSpec { f0: 100.0, mu0: 0.0, sigma0: 0.2 },
            grid: TimeGrid { t_start: 0.0, t_end: 1.0, n_steps },
            call,
            model: PricingModel::RiskNeutral,
            strategy: HedgeStrategy::RiskNeutralDelta,
            n_paths: 10_000,
            master_seed: 21,
            retain_ledgers: false,
            collect_drift_diagnostics: false,
        };
        let out = run_paths(&cfg)?;
        println!("{:>8} {:>12.6} {:>12.6}", n_steps, out.distribution.mean, out.distribution.std_dev);
        points.push(((n_steps as f64).ln(), out.distribution.std_dev.ln()));
    }

    // least-squares slope of ln(std) vs ln(n_steps)
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    println!("\nlog-log slope = {slope:.3} (continuous-limit theory: -0.5)");
    Ok(())
}
