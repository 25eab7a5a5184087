//! Where the terminal mean comes from on a drifted market: the initial
//! option value plus the accumulated drift pick-up of the position
//! `f' + h` (risk-neutral leg) or `h` (probabilistic leg). The
//! risk-neutral delta hedge zeroes the integrand and is immune to the
//! drift; the naked book and the drift-adjusted hedge are not.
//!
//! Run with: `cargo run --release --example drift_decomposition`

use hedgesim::hedge::{drift_decomposition, run_paths, HedgeRunConfig, HedgeStrategy};
use hedgesim::market::{GbmSpec, TimeGrid};
use hedgesim::pricing::{CallSpec, PricingModel};

fn main() -> hedgesim::Result<()> {
    println!("GBM f0=100 mu=0.1 sigma=0.2, call K=100 T=1, 20000 paths x 256 steps\n");
    println!(
        "{:<22} {:>10} {:>10} {:>12} {:>12} {:>8}",
        "strategy", "mean", "anchor", "drift int.", "residual", "|z|"
    );
    for strategy in [
        HedgeStrategy::None,
        HedgeStrategy::RiskNeutralDelta,
        HedgeStrategy::DriftAdjustedDelta,
    ] {
        let cfg = HedgeRunConfig {
            gbm: GbmSpec { f0: 100.0, mu0: 0.1, sigma0: 0.2 },
            grid: TimeGrid { t_start: 0.0, t_end: 1.0, n_steps: 256 },
            call: CallSpec { strike: 100.0, expiry: 1.0 },
            model: PricingModel::RiskNeutral,
            strategy,
            n_paths: 20_000,
            master_seed: 17,
            retain_ledgers: false,
            collect_drift_diagnostics: true,
        };
        let out = run_paths(&cfg)?;
        let d = drift_decomposition(&out, PricingModel::RiskNeutral)?;
        println!(
            "{:<22} {:>10.5} {:>10.5} {:>12.5} {:>12.2e} {:>8.2}",
            strategy.label(),
            d.measured_mean,
            d.anchor,
            d.drift_integral_mean,
            d.residual,
            d.discrepancy_se_units
        );
    }
    println!("\nmean = anchor + drift integral, in all three cases (|z| < 4).");
    println!("for the risk-neutral delta the integral vanishes identically:");
    println!("that hedge makes the book drift-independent.");
    Ok(())
}
