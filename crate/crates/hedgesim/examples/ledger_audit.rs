//! A single hedged path, row by row, with the accounting identities
//! checked on every step: trades booked at the observed post-move
//! price, `d(H+P) = h dF`, and `Pi = C + H + P` throughout.
//!
//! Run with: `cargo run --release --example ledger_audit`

use hedgesim::hedge::{check_rows, run_paths, HedgeRunConfig, HedgeStrategy, PortfolioState};
use hedgesim::market::{GbmSpec, TimeGrid};
use hedgesim::pricing::{CallSpec, PricingModel};

fn main() -> hedgesim::Result<()> {
    let cfg = HedgeRunConfig {
        gbm: GbmSpec { f0: 100.0, mu0: 0.0, sigma0: 0.2 },
        grid: TimeGrid { t_start: 0.0, t_end: 1.0, n_steps: 12 },
        call: CallSpec { strike: 100.0, expiry: 1.0 },
        model: PricingModel::RiskNeutral,
        strategy: HedgeStrategy::RiskNeutralDelta,
        n_paths: 1,
        master_seed: 4,
        retain_ledgers: true,
        collect_drift_diagnostics: false,
    };
    let out = run_paths(&cfg)?;
    let rows = &out.ledgers.as_ref().unwrap()[0];

    println!(
        "{:>4} {:>8} {:>8} {:>8} {:>8} {:>9} {:>9} {:>9} {:>9}",
        "step", "t", "F", "dF", "h", "C", "H", "P", "Pi"
    );
    for row in rows {
        let s = &row.state;
        println!(
            "{:>4} {:>8.4} {:>8.3} {:>8.3} {:>8.4} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            row.step,
            s.t,
            row.price,
            row.d_price,
            s.hedge_position,
            s.option_value,
            s.hedge_value,
            s.cash,
            s.portfolio
        );
    }

    let opening = PortfolioState::opening(
        cfg.gbm.f0,
        &cfg.call,
        cfg.model,
        cfg.gbm.sigma0,
        cfg.gbm.mu0,
    )?;
    let violations = check_rows(&opening, rows, 1e-9);
    println!("\nidentity violations: {}", violations.len());
    assert!(violations.is_empty());
    println!("terminal portfolio {:.6} vs initial option value {:.6}", rows.last().unwrap().state.portfolio, opening.portfolio);
    Ok(())
}
