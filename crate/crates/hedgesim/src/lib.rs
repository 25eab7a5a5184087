//! Self-financing portfolio simulation for vanilla calls and storage
//! options.
//!
//! The engine keeps an exact discrete-time ledger `Pi = C + H + P`
//! (option leg, hedge value, cash) in riskless-bond units, with every
//! hedge trade booked at the post-move price. On top of that it runs
//! seeded Monte Carlo over GBM paths (or lognormal forward curves for
//! storage), compares hedging strategies through the terminal
//! distribution, and cross-checks the closed-form call time value
//! against its gamma-integral quadrature and against the intrinsic
//! hedging estimator.
//!
//! Entry points:
//! * [`pricing`] — Black-Scholes / probabilistic / intrinsic call
//!   values, deltas and the closed-form time value.
//! * [`hedge`] — the ledger, the five hedging strategies and
//!   [`hedge::run_paths`].
//! * [`storage`] — forward-curve market, exact intrinsic dispatch and
//!   the rolling-intrinsic valuation loop.
//! * [`config`]/[`cli`] — TOML scenario files and the `hedgesim`
//!   command-line front end.
//!
//! Each major capability also has a runnable example under `examples/`.

// validations use `!(x > 0.0)` instead of `x <= 0.0` so NaN inputs are
// rejected along with the out-of-range ones
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod hedge;
pub mod market;
pub mod math;
pub mod pricing;
pub mod report;
pub mod storage;
pub mod verify;

pub use error::{EngineError, Result};
