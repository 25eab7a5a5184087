//! Numerical support: special functions, quadrature, sample statistics.

mod erf;
pub mod quad;
pub mod stats;

pub use erf::{erf, erfc, normal_cdf, normal_pdf};
