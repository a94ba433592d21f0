//! Structural-imbalance analysis and CT/DT comparison.
//!
//! The imbalance metric integrates the absolute gap between a schedule and
//! the reference load exactly: the integrand is piecewise polynomial, its
//! roots are bracketed analytically per interval and the pieces integrate in
//! closed form.

mod error;
mod export;
mod imbalance;
mod quadrature;

pub use error::AnalysisError;
pub use export::{sample_schedule, ScheduleSeries};
pub use imbalance::{
    compare, piecewise_linear, structural_imbalance, AreaImbalance, ImbalanceReport,
    ReferenceLoad,
};
pub use quadrature::integral_abs_diff;

/// Nine significant digits, the precision of all floating output here.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.8e}")
}
