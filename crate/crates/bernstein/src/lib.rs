//! Exact polynomial machinery for degree-2/3/4 Bernstein bases.
//!
//! Decision variables and input profiles in the continuous-time scheduling
//! model are cubic polynomials per time interval, stored as Bernstein
//! coefficient vectors. This crate provides the basis evaluation, the Hermite
//! change of basis, exact integration/differentiation operators and
//! least-squares fitting of sampled time series onto a piecewise cubic.

mod basis;
mod error;
mod fit;
mod piecewise;
mod samples;

pub mod matrices;

pub use basis::{
    antiderivative_coeffs, derivative_coeffs, eval_basis, from_hermite, integrate_interval,
    to_hermite, BernsteinVec, MAX_DEGREE, MIN_DEGREE,
};
pub use error::{BernsteinError, FitError};
pub use fit::{fit_rmse, fit_samples};
pub use piecewise::PiecewisePoly;
pub use samples::{samples_from_csv, samples_from_csv_file, Sample};
