//! Regression engine: two-way fixed-effects OLS with cluster-robust or
//! heteroskedasticity-robust standard errors, regressor standardization,
//! and table rendering.

mod frame;
mod ols;
mod se;
mod spec;
mod standardize;
mod within;

pub use frame::Frame;
pub use ols::{ols, OlsCore};
pub use se::{classical_se, cluster_se, robust_se};
pub use spec::{r_squared, run_spec, RegressionResult, RegressionSpec, SeKind};
pub use standardize::{sample_sd, standardize};
pub use within::within_transform;
