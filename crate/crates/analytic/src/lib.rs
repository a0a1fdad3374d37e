//! Analytic performance model for velocity-aware handover skipping in a
//! two-tier Poisson cellular network.
//!
//! Three layers:
//! - [`laplace`]: interference Laplace-transform exponents conditioned on the
//!   serving geometry, in a general path-loss form and in arctan closed forms
//!   for the `eta = 4` special case (kept as separate routes so they can be
//!   cross-validated);
//! - [`coverage`]: SINR coverage probabilities per strategy and service phase,
//!   evaluated by adaptive quadrature in dimensionless coordinates, with
//!   [`dist`] providing the underlying serving-geometry densities;
//! - [`handover`] and [`throughput`]: weighted-tessellation handover rates,
//!   handover time cost, and the resulting average throughput, including a
//!   best-strategy search.

pub mod coverage;
pub mod dist;
pub mod handover;
pub mod laplace;
pub mod throughput;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Model(#[from] hoskip_model::ModelError),
    #[error(transparent)]
    Numerics(#[from] hoskip_numerics::NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Converts a threshold in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear threshold to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
