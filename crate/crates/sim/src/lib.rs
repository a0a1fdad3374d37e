//! Monte Carlo validation of the handover-skipping performance model.
//!
//! The analytic companion crate evaluates coverage and handover rates by
//! quadrature; this crate estimates the same quantities by direct simulation
//! of the two-tier Poisson field:
//! - [`realization`]: streaming field sampler reduced to the summaries the
//!   strategies need (strongest stations, total interference power);
//! - [`sinr`]: instantaneous SINR of each strategy choice on a realization,
//!   with all strategies paired on the same field and phase draws;
//! - [`stationary`]: coverage estimation for a strategy-by-threshold grid,
//!   every cell sharing one set of realizations;
//! - [`trajectory`]: boundary-crossing counts along straight tracks through
//!   the weighted service tessellation;
//! - [`stats`]: binomial errors and goodness-of-fit tests used to compare
//!   simulation against analysis.
//!
//! Every realization (and every track) draws from its own counter-indexed
//! ChaCha stream, so results are reproducible bit for bit for a fixed seed,
//! independent of how work is split across threads.

pub mod realization;
pub mod sinr;
pub mod stationary;
pub mod stats;
pub mod trajectory;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] hoskip_model::ModelError),
    #[error("invalid simulation setting {name}: {value} ({constraint})")]
    InvalidSetting {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("empty request: {0}")]
    EmptyRequest(&'static str),
    #[error("every realization was rejected: the window never contained the stations required by the requested strategies")]
    AllRejected,
}
