//! Numerical building blocks for the coverage analysis: adaptive
//! Gauss-Kronrod quadrature on finite and semi-infinite intervals, iterated
//! two- and three-dimensional quadrature with variable inner bounds, and the
//! Gauss hypergeometric kernel that appears in every Rayleigh-fading
//! interference Laplace transform.
//!
//! All integrators return an error estimate alongside the value and fail
//! loudly (`NumericsError::ToleranceNotMet`) instead of silently returning an
//! inaccurate result.

mod adaptive;
mod iterated;
mod kronrod;
mod special;

pub use adaptive::{integrate_1d, integrate_semi_infinite};
pub use iterated::{integrate_2d, integrate_3d};
pub use special::{cosecant, hyp2f1_coverage, tail_interference_integral, whole_plane_constant};

use thiserror::Error;

/// Tolerances and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    /// Relative accuracy target.
    pub rel_tol: f64,
    /// Absolute accuracy floor (used when the integral is close to zero).
    pub abs_tol: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
}

impl IntegrationConfig {
    /// Default for one-dimensional integrals.
    pub const fn default_1d() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 200,
        }
    }

    /// Default for iterated two-dimensional integrals (outer tolerance).
    pub const fn default_2d() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            max_subdivisions: 200,
        }
    }

    /// Default for iterated three-dimensional integrals (outer tolerance).
    pub const fn default_3d() -> Self {
        Self {
            rel_tol: 1e-5,
            abs_tol: 1e-9,
            max_subdivisions: 100,
        }
    }

    /// Tolerance for the next-inner level of an iterated integral: one order
    /// of magnitude tighter, so inner noise stays below the outer target.
    pub fn tightened(&self) -> Self {
        Self {
            rel_tol: self.rel_tol * 0.1,
            abs_tol: self.abs_tol * 0.1,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self::default_1d()
    }
}

/// Value, error estimate and cost of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Estimated absolute error (includes propagated inner-integral error for
    /// the iterated integrators).
    pub abs_error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error(
        "quadrature did not reach the accuracy target: requested {requested:.3e}, \
         achieved {achieved:.3e} around value {value:.6e} after {subdivisions} subdivisions"
    )]
    ToleranceNotMet {
        value: f64,
        requested: f64,
        achieved: f64,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value near {at:.6e}")]
    NonFiniteIntegrand { at: f64 },
    #[error("domain error: {0}")]
    Domain(String),
}
