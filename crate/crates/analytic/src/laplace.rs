//! Interference Laplace-transform exponents in the dimensionless exclusion
//! coordinate.
//!
//! Throughout, planar Poisson interference is handled in the coordinate
//! `q = pi lambda r^2` (or its mapped-domain analogue `pi lambda_t y^(2/eta)`),
//! in which every tier has unit intensity. Conditioned on the serving
//! geometry, each Rayleigh-fading interference source contributes a factor
//! `1/(1 + u)` at the Laplace argument `s`, where `u = s P d^-eta` is the
//! fading-free interference-to-signal ratio of that source.
//!
//! Three reusable pieces, each with a general-`eta` route and an arctan
//! closed-form route valid at `eta = 4` (the two routes are deliberately
//! independent so tests can compare them):
//!
//! - [`tail_exponent`]: field beyond an exclusion coordinate `q`,
//! - [`skip_factor`]: a single interferer placed uniformly (in the `q`
//!   coordinate) inside the exclusion region, as a skipped station is,
//! - [`whole_plane_exponent`]: a field with no exclusion at all.

use hoskip_numerics::{hyp2f1_coverage, whole_plane_constant, NumericsError};

/// Exponent of the Laplace transform of the aggregate interference from a
/// unit-intensity field beyond exclusion coordinate `q_from`, where `u` is
/// the interference-to-signal ratio at the exclusion boundary:
///
/// `tail_exponent = q_from * (2 u / (eta - 2)) * 2F1(1, 1-2/eta; 2-2/eta; -u)`.
///
/// The Laplace factor is `exp(-tail_exponent)`.
pub fn tail_exponent(eta: f64, q_from: f64, u: f64) -> Result<f64, NumericsError> {
    Ok(q_from * 2.0 * u * hyp2f1_coverage(eta, u)? / (eta - 2.0))
}

/// Closed form of [`tail_exponent`] at `eta = 4`: `q sqrt(u) atan(sqrt(u))`.
pub fn tail_exponent_eta4(q_from: f64, u: f64) -> f64 {
    let su = u.sqrt();
    q_from * su * su.atan()
}

/// Laplace factor of a single skipped station placed uniformly (in the
/// exclusion coordinate) inside the exclusion region, given `u_cap`, the
/// interference-to-signal ratio the station would have at the region's outer
/// edge (its weakest possible position):
///
/// `skip_factor = 1 - int_0^1 dx / (1 + x^(eta/2) / u_cap)`.
///
/// Evaluated through the identity
/// `int_0^1 dx/(1 + x^(eta/2)/u) = u^(2/eta) K(eta) - (2u/(eta-2)) 2F1(...; -u)`
/// with `K` the whole-plane constant, switching to the direct alternating
/// series for large `u_cap` where the identity loses digits to cancellation.
pub fn skip_factor(eta: f64, u_cap: f64) -> Result<f64, NumericsError> {
    if !(u_cap >= 0.0) || !u_cap.is_finite() {
        return Err(NumericsError::Domain(format!(
            "skip factor argument must be finite and >= 0, got {u_cap}"
        )));
    }
    if u_cap == 0.0 {
        return Ok(1.0);
    }
    if u_cap >= 4.0 {
        // direct series for the factor itself, avoiding 1 - (1 - tiny):
        // skip = sum_{k>=1} (-1)^(k+1) u^-k / (1 + k eta/2), |term ratio| <= 1/4
        let mut sum = 0.0;
        let mut power = 1.0 / u_cap;
        for k in 1..200 {
            let term = power / (1.0 + 0.5 * eta * k as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
            power /= -u_cap;
        }
        return Ok(sum);
    }
    let inner = u_cap.powf(2.0 / eta) * whole_plane_constant(eta)?
        - 2.0 * u_cap * hyp2f1_coverage(eta, u_cap)? / (eta - 2.0);
    Ok(1.0 - inner)
}

/// Closed form of [`skip_factor`] at `eta = 4`:
/// `1 - sqrt(u_cap) atan(1/sqrt(u_cap))`.
pub fn skip_factor_eta4(u_cap: f64) -> f64 {
    if u_cap == 0.0 {
        return 1.0;
    }
    let su = u_cap.sqrt();
    1.0 - su * su.recip().atan()
}

/// Exponent of the Laplace transform of a unit-intensity field interfering
/// from the whole plane (no exclusion), given `v = (s P)^(2/eta) pi lambda`
/// expressed directly in the exclusion coordinate scale:
///
/// `whole_plane_exponent = K(eta) * v`, Laplace factor `exp(-...)`.
pub fn whole_plane_exponent(eta: f64, v: f64) -> Result<f64, NumericsError> {
    Ok(whole_plane_constant(eta)? * v)
}

/// Per-integral kernel dispatcher: the general hypergeometric route, or the
/// arctan route when `eta` is exactly 4 (identical values, several times
/// cheaper inside the 2D/3D quadratures). Also guards the extreme arguments
/// that adaptive subdivision can produce near integration-domain corners
/// (`u` up to infinity) with the exact large-`u` asymptote.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LtKernel {
    eta: f64,
    half: f64,
    whole_plane: f64,
    arctan: bool,
}

const LARGE_U: f64 = 1e14;
const SKIP_LARGE_U: f64 = 1e8;

impl LtKernel {
    pub(crate) fn new(eta: f64) -> Result<Self, NumericsError> {
        Ok(Self {
            eta,
            half: 0.5 * eta,
            whole_plane: whole_plane_constant(eta)?,
            arctan: eta == 4.0,
        })
    }

    pub(crate) fn whole_plane(&self) -> f64 {
        self.whole_plane
    }

    pub(crate) fn tail_exponent(&self, q_from: f64, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        if u > LARGE_U {
            // (2u/(eta-2)) 2F1(...) = u^(2/eta) K - 1 + O(1/u)
            return q_from * (u.powf(2.0 / self.eta) * self.whole_plane - 1.0);
        }
        if self.arctan {
            tail_exponent_eta4(q_from, u)
        } else {
            // eta > 2 is validated at kernel construction; u is finite here
            tail_exponent(self.eta, q_from, u).unwrap_or(f64::NAN)
        }
    }

    pub(crate) fn skip_factor(&self, u_cap: f64) -> f64 {
        if u_cap > SKIP_LARGE_U {
            // two asymptotic terms; the arctan closed form loses digits to
            // cancellation here while this is accurate to O(u^-2) relative
            let inv = 1.0 / u_cap;
            return inv / (1.0 + self.half) - inv * inv / (1.0 + self.eta);
        }
        if self.arctan {
            skip_factor_eta4(u_cap)
        } else {
            skip_factor(self.eta, u_cap).unwrap_or(f64::NAN)
        }
    }
}
