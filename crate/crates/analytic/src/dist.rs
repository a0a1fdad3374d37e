//! Distance and order-statistic densities of the serving geometry.
//!
//! Two coordinate systems appear:
//!
//! - plain distances `r` (km) within a single tier, where the `k` nearest
//!   stations of a tier with density `lambda` have the usual Poisson
//!   order-statistic law;
//! - the mapped coordinate `y = d^eta / P` that merges both tiers into one
//!   inhomogeneous Poisson process on the half line with mean measure
//!   `Lambda(y) = pi lambda_t y^(2/eta)`, in which "k-th strongest station"
//!   is simply "k-th arrival".
//!
//! All densities return 0 outside their support. Parameters are assumed to
//! be valid (see [`NetworkParams::validate`]); these functions are meant to
//! be cheap enough to call inside integrands and samplers.

use hoskip_model::{NetworkParams, Tier};
use std::f64::consts::PI;

/// Mean measure `Lambda(y) = pi lambda_t y^(2/eta)` of the mapped process:
/// the expected number of stations (either tier) with mapped coordinate
/// below `y`, i.e. with mean received power above `1/y`.
pub fn mapped_measure(params: &NetworkParams, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    PI * params.mapped_intensity() * y.powf(2.0 / params.path_loss_exponent)
}

/// Intensity `dLambda/dy` of the mapped process.
pub fn mapped_density(params: &NetworkParams, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let e = 2.0 / params.path_loss_exponent;
    PI * params.mapped_intensity() * e * y.powf(e - 1.0)
}

/// Density of the mapped coordinate of the strongest station.
pub fn strongest_mapped_pdf(params: &NetworkParams, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    mapped_density(params, y) * (-mapped_measure(params, y)).exp()
}

/// Joint density of the mapped coordinates of the second and third strongest
/// stations (the cooperating pair of a blackout phase), with the strongest
/// station's position integrated out.
pub fn mapped_pair_pdf(params: &NetworkParams, y2: f64, y3: f64) -> f64 {
    if !(0.0 < y2 && y2 < y3) {
        return 0.0;
    }
    mapped_density(params, y2)
        * mapped_density(params, y3)
        * mapped_measure(params, y2)
        * (-mapped_measure(params, y3)).exp()
}

/// Density of the distance to the serving station given the serving tier:
/// Rayleigh with the tier's equivalent density,
/// `2 pi S r exp(-pi S r^2)`.
pub fn serving_distance_pdf(params: &NetworkParams, tier: Tier, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let s = match tier {
        Tier::Macro => params.equivalent_density_macro(),
        Tier::Femto => params.equivalent_density_femto(),
    };
    2.0 * PI * s * r * (-PI * s * r * r).exp()
}

/// Joint density of the distances to the two nearest macros (the cooperating
/// pair of the femto-disregard blackout phase).
pub fn nearest_macro_pair_pdf(params: &NetworkParams, r1: f64, r2: f64) -> f64 {
    if !(0.0 < r1 && r1 < r2) {
        return 0.0;
    }
    let c = 2.0 * PI * params.macro_tier.density_per_km2;
    c * r1 * c * r2 * (-0.5 * c * r2 * r2).exp()
}

/// Joint density of the distances to the second and third nearest macros
/// (the cooperating pair of the macro-skip blackout phase), with the skipped
/// nearest macro integrated out.
pub fn second_third_macro_pdf(params: &NetworkParams, r2: f64, r3: f64) -> f64 {
    if !(0.0 < r2 && r2 < r3) {
        return 0.0;
    }
    let lm = params.macro_tier.density_per_km2;
    let c = 2.0 * PI * lm;
    // marginalising r1 over (0, r2) contributes pi lambda r2^2
    (PI * lm * r2 * r2) * c * r2 * c * r3 * (-PI * lm * r3 * r3).exp()
}
