//! Handover rates from cell-boundary crossing geometry.
//!
//! Under max mean-power association the service regions form a
//! multiplicatively weighted Voronoi tessellation. For a user moving at
//! speed `v`, the rate of handovers of each type is proportional to the mean
//! boundary length per unit area between the two tiers' cells, via the
//! classic fibre-process crossing rate `(2/pi) v L`.
//!
//! Each strategy then turns its executed handovers into lost service time:
//! a macro-to-macro handover costs `d_m` seconds, any handover involving a
//! femto costs `d_f` seconds, and skipping strategies execute only a subset
//! of the boundary crossings.

use hoskip_model::{kmh_to_km_per_s, MobilityProfile, NetworkParams, Strategy, Tier};
use hoskip_numerics::{integrate_1d, IntegrationConfig};
use std::f64::consts::PI;

use crate::AnalyticError;

/// `F(1)`: the shape integral has the exact value 4 for equal powers.
const SHAPE_AT_ONE: f64 = 4.0;

/// Shape factor `F(x) = x^-2 int_0^pi sqrt(x^2 + 1 - 2 x cos t) dt` of the
/// boundary between two stations whose equal-strength distance ratio is `x`.
///
/// Satisfies `F(1) = 4` and the reflection identity `F(1/x) = x^3 F(x)` that
/// makes the boundary density independent of which side parametrises it.
pub fn boundary_shape_factor(x: f64) -> Result<f64, AnalyticError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(AnalyticError::Domain(format!(
            "shape factor ratio must be finite and > 0, got {x}"
        )));
    }
    let cfg = IntegrationConfig {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        max_subdivisions: 200,
    };
    let r = integrate_1d(
        |t: f64| (x * x + 1.0 - 2.0 * x * t.cos()).sqrt(),
        0.0,
        PI,
        &cfg,
    )?;
    Ok(r.value / (x * x))
}

/// Mean boundary length per km² between cells served by tier `a` and cells
/// served by tier `b`.
///
/// Same-tier boundaries use the exact `F(1) = 4`; cross-tier boundaries use
/// the shape factor at the power-dependent distance ratio. The result is
/// symmetric in `(a, b)`.
pub fn boundary_length_density(
    params: &NetworkParams,
    a: Tier,
    b: Tier,
) -> Result<f64, AnalyticError> {
    params.validate()?;
    let (la, pa, s_a) = tier_view(params, a);
    let (lb, pb, _) = tier_view(params, b);
    if la == 0.0 || lb == 0.0 {
        return Ok(0.0);
    }
    if a == b {
        // ordered pairs double-count each same-tier boundary
        return Ok(la * la * SHAPE_AT_ONE / (2.0 * s_a.powf(1.5)));
    }
    // x: distance of the tier-b station relative to the tier-a station at
    // equal received strength
    let x = (pb / pa).powf(1.0 / params.path_loss_exponent);
    Ok(la * lb * x.powi(3) * boundary_shape_factor(x)? / s_a.powf(1.5))
}

fn tier_view(params: &NetworkParams, tier: Tier) -> (f64, f64, f64) {
    match tier {
        Tier::Macro => (
            params.macro_tier.density_per_km2,
            params.macro_tier.power_watt,
            params.equivalent_density_macro(),
        ),
        Tier::Femto => (
            params.femto_tier.density_per_km2,
            params.femto_tier.power_watt,
            params.equivalent_density_femto(),
        ),
    }
}

/// Handover rates (events per second) by source and target tier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoverRates {
    pub macro_to_macro: f64,
    pub macro_to_femto: f64,
    pub femto_to_macro: f64,
    pub femto_to_femto: f64,
}

impl HandoverRates {
    pub fn total(&self) -> f64 {
        self.macro_to_macro + self.macro_to_femto + self.femto_to_macro + self.femto_to_femto
    }

    /// Every handover that touches a femto, the costlier kind.
    pub fn femto_involved(&self) -> f64 {
        self.macro_to_femto + self.femto_to_macro + self.femto_to_femto
    }
}

/// Handover rates of a best-connected user moving at `velocity_kmh`.
///
/// A crossing of an `a`-`b` boundary is an `a -> b` handover half the time,
/// so the cross-tier rates split the crossing rate `(2/pi) v L` evenly.
pub fn handover_rates(
    params: &NetworkParams,
    velocity_kmh: f64,
) -> Result<HandoverRates, AnalyticError> {
    if !(velocity_kmh >= 0.0) || !velocity_kmh.is_finite() {
        return Err(AnalyticError::Domain(format!(
            "velocity must be finite and >= 0, got {velocity_kmh}"
        )));
    }
    let v = kmh_to_km_per_s(velocity_kmh);
    let cross = (2.0 / PI) * v;
    let l_mm = boundary_length_density(params, Tier::Macro, Tier::Macro)?;
    let l_ff = boundary_length_density(params, Tier::Femto, Tier::Femto)?;
    let l_mf = boundary_length_density(params, Tier::Macro, Tier::Femto)?;
    Ok(HandoverRates {
        macro_to_macro: cross * l_mm,
        macro_to_femto: 0.5 * cross * l_mf,
        femto_to_macro: 0.5 * cross * l_mf,
        femto_to_femto: cross * l_ff,
    })
}

/// Fraction of time lost to handover execution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoverCost {
    /// Lost-time fraction, clamped to 1.
    pub fraction: f64,
    /// Unclamped rate-delay product; exceeding 1 means the mobility model is
    /// outside its feasible range at these delays.
    pub raw_fraction: f64,
    pub clamped: bool,
}

/// Time fraction a user moving per `mobility` spends executing handovers
/// under `strategy`.
///
/// Skipping alternate femtos halves the femto-involved handovers; femto
/// disregard removes them entirely; macro skipping additionally halves the
/// macro-to-macro handovers.
pub fn handover_cost(
    params: &NetworkParams,
    strategy: Strategy,
    mobility: &MobilityProfile,
) -> Result<HandoverCost, AnalyticError> {
    mobility.validate()?;
    let rates = handover_rates(params, mobility.velocity_kmh)?;
    let macro_part = rates.macro_to_macro * mobility.macro_delay_s;
    let femto_part = rates.femto_involved() * mobility.femto_delay_s;
    let raw = match strategy {
        Strategy::BestConnected => macro_part + femto_part,
        Strategy::FemtoSkip => macro_part + 0.5 * femto_part,
        Strategy::FemtoDisregard => macro_part,
        Strategy::MacroSkip => 0.5 * macro_part,
    };
    Ok(HandoverCost {
        fraction: raw.min(1.0),
        raw_fraction: raw,
        clamped: raw > 1.0,
    })
}
