//! Coverage probability of each service phase and its strategy mix.
//!
//! Coverage is `P(SINR > threshold)` for a typical user. Every strategy is a
//! probabilistic mix of at most three service phases (macro-served,
//! femto-served, blackout); each phase's conditional coverage reduces to an
//! expectation over the serving geometry, taken here in dimensionless
//! exclusion coordinates where every Poisson tier has unit intensity:
//!
//! - connected phases: the serving station's exclusion coordinate is Exp(1),
//! - blackout phases: the two cooperating stations are consecutive arrivals
//!   of a unit-rate process, and the skipped or disregarded station sits
//!   inside (or outside) the resulting exclusion region.
//!
//! Blackout service is non-coherent cooperative transmission from the two
//! strongest remaining stations; with Rayleigh fading the combined received
//! envelope is complex Gaussian, so the received power is exponential with
//! mean equal to the sum of the two mean received powers. Optional
//! interference cancellation (`ic`) removes the skipped or disregarded
//! station from the interference in blackout phases only.

use hoskip_model::{phase_probabilities, NetworkParams, ServicePhase, Strategy, Tier};
use hoskip_numerics::{
    integrate_1d, integrate_2d, integrate_3d, IntegrationConfig, QuadratureResult,
};
use std::f64::consts::PI;

use crate::laplace::LtKernel;
use crate::AnalyticError;

/// One service phase's contribution to a strategy's coverage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseCoverage {
    pub phase: ServicePhase,
    /// Fraction of time spent in this phase.
    pub probability: f64,
    /// Coverage probability conditioned on being in this phase.
    pub conditional: f64,
    /// Estimated absolute numerical error of `conditional`.
    pub abs_error: f64,
}

/// Strategy coverage with its per-phase breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    /// Total coverage probability, the phase-probability-weighted mix.
    pub value: f64,
    /// Estimated absolute numerical error of `value`.
    pub abs_error: f64,
    /// Total integrand evaluations across all phases.
    pub evaluations: usize,
    /// Phases with non-zero probability, in enum order.
    pub phases: Vec<PhaseCoverage>,
}

/// Coverage probability of `strategy` at the linear SINR `threshold`.
///
/// `ic` cancels the skipped or disregarded station's interference during
/// blackout phases; it has no effect on connected phases, so it is inert for
/// [`Strategy::BestConnected`].
///
/// # Arguments
///
/// * `params` - network parameters (validated here).
/// * `strategy` - handover strategy whose phase mix to evaluate.
/// * `threshold` - linear SINR threshold, finite and non-negative.
/// * `ic` - whether blackout phases cancel the strongest excluded station.
pub fn coverage(
    params: &NetworkParams,
    strategy: Strategy,
    threshold: f64,
    ic: bool,
) -> Result<CoverageResult, AnalyticError> {
    let probs = phase_probabilities(params, strategy)?;
    check_threshold(threshold)?;

    let mut result = CoverageResult {
        value: 0.0,
        abs_error: 0.0,
        evaluations: 0,
        phases: Vec::with_capacity(3),
    };
    for phase in [
        ServicePhase::MacroServed,
        ServicePhase::FemtoServed,
        ServicePhase::Blackout,
    ] {
        let p = probs.get(phase);
        if p == 0.0 {
            continue;
        }
        let r = match (strategy, phase) {
            (_, ServicePhase::MacroServed) => Some(macro_coverage(params, threshold)?),
            (Strategy::BestConnected | Strategy::FemtoSkip, ServicePhase::FemtoServed) => {
                Some(femto_coverage(params, threshold)?)
            }
            (Strategy::MacroSkip, ServicePhase::FemtoServed) => {
                Some(macro_skip_connected_coverage(params, threshold)?)
            }
            (Strategy::FemtoSkip, ServicePhase::Blackout) => {
                Some(femto_skip_blackout_coverage(params, threshold, ic)?)
            }
            (Strategy::FemtoDisregard, ServicePhase::Blackout) => {
                Some(femto_disregard_blackout_coverage(params, threshold, ic)?)
            }
            (Strategy::MacroSkip, ServicePhase::Blackout) => {
                Some(macro_skip_blackout_coverage(params, threshold, ic)?)
            }
            _ => None,
        };
        let Some(r) = r else { continue };
        result.value += p * r.value;
        result.abs_error += p * r.abs_error;
        result.evaluations += r.evaluations;
        result.phases.push(PhaseCoverage {
            phase,
            probability: p,
            conditional: r.value,
            abs_error: r.abs_error,
        });
    }
    Ok(result)
}

/// Coverage of a user connected to its strongest station when that station
/// is a macro.
pub fn macro_coverage(
    params: &NetworkParams,
    threshold: f64,
) -> Result<QuadratureResult, AnalyticError> {
    connected_coverage(params, threshold, Tier::Macro)
}

/// Coverage of a user connected to its strongest station when that station
/// is a femto.
pub fn femto_coverage(
    params: &NetworkParams,
    threshold: f64,
) -> Result<QuadratureResult, AnalyticError> {
    connected_coverage(params, threshold, Tier::Femto)
}

fn connected_coverage(
    params: &NetworkParams,
    threshold: f64,
    tier: Tier,
) -> Result<QuadratureResult, AnalyticError> {
    let kernel = prepare(params, threshold)?;
    if threshold == 0.0 {
        return Ok(unit());
    }
    // serving coordinate g ~ Exp(1); every interferer is weaker than the
    // server, so the tail starts at g with boundary ratio exactly `threshold`
    let rate = 1.0 + kernel.tail_exponent(1.0, threshold);
    let sigma2 = params.noise_power_watt;
    if sigma2 == 0.0 {
        return Ok(QuadratureResult {
            value: 1.0 / rate,
            abs_error: f64::EPSILON / rate,
            evaluations: 0,
        });
    }
    let half = 0.5 * params.path_loss_exponent;
    let (density_eq, power) = match tier {
        Tier::Macro => (
            params.equivalent_density_macro(),
            params.macro_tier.power_watt,
        ),
        Tier::Femto => (
            params.equivalent_density_femto(),
            params.femto_tier.power_watt,
        ),
    };
    let noise_scale = threshold * sigma2 / (power * (PI * density_eq).powf(half));
    let cut = exp_tail_cutoff(0) / rate;
    let cfg = IntegrationConfig::default_1d();
    let r = integrate_1d(
        |g: f64| (-g * rate - noise_scale * g.powf(half)).exp(),
        0.0,
        cut,
        &cfg,
    )?;
    Ok(r)
}

/// Blackout coverage under femto skipping: the strongest station (a skipped
/// femto) interferes from inside the exclusion region (unless `ic`); service
/// is cooperative transmission from the second and third strongest stations.
pub fn femto_skip_blackout_coverage(
    params: &NetworkParams,
    threshold: f64,
    ic: bool,
) -> Result<QuadratureResult, AnalyticError> {
    let kernel = prepare(params, threshold)?;
    if threshold == 0.0 {
        return Ok(unit());
    }
    let t = threshold;
    let half = 0.5 * params.path_loss_exponent;
    let sigma2 = params.noise_power_watt;
    let noise_scale = if sigma2 > 0.0 {
        t * sigma2 / (PI * params.mapped_intensity()).powf(half)
    } else {
        0.0
    };
    let cut = exp_tail_cutoff(2);
    let cfg = IntegrationConfig::default_2d();
    // (a, b): exclusion coordinates of the two servers, density a e^{-b} on
    // a < b after integrating the skipped station's uniform position out of
    // the joint arrival density
    let r = integrate_2d(
        |b: f64, a: f64| {
            let ratio = (b / a).powf(half);
            let mut v = a * (-b - kernel.tail_exponent(b, t / (1.0 + ratio))).exp();
            if !ic {
                v *= kernel.skip_factor(t / (1.0 + 1.0 / ratio));
            }
            if noise_scale > 0.0 {
                v *= (-noise_scale / (a.powf(-half) + b.powf(-half))).exp();
            }
            v
        },
        (0.0, cut),
        |b| (0.0, b),
        &cfg,
    )?;
    Ok(r)
}

/// Blackout coverage under femto disregard: the user's strongest station is a
/// femto that the strategy refuses to use, so the two nearest macros serve
/// cooperatively while that femto interferes (unless `ic`).
pub fn femto_disregard_blackout_coverage(
    params: &NetworkParams,
    threshold: f64,
    ic: bool,
) -> Result<QuadratureResult, AnalyticError> {
    let kernel = prepare(params, threshold)?;
    let lm = params.macro_tier.density_per_km2;
    let lf = params.femto_tier.density_per_km2;
    if lm == 0.0 || lf == 0.0 {
        return Err(AnalyticError::Domain(
            "femto-disregard blackout requires positive densities in both tiers".into(),
        ));
    }
    if threshold == 0.0 {
        return Ok(unit());
    }
    let t = threshold;
    let eta = params.path_loss_exponent;
    let half = 0.5 * eta;
    let kappa = (lf / lm) * params.femto_weight();
    let kappa_pow = kappa.powf(half);
    let a_f = kappa / (1.0 + kappa);
    let sigma2 = params.noise_power_watt;
    let noise_scale = if sigma2 > 0.0 {
        t * sigma2 / (params.macro_tier.power_watt * (PI * lm).powf(half))
    } else {
        0.0
    };
    let cut = exp_tail_cutoff(2);
    let cfg = IntegrationConfig::default_3d();
    // (q1, q2): two nearest macros, density e^{-q2} on q1 < q2 in the macro
    // exclusion coordinate; w: strongest femto in the femto coordinate, with
    // w < kappa q1 exactly when the user is femto-associated (probability
    // a_f, divided back out at the end)
    let r = integrate_3d(
        |q1: f64, q2: f64, w: f64| {
            let u_r = t / (1.0 + (q2 / q1).powf(half));
            let u_w = t * kappa_pow * (q1 / w).powf(half) / (1.0 + (q1 / q2).powf(half));
            let mut ex = q2 + w + kernel.tail_exponent(q2, u_r) + kernel.tail_exponent(w, u_w);
            if noise_scale > 0.0 {
                ex += noise_scale / (q1.powf(-half) + q2.powf(-half));
            }
            let mut v = (-ex).exp();
            if !ic {
                v /= 1.0 + u_w;
            }
            v
        },
        (0.0, cut),
        |q1| (q1, q1 + cut),
        |q1, _| (0.0, kappa * q1),
        &cfg,
    )?;
    Ok(QuadratureResult {
        value: r.value / a_f,
        abs_error: r.abs_error / a_f,
        evaluations: r.evaluations,
    })
}

/// Connected-phase coverage under macro skipping for a femto-associated user:
/// the nearest macro serves while the stronger femto is disregarded and
/// interferes.
pub fn macro_skip_connected_coverage(
    params: &NetworkParams,
    threshold: f64,
) -> Result<QuadratureResult, AnalyticError> {
    let kernel = prepare(params, threshold)?;
    let lm = params.macro_tier.density_per_km2;
    let lf = params.femto_tier.density_per_km2;
    if lm == 0.0 || lf == 0.0 {
        return Err(AnalyticError::Domain(
            "macro-skip connected phase requires positive densities in both tiers".into(),
        ));
    }
    if threshold == 0.0 {
        return Ok(unit());
    }
    let t = threshold;
    let eta = params.path_loss_exponent;
    let half = 0.5 * eta;
    let kappa = (lf / lm) * params.femto_weight();
    let kappa_pow = kappa.powf(half);
    let a_f = kappa / (1.0 + kappa);
    // macro tail beyond the serving macro: exponent is linear in q
    let tau_macro = kernel.tail_exponent(1.0, t);
    let sigma2 = params.noise_power_watt;
    let noise_scale = if sigma2 > 0.0 {
        t * sigma2 / (params.macro_tier.power_watt * (PI * lm).powf(half))
    } else {
        0.0
    };
    let cut = exp_tail_cutoff(2);
    let cfg = IntegrationConfig::default_2d();
    // q: serving macro; w: strongest femto, with w < kappa q exactly when the
    // femto outranks the macro (femto association, probability a_f)
    let r = integrate_2d(
        |q: f64, w: f64| {
            let u1 = t * kappa_pow * (q / w).powf(half);
            let mut ex = q + w + q * tau_macro + kernel.tail_exponent(w, u1);
            if noise_scale > 0.0 {
                ex += noise_scale * q.powf(half);
            }
            (-ex).exp() / (1.0 + u1)
        },
        (0.0, cut),
        |q| (0.0, kappa * q),
        &cfg,
    )?;
    Ok(QuadratureResult {
        value: r.value / a_f,
        abs_error: r.abs_error / a_f,
        evaluations: r.evaluations,
    })
}

/// Blackout coverage under macro skipping: the nearest macro is skipped and
/// interferes from inside the exclusion region (unless `ic`), the second and
/// third nearest macros serve cooperatively, and the disregarded femto tier
/// interferes from the whole plane.
pub fn macro_skip_blackout_coverage(
    params: &NetworkParams,
    threshold: f64,
    ic: bool,
) -> Result<QuadratureResult, AnalyticError> {
    let kernel = prepare(params, threshold)?;
    let lm = params.macro_tier.density_per_km2;
    let lf = params.femto_tier.density_per_km2;
    if lm == 0.0 {
        return Err(AnalyticError::Domain(
            "macro-skip blackout requires a positive macro density".into(),
        ));
    }
    if threshold == 0.0 {
        return Ok(unit());
    }
    let t = threshold;
    let eta = params.path_loss_exponent;
    let half = 0.5 * eta;
    let kappa = (lf / lm) * params.femto_weight();
    // femto field with no exclusion region at all
    let whole_plane = kernel.whole_plane() * kappa * t.powf(2.0 / eta);
    let sigma2 = params.noise_power_watt;
    let noise_scale = if sigma2 > 0.0 {
        t * sigma2 / (params.macro_tier.power_watt * (PI * lm).powf(half))
    } else {
        0.0
    };
    let cut = exp_tail_cutoff(2);
    let cfg = IntegrationConfig::default_2d();
    // (q2, q3): second and third nearest macros, density q2 e^{-q3} on
    // q2 < q3 after integrating the skipped macro's uniform position out
    let r = integrate_2d(
        |q3: f64, q2: f64| {
            let ratio = (q3 / q2).powf(half);
            let inv_sum = q2.powf(-half) + q3.powf(-half);
            let mut ex = q3
                + kernel.tail_exponent(q3, t / (1.0 + ratio))
                + whole_plane * inv_sum.powf(-2.0 / eta);
            if noise_scale > 0.0 {
                ex += noise_scale / inv_sum;
            }
            let mut v = q2 * (-ex).exp();
            if !ic {
                v *= kernel.skip_factor(t / (1.0 + 1.0 / ratio));
            }
            v
        },
        (0.0, cut),
        |q3| (0.0, q3),
        &cfg,
    )?;
    Ok(r)
}

fn prepare(params: &NetworkParams, threshold: f64) -> Result<LtKernel, AnalyticError> {
    params.validate()?;
    check_threshold(threshold)?;
    Ok(LtKernel::new(params.path_loss_exponent)?)
}

fn check_threshold(threshold: f64) -> Result<(), AnalyticError> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(AnalyticError::Domain(format!(
            "SINR threshold must be finite and >= 0, got {threshold}"
        )));
    }
    Ok(())
}

fn unit() -> QuadratureResult {
    QuadratureResult {
        value: 1.0,
        abs_error: 0.0,
        evaluations: 0,
    }
}

/// Upper cutoff `U` with `e^{-U} * sum_{j<=degree} U^j / j! <= 1e-14`: beyond
/// it, the remaining mass of any integrand bounded by `q^degree e^{-q}` is
/// negligible relative to the total `degree!`.
fn exp_tail_cutoff(degree: u32) -> f64 {
    let ln_eps = -(1e-14f64).ln();
    let mut u = ln_eps;
    for _ in 0..6 {
        let mut poly: f64 = 1.0;
        let mut term: f64 = 1.0;
        for j in 1..=degree {
            term *= u / f64::from(j);
            poly += term;
        }
        u = ln_eps + poly.ln();
    }
    u
}
