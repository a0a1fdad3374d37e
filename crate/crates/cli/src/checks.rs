//! The `validate` subcommand: a numerical invariant suite for one
//! configuration, printing one pass/fail line per check.

use std::f64::consts::PI;

use hoskip_analytic::coverage::CoverageResult;
use hoskip_analytic::dist::{serving_distance_pdf, strongest_mapped_pdf};
use hoskip_analytic::laplace::{
    skip_factor, skip_factor_eta4, tail_exponent, tail_exponent_eta4,
};
use hoskip_analytic::throughput::ThroughputModel;
use hoskip_model::{phase_probabilities, Strategy, Tier};
use hoskip_numerics::{integrate_1d, IntegrationConfig};
use hoskip_sim::stationary::{coverage_grid, McConfig};

use crate::config::RunPlan;
use crate::CliError;

/// Monte Carlo sample count used when the configuration itself has
/// `mc_samples = 0`; enough for the agreement tolerance below.
const DEFAULT_CHECK_SAMPLES: u64 = 10_000;

struct Check {
    name: &'static str,
    outcome: Result<String, String>,
}

/// Runs every check, prints one line per check plus a summary, and fails
/// with a tolerance error when any check fails.
pub fn run_all(plan: &RunPlan) -> Result<(), CliError> {
    let eta4 = plan.params.path_loss_exponent == 4.0;
    let noiseless = plan.params.noise_power_watt == 0.0;

    let mut coverages: Vec<(usize, CoverageResult)> = Vec::new();
    let mut checks = vec![
        Check {
            name: "phase-normalization",
            outcome: phase_normalization(plan),
        },
        Check {
            name: "coverage-bounds",
            outcome: coverage_bounds(plan, &mut coverages),
        },
        Check {
            name: "closed-form-coverage",
            outcome: closed_form_coverage(plan, &coverages, eta4 && noiseless),
        },
        Check {
            name: "kernel-closed-forms",
            outcome: kernel_closed_forms(eta4),
        },
        Check {
            name: "pdf-normalization",
            outcome: pdf_normalization(plan),
        },
        Check {
            name: "mc-agreement",
            outcome: mc_agreement(plan, &coverages),
        },
    ];

    let mut failures = 0;
    for check in &mut checks {
        match &check.outcome {
            Ok(detail) => println!("ok    {:<22} {detail}", check.name),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:<22} {detail}", check.name);
            }
        }
    }
    if failures == 0 {
        println!("{} checks passed", checks.len());
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "{failures} of {} checks failed",
            checks.len()
        )))
    }
}

/// Phase probabilities of every strategy must sum to exactly 1.
fn phase_normalization(plan: &RunPlan) -> Result<String, String> {
    let mut worst = 0.0f64;
    for strategy in Strategy::ALL {
        let probs = phase_probabilities(&plan.params, strategy).map_err(|e| e.to_string())?;
        worst = worst.max((probs.sum() - 1.0).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("max |sum - 1| = {worst:.1e} over 4 strategies"))
    } else {
        Err(format!("phase probabilities sum to 1 +/- {worst:.3e}"))
    }
}

/// Every configured coverage probability sits in [0, 1], as does each
/// phase-conditional value. Also computes and keeps every coverage result so
/// later checks reuse the quadratures.
fn coverage_bounds(
    plan: &RunPlan,
    coverages: &mut Vec<(usize, CoverageResult)>,
) -> Result<String, String> {
    let slop = 1e-9;
    for (ti, &t) in plan.theta_linear.iter().enumerate() {
        let mut model =
            ThroughputModel::new(plan.params, t, plan.bandwidth_hz).map_err(|e| e.to_string())?;
        for &choice in &plan.choices {
            let r = model.coverage(choice).map_err(|e| e.to_string())?;
            if !(-slop..=1.0 + slop).contains(&r.value) {
                return Err(format!(
                    "{} at theta={} dB: coverage {} outside [0, 1]",
                    choice.tag(),
                    plan.theta_db[ti],
                    r.value
                ));
            }
            for phase in &r.phases {
                if !(-slop..=1.0 + slop).contains(&phase.conditional) {
                    return Err(format!(
                        "{} at theta={} dB: conditional coverage {} outside [0, 1]",
                        choice.tag(),
                        plan.theta_db[ti],
                        phase.conditional
                    ));
                }
            }
            coverages.push((ti, r));
        }
    }
    Ok(format!(
        "{} coverage cells inside [0, 1]",
        coverages.len()
    ))
}

/// In the noiseless `eta = 4` regime the best-connected coverage collapses
/// to `1 / (1 + sqrt(T) arctan sqrt(T))` independent of the tier mix.
fn closed_form_coverage(
    plan: &RunPlan,
    coverages: &[(usize, CoverageResult)],
    applicable: bool,
) -> Result<String, String> {
    if !applicable {
        return Ok("skipped (needs eta = 4 and zero noise)".into());
    }
    let bc = match plan
        .choices
        .iter()
        .position(|c| c.strategy == Strategy::BestConnected)
    {
        Some(i) => i,
        None => return Ok("skipped (best-connected not configured)".into()),
    };
    let per_theta = plan.choices.len();
    let mut worst = 0.0f64;
    for (ti, &t) in plan.theta_linear.iter().enumerate() {
        let quadrature = coverages[ti * per_theta + bc].1.value;
        let st = t.sqrt();
        let closed = 1.0 / (1.0 + st * st.atan());
        worst = worst.max((quadrature - closed).abs());
    }
    if worst <= 1e-6 {
        Ok(format!(
            "max |quadrature - closed form| = {worst:.1e} over {} thresholds",
            plan.theta_db.len()
        ))
    } else {
        Err(format!(
            "best-connected quadrature deviates from the closed form by {worst:.3e} > 1e-6"
        ))
    }
}

/// At `eta = 4` the general hypergeometric kernels must match their
/// independent arctan closed forms.
fn kernel_closed_forms(applicable: bool) -> Result<String, String> {
    if !applicable {
        return Ok("skipped (needs eta = 4)".into());
    }
    let mut worst = 0.0f64;
    for i in 0..5 {
        let q = 10f64.powf(-1.0 + i as f64);
        for j in 0..5 {
            let u = 10f64.powf(-1.0 + j as f64);
            let general = tail_exponent(4.0, q, u).map_err(|e| e.to_string())?;
            let closed = tail_exponent_eta4(q, u);
            worst = worst.max((general - closed).abs() / closed.abs().max(1e-300));
        }
    }
    for j in 0..5 {
        let u = 10f64.powf(-1.0 + j as f64);
        let general = skip_factor(4.0, u).map_err(|e| e.to_string())?;
        let closed = skip_factor_eta4(u);
        worst = worst.max((general - closed).abs() / closed.abs().max(1e-300));
    }
    if worst <= 1e-9 {
        Ok(format!("max relative route difference = {worst:.1e}"))
    } else {
        Err(format!(
            "kernel routes disagree by a relative {worst:.3e} > 1e-9"
        ))
    }
}

/// The strongest-station and serving-distance densities must integrate to 1.
fn pdf_normalization(plan: &RunPlan) -> Result<String, String> {
    let p = &plan.params;
    let cfg = IntegrationConfig::default_1d();
    let mut worst = 0.0f64;

    // upper limits far enough out that the truncated tail is ~exp(-36)
    let y_hi = (36.0 / (PI * p.mapped_intensity())).powf(0.5 * p.path_loss_exponent);
    let mass = integrate_1d(|y| strongest_mapped_pdf(p, y), 0.0, y_hi, &cfg)
        .map_err(|e| e.to_string())?
        .value;
    worst = worst.max((mass - 1.0).abs());

    for (tier, density) in [
        (Tier::Macro, p.equivalent_density_macro()),
        (Tier::Femto, p.equivalent_density_femto()),
    ] {
        if density == 0.0 {
            continue;
        }
        let r_hi = (36.0 / (PI * density)).sqrt();
        let mass = integrate_1d(|r| serving_distance_pdf(p, tier, r), 0.0, r_hi, &cfg)
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max((mass - 1.0).abs());
    }
    if worst <= 1e-6 {
        Ok(format!("max |mass - 1| = {worst:.1e}"))
    } else {
        Err(format!("a density integrates to 1 +/- {worst:.3e}"))
    }
}

/// Empirical coverage from a fresh Monte Carlo pass must agree with the
/// quadrature within `max(0.01, 4 standard errors)` on every configured
/// cell. Four standard errors keeps the false-alarm rate negligible even for
/// configurations with hundreds of cells.
fn mc_agreement(plan: &RunPlan, coverages: &[(usize, CoverageResult)]) -> Result<String, String> {
    let samples = if plan.mc_samples > 0 {
        plan.mc_samples
    } else {
        DEFAULT_CHECK_SAMPLES
    };
    let grid = coverage_grid(
        &plan.params,
        &plan.choices,
        &plan.theta_linear,
        &McConfig::new(samples, plan.seed),
    )
    .map_err(|e| e.to_string())?;

    let per_theta = plan.choices.len();
    let mut worst_diff = 0.0f64;
    let mut worst_tol = f64::INFINITY;
    for (ci, choice) in plan.choices.iter().enumerate() {
        for ti in 0..plan.theta_linear.len() {
            let est = grid.estimates[ci][ti];
            let analytic = coverages[ti * per_theta + ci].1.value;
            let diff = (analytic - est.probability).abs();
            let tol = (4.0 * est.std_error).max(0.01);
            if diff > tol {
                return Err(format!(
                    "{} at theta={} dB: analytic {analytic:.6} vs Monte Carlo {:.6} \
                     differs by {diff:.4} > {tol:.4} (n = {samples})",
                    choice.tag(),
                    plan.theta_db[ti],
                    est.probability
                ));
            }
            if diff > worst_diff {
                worst_diff = diff;
                worst_tol = tol;
            }
        }
    }
    Ok(format!(
        "max |analytic - empirical| = {worst_diff:.4} (tolerance {worst_tol:.4}, n = {samples})"
    ))
}
