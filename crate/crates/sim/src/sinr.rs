//! Instantaneous SINR of each strategy choice on one realization.
//!
//! Every strategy is evaluated on the same field with the same phase draws,
//! so estimates across strategies are paired while each marginal law stays
//! exact.

use hoskip_model::{ServicePhase, Strategy, StrategyChoice, Tier};

use crate::realization::{RankedStation, Realization};

/// Per-realization randomness shared by all strategy choices.
#[derive(Debug, Clone, Copy)]
pub struct PhaseDraw {
    /// Alternate-visit coin: a skipped dwell puts the user in blackout.
    pub skip: bool,
    /// Fade of the joint blackout signal. The two serving amplitudes are
    /// independent complex Gaussians, so their sum is again complex Gaussian
    /// and the combined received power is exactly exponential with mean
    /// `p_a + p_b`: one shared Exp(1) fade, not two.
    pub blackout_fade: f64,
}

/// SINR together with the service phase that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyOutcome {
    pub sinr: f64,
    pub phase: ServicePhase,
}

/// Evaluates one strategy choice on a realization.
///
/// Returns `None` when the realization lacks a station the current phase
/// needs (for example a third macro during a skipped macro dwell); callers
/// count such realizations as rejected.
///
/// # Arguments
/// * `draw` - phase randomness, drawn once per realization.
/// * `noise_watt` - receiver noise power added to the interference.
pub fn strategy_sinr(
    real: &Realization,
    choice: StrategyChoice,
    draw: &PhaseDraw,
    noise_watt: f64,
) -> Option<StrategyOutcome> {
    let strongest = real.top.get(0)?;
    match choice.strategy {
        Strategy::BestConnected => Some(serve(real, strongest, noise_watt)),
        Strategy::FemtoSkip => {
            if strongest.tier == Tier::Macro || !draw.skip {
                Some(serve(real, strongest, noise_watt))
            } else {
                // Skipped femto dwell: joint service from the second and
                // third strongest; the skipped femto interferes unless
                // cancelled.
                let a = real.top.get(1)?;
                let b = real.top.get(2)?;
                Some(blackout(real, a, b, choice.ic.then_some(strongest), draw, noise_watt))
            }
        }
        Strategy::FemtoDisregard => {
            if strongest.tier == Tier::Macro {
                Some(serve(real, strongest, noise_watt))
            } else {
                // The strongest station is a femto the user refuses to join:
                // joint service from the two strongest macros.
                let m1 = real.top_macro.get(0)?;
                let m2 = real.top_macro.get(1)?;
                Some(blackout(real, m1, m2, choice.ic.then_some(strongest), draw, noise_watt))
            }
        }
        Strategy::MacroSkip => {
            let m1 = real.top_macro.get(0)?;
            if !draw.skip {
                // Serve the strongest macro even when a femto is stronger;
                // the phase label records which case occurred.
                let phase = if strongest.tier == Tier::Macro {
                    ServicePhase::MacroServed
                } else {
                    ServicePhase::FemtoServed
                };
                Some(StrategyOutcome {
                    sinr: sinr(m1.faded, real.total_faded - m1.faded, noise_watt),
                    phase,
                })
            } else {
                let m2 = real.top_macro.get(1)?;
                let m3 = real.top_macro.get(2)?;
                Some(blackout(real, m2, m3, choice.ic.then_some(m1), draw, noise_watt))
            }
        }
    }
}

fn serve(real: &Realization, server: RankedStation, noise_watt: f64) -> StrategyOutcome {
    let phase = match server.tier {
        Tier::Macro => ServicePhase::MacroServed,
        Tier::Femto => ServicePhase::FemtoServed,
    };
    StrategyOutcome {
        sinr: sinr(server.faded, real.total_faded - server.faded, noise_watt),
        phase,
    }
}

fn blackout(
    real: &Realization,
    a: RankedStation,
    b: RankedStation,
    cancelled: Option<RankedStation>,
    draw: &PhaseDraw,
    noise_watt: f64,
) -> StrategyOutcome {
    let signal = draw.blackout_fade * (a.mean_rss + b.mean_rss);
    let mut interference = real.total_faded - a.faded - b.faded;
    if let Some(station) = cancelled {
        interference -= station.faded;
    }
    StrategyOutcome {
        sinr: sinr(signal, interference, noise_watt),
        phase: ServicePhase::Blackout,
    }
}

fn sinr(signal: f64, interference: f64, noise_watt: f64) -> f64 {
    // the interference subtractions can land a hair below zero in floating
    // point when the serving terms dominate the total
    signal / (interference.max(0.0) + noise_watt)
}
