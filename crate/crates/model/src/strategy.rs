use std::fmt;
use std::str::FromStr;

use crate::error::ModelError;
use crate::params::NetworkParams;

/// Base station tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Macro,
    Femto,
}

/// Handover management strategy.
///
/// - `BestConnected`: always hand over to the strongest station (baseline).
/// - `FemtoSkip`: skip every other handover toward a femto; during a skipped
///   femto's dwell the user is in blackout, served jointly by the second and
///   third strongest stations.
/// - `FemtoDisregard`: never associate with femtos; when the strongest station
///   is a femto the user is in blackout, served jointly by the two strongest
///   macros.
/// - `MacroSkip`: disregard femtos entirely and additionally skip every other
///   macro handover; during a skipped macro's dwell the user is in blackout,
///   served jointly by the second and third strongest macros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    BestConnected,
    FemtoSkip,
    FemtoDisregard,
    MacroSkip,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::BestConnected,
        Strategy::FemtoSkip,
        Strategy::FemtoDisregard,
        Strategy::MacroSkip,
    ];

    /// Short lowercase tag used in configs and output tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::BestConnected => "bc",
            Strategy::FemtoSkip => "fs",
            Strategy::FemtoDisregard => "fd",
            Strategy::MacroSkip => "ms",
        }
    }

    /// Whether the strategy ever enters a blackout phase (and can therefore
    /// benefit from cancelling the skipped station's interference).
    pub fn has_blackout(&self) -> bool {
        !matches!(self, Strategy::BestConnected)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bc" | "best-connected" => Ok(Strategy::BestConnected),
            "fs" | "femto-skip" => Ok(Strategy::FemtoSkip),
            "fd" | "femto-disregard" => Ok(Strategy::FemtoDisregard),
            "ms" | "macro-skip" => Ok(Strategy::MacroSkip),
            other => Err(format!(
                "unknown strategy '{other}' (expected bc, fs, fd or ms)"
            )),
        }
    }
}

/// A strategy together with its blackout interference-cancellation flag.
///
/// Cancellation removes the skipped or disregarded station's signal from the
/// interference during blackout phases; it has no effect on connected phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StrategyChoice {
    pub strategy: Strategy,
    pub ic: bool,
}

impl StrategyChoice {
    pub const fn new(strategy: Strategy, ic: bool) -> Self {
        Self { strategy, ic }
    }

    /// Every distinct combination; the baseline appears once because it has
    /// no blackout phase for cancellation to act on.
    pub const ALL: [StrategyChoice; 7] = [
        StrategyChoice::new(Strategy::BestConnected, false),
        StrategyChoice::new(Strategy::FemtoSkip, false),
        StrategyChoice::new(Strategy::FemtoSkip, true),
        StrategyChoice::new(Strategy::FemtoDisregard, false),
        StrategyChoice::new(Strategy::FemtoDisregard, true),
        StrategyChoice::new(Strategy::MacroSkip, false),
        StrategyChoice::new(Strategy::MacroSkip, true),
    ];

    /// Tag like `fs+ic`, matching the strategy tags used in output tables.
    pub fn tag(&self) -> String {
        if self.ic {
            format!("{}+ic", self.strategy.tag())
        } else {
            self.strategy.tag().to_string()
        }
    }
}

impl fmt::Display for StrategyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, ic) = match s.strip_suffix("+ic") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let strategy: Strategy = base.parse()?;
        if ic && !strategy.has_blackout() {
            return Err(format!(
                "'{s}': cancellation only applies to strategies with blackout phases"
            ));
        }
        Ok(StrategyChoice::new(strategy, ic))
    }
}

/// Service phase of a user under a given strategy.
///
/// `FemtoServed` is unreachable under `FemtoDisregard`; under `MacroSkip` it
/// denotes the connected phase in which the strongest station is a
/// (disregarded) femto while a macro serves. `Blackout` is unreachable under
/// `BestConnected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ServicePhase {
    MacroServed,
    FemtoServed,
    Blackout,
}

/// Long-run fractions of time spent in each service phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseProbabilities {
    pub macro_served: f64,
    pub femto_served: f64,
    pub blackout: f64,
}

impl PhaseProbabilities {
    pub fn sum(&self) -> f64 {
        self.macro_served + self.femto_served + self.blackout
    }

    pub fn get(&self, phase: ServicePhase) -> f64 {
        match phase {
            ServicePhase::MacroServed => self.macro_served,
            ServicePhase::FemtoServed => self.femto_served,
            ServicePhase::Blackout => self.blackout,
        }
    }
}

/// Long-run phase probabilities of a strategy.
///
/// With macro association probability `A_m` and femto association probability
/// `A_f = 1 - A_m`:
///
/// - best connected: `{A_m, A_f, 0}`
/// - femto skip: `{A_m, A_f/2, A_f/2}` (alternate femto dwells are skipped)
/// - femto disregard: `{A_m, 0, A_f}`
/// - macro skip: `{(1-A_f)/2, A_f/2, 1/2}`; half of all macro dwells are
///   skipped, and during connected dwells the strongest station may still be
///   a (disregarded, interfering) femto, which is its own phase because the
///   interference geometry differs.
pub fn phase_probabilities(
    params: &NetworkParams,
    strategy: Strategy,
) -> Result<PhaseProbabilities, ModelError> {
    let a_m = params.association_probability()?;
    let a_f = 1.0 - a_m;
    Ok(match strategy {
        Strategy::BestConnected => PhaseProbabilities {
            macro_served: a_m,
            femto_served: a_f,
            blackout: 0.0,
        },
        Strategy::FemtoSkip => PhaseProbabilities {
            macro_served: a_m,
            femto_served: 0.5 * a_f,
            blackout: 0.5 * a_f,
        },
        Strategy::FemtoDisregard => PhaseProbabilities {
            macro_served: a_m,
            femto_served: 0.0,
            blackout: a_f,
        },
        Strategy::MacroSkip => PhaseProbabilities {
            macro_served: 0.5 * (1.0 - a_f),
            femto_served: 0.5 * a_f,
            blackout: 0.5,
        },
    })
}
