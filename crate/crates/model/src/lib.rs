//! Core types for a two-tier downlink cellular network with velocity-aware
//! handover skipping.
//!
//! The network consists of two independent homogeneous Poisson fields of base
//! stations: a macro tier and a denser, lower-power femto tier. Users associate
//! with the strongest base station by mean received signal strength and may
//! *skip* handovers at high velocity, trading connectivity (a "blackout" phase
//! served by coordinated multipoint transmission from the next-strongest
//! stations) against handover signalling cost.
//!
//! Units are kilometres, square kilometres, watts and seconds throughout.
//! Velocities are accepted in km/h and converted internally.

mod error;
mod mobility;
mod params;
mod strategy;

pub use error::ModelError;
pub use mobility::MobilityProfile;
pub use params::{NetworkParams, TierParams};
pub use strategy::{
    phase_probabilities, PhaseProbabilities, ServicePhase, Strategy, StrategyChoice, Tier,
};

/// Converts a velocity given in km/h to km/s.
pub fn kmh_to_km_per_s(v_kmh: f64) -> f64 {
    v_kmh / 3600.0
}
