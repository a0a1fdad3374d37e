//! Handover counting along straight tracks through the service tessellation.
//!
//! The serving station at a position is the maximiser of mean received power
//! `P d^-eta`, i.e. the minimiser of the weighted squared distance
//! `d^2 / P^(2/eta)`; its cell boundaries form the weighted tessellation
//! whose crossings are the handovers. A track is swept coarsely, and every
//! server change is localised by recursive bisection so that consecutive
//! crossings inside one coarse step are still resolved and typed by the
//! tiers on both sides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use hoskip_model::{kmh_to_km_per_s, NetworkParams, Tier, TierParams};

use crate::SimError;

/// Track simulation configuration.
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryConfig {
    /// Track length in km; the user moves along it at constant speed.
    pub track_length_km: f64,
    /// Speed in km/h; only converts counts into rates.
    pub velocity_kmh: f64,
    /// Coarse sweep step in km. `None` picks
    /// `0.05 / sqrt(lambda_m + lambda_f)`, a small fraction of the mean
    /// boundary spacing.
    pub step_km: Option<f64>,
    /// Bisection stops once a crossing is bracketed this tightly, in km.
    pub refine_tol_km: f64,
    /// Margin around the track inside which stations are sampled. `None`
    /// picks a width that contains the serving station everywhere on the
    /// track with overwhelming probability.
    pub margin_km: Option<f64>,
    /// Seed of the track-indexed random streams.
    pub seed: u64,
}

impl TrajectoryConfig {
    pub fn new(track_length_km: f64, velocity_kmh: f64, seed: u64) -> Self {
        Self {
            track_length_km,
            velocity_kmh,
            step_km: None,
            refine_tol_km: 1e-5,
            margin_km: None,
            seed,
        }
    }
}

/// One boundary crossing along a track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub position_km: f64,
    pub from: Tier,
    pub to: Tier,
}

/// Handover counts split by the tiers on both sides of the crossing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HandoverCounts {
    pub macro_to_macro: u64,
    pub macro_to_femto: u64,
    pub femto_to_macro: u64,
    pub femto_to_femto: u64,
}

impl HandoverCounts {
    pub fn total(&self) -> u64 {
        self.macro_to_macro + self.macro_to_femto + self.femto_to_macro + self.femto_to_femto
    }

    /// Crossings with a femto on at least one side.
    pub fn femto_involved(&self) -> u64 {
        self.total() - self.macro_to_macro
    }

    pub fn get(&self, from: Tier, to: Tier) -> u64 {
        match (from, to) {
            (Tier::Macro, Tier::Macro) => self.macro_to_macro,
            (Tier::Macro, Tier::Femto) => self.macro_to_femto,
            (Tier::Femto, Tier::Macro) => self.femto_to_macro,
            (Tier::Femto, Tier::Femto) => self.femto_to_femto,
        }
    }

    fn record(&mut self, from: Tier, to: Tier) {
        match (from, to) {
            (Tier::Macro, Tier::Macro) => self.macro_to_macro += 1,
            (Tier::Macro, Tier::Femto) => self.macro_to_femto += 1,
            (Tier::Femto, Tier::Macro) => self.femto_to_macro += 1,
            (Tier::Femto, Tier::Femto) => self.femto_to_femto += 1,
        }
    }

    fn merge(mut self, other: HandoverCounts) -> HandoverCounts {
        self.macro_to_macro += other.macro_to_macro;
        self.macro_to_femto += other.macro_to_femto;
        self.femto_to_macro += other.femto_to_macro;
        self.femto_to_femto += other.femto_to_femto;
        self
    }
}

/// Crossing counts aggregated over independent tracks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackEstimate {
    pub counts: HandoverCounts,
    pub tracks: u64,
    /// Total traversal time over all tracks, in seconds.
    pub total_time_s: f64,
}

impl TrackEstimate {
    /// Empirical handover rate over all types, in 1/s.
    pub fn total_rate_per_s(&self) -> f64 {
        self.counts.total() as f64 / self.total_time_s
    }

    /// Empirical rate of one crossing type, in 1/s.
    pub fn rate_per_s(&self, from: Tier, to: Tier) -> f64 {
        self.counts.get(from, to) as f64 / self.total_time_s
    }
}

// Weighted squared distance to a station, as a quadratic in the track
// coordinate: score(x) = a x^2 - 2 b x + c with a = P^(-2/eta),
// b = a x_s and c = a (x_s^2 + y_s^2).
struct TrackStation {
    a: f64,
    b: f64,
    c: f64,
    tier: Tier,
}

impl TrackStation {
    fn score(&self, x: f64) -> f64 {
        (self.a * x - 2.0 * self.b) * x + self.c
    }
}

/// Margin within which the serving station lies, wherever the user is.
///
/// In the scaled distance `d / P^(1/eta)` the combined field is a Poisson
/// process whose nearest point to any location is within `8 / sqrt(lambda_t)`
/// except with probability `exp(-64 pi)`; multiplying back the largest power
/// scaling bounds the true serving distance.
pub fn default_margin_km(params: &NetworkParams) -> f64 {
    let inv_eta = 1.0 / params.path_loss_exponent;
    let mut power_scale = 0f64;
    if params.macro_tier.density_per_km2 > 0.0 {
        power_scale = power_scale.max(params.macro_tier.power_watt.powf(inv_eta));
    }
    if params.femto_tier.density_per_km2 > 0.0 {
        power_scale = power_scale.max(params.femto_tier.power_watt.powf(inv_eta));
    }
    let mapped = params.mapped_intensity();
    if mapped <= 0.0 {
        return 0.0;
    }
    8.0 * power_scale / mapped.sqrt()
}

fn default_step_km(params: &NetworkParams) -> f64 {
    let total = params.macro_tier.density_per_km2 + params.femto_tier.density_per_km2;
    0.05 / total.sqrt()
}

fn validate_config(cfg: &TrajectoryConfig) -> Result<(), SimError> {
    let positive: [(&'static str, f64); 2] = [
        ("track length", cfg.track_length_km),
        ("refinement tolerance", cfg.refine_tol_km),
    ];
    for (name, value) in positive {
        if !(value > 0.0) || !value.is_finite() {
            return Err(SimError::InvalidSetting {
                name,
                value,
                constraint: "must be finite and > 0",
            });
        }
    }
    if let Some(step) = cfg.step_km {
        if !(step > 0.0) || !step.is_finite() {
            return Err(SimError::InvalidSetting {
                name: "sweep step",
                value: step,
                constraint: "must be finite and > 0",
            });
        }
    }
    if let Some(margin) = cfg.margin_km {
        if !(margin >= 0.0) || !margin.is_finite() {
            return Err(SimError::InvalidSetting {
                name: "margin",
                value: margin,
                constraint: "must be finite and >= 0",
            });
        }
    }
    Ok(())
}

fn sample_track_stations(
    params: &NetworkParams,
    length_km: f64,
    margin_km: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<TrackStation> {
    let width = 2.0 * margin_km;
    let span = length_km + width;
    let area = span * width;
    let mut stations = Vec::new();
    let inv_eta2 = -2.0 / params.path_loss_exponent;
    let mut sample = |tier: &TierParams, label: Tier, rng: &mut ChaCha8Rng| {
        let mean_count = tier.density_per_km2 * area;
        if mean_count <= 0.0 {
            return;
        }
        let count = Poisson::new(mean_count).expect("positive mean").sample(rng) as u64;
        let a = tier.power_watt.powf(inv_eta2);
        for _ in 0..count {
            let x: f64 = rng.random_range(-margin_km..length_km + margin_km);
            let y: f64 = rng.random_range(-margin_km..margin_km);
            stations.push(TrackStation {
                a,
                b: a * x,
                c: a * (x * x + y * y),
                tier: label,
            });
        }
    };
    sample(&params.macro_tier, Tier::Macro, rng);
    sample(&params.femto_tier, Tier::Femto, rng);
    stations
}

fn server_at(stations: &[TrackStation], x: f64) -> usize {
    let mut best = 0;
    let mut best_score = f64::INFINITY;
    for (i, s) in stations.iter().enumerate() {
        let score = s.score(x);
        if score < best_score {
            best_score = score;
            best = i;
        }
    }
    best
}

fn refine(
    stations: &[TrackStation],
    a: f64,
    b: f64,
    server_a: usize,
    server_b: usize,
    tol: f64,
    out: &mut Vec<Crossing>,
) {
    if server_a == server_b {
        return;
    }
    if b - a <= tol {
        out.push(Crossing {
            position_km: 0.5 * (a + b),
            from: stations[server_a].tier,
            to: stations[server_b].tier,
        });
        return;
    }
    let mid = 0.5 * (a + b);
    let server_mid = server_at(stations, mid);
    refine(stations, a, mid, server_a, server_mid, tol, out);
    refine(stations, mid, b, server_mid, server_b, tol, out);
}

/// Crossings along one track, in traversal order.
///
/// # Arguments
/// * `track_index` - selects the random stream; tracks with different
///   indices are independent realizations of the field.
pub fn track_crossings(
    params: &NetworkParams,
    cfg: &TrajectoryConfig,
    track_index: u64,
) -> Result<Vec<Crossing>, SimError> {
    params.validate()?;
    validate_config(cfg)?;
    let margin = cfg.margin_km.unwrap_or_else(|| default_margin_km(params));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(track_index);
    let stations = sample_track_stations(params, cfg.track_length_km, margin, &mut rng);
    if stations.is_empty() {
        return Ok(Vec::new());
    }
    let step = cfg.step_km.unwrap_or_else(|| default_step_km(params));
    let steps = (cfg.track_length_km / step).ceil().max(1.0) as u64;
    let mut crossings = Vec::new();
    let mut prev_x = 0.0;
    let mut prev_server = server_at(&stations, prev_x);
    for k in 1..=steps {
        let x = (k as f64 * step).min(cfg.track_length_km);
        let server = server_at(&stations, x);
        if server != prev_server {
            refine(
                &stations,
                prev_x,
                x,
                prev_server,
                server,
                cfg.refine_tol_km,
                &mut crossings,
            );
        }
        prev_x = x;
        prev_server = server;
    }
    Ok(crossings)
}

/// Counts typed crossings over independent tracks.
pub fn count_crossings(
    params: &NetworkParams,
    cfg: &TrajectoryConfig,
    tracks: u64,
) -> Result<TrackEstimate, SimError> {
    if tracks == 0 {
        return Err(SimError::InvalidSetting {
            name: "track count",
            value: 0.0,
            constraint: "must be >= 1",
        });
    }
    if !(cfg.velocity_kmh > 0.0) || !cfg.velocity_kmh.is_finite() {
        return Err(SimError::InvalidSetting {
            name: "velocity",
            value: cfg.velocity_kmh,
            constraint: "must be finite and > 0",
        });
    }
    let counts = (0..tracks)
        .into_par_iter()
        .map(|index| {
            track_crossings(params, cfg, index).map(|crossings| {
                let mut counts = HandoverCounts::default();
                for crossing in crossings {
                    counts.record(crossing.from, crossing.to);
                }
                counts
            })
        })
        .try_reduce(HandoverCounts::default, |a, b| Ok(a.merge(b)))?;
    let total_time_s =
        tracks as f64 * cfg.track_length_km / kmh_to_km_per_s(cfg.velocity_kmh);
    Ok(TrackEstimate {
        counts,
        tracks,
        total_time_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> NetworkParams {
        NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(70.0, 0.1), 4.0)
    }

    #[test]
    fn margin_covers_the_reference_network() {
        // 8 / sqrt(52.1359...) with the macro watt as the largest power
        approx::assert_relative_eq!(
            default_margin_km(&reference()),
            1.107_953_076_672_788,
            max_relative = 1e-12
        );
    }

    #[test]
    fn crossings_chain_consistently_along_the_track() {
        let params = reference();
        let cfg = TrajectoryConfig::new(2.0, 100.0, 3);
        let crossings = track_crossings(&params, &cfg, 0).unwrap();
        assert!(!crossings.is_empty());
        for pair in crossings.windows(2) {
            assert!(pair[0].position_km < pair[1].position_km);
            // the next crossing leaves the tier the previous one entered
            assert_eq!(pair[0].to, pair[1].from);
        }
        for crossing in &crossings {
            assert!(crossing.position_km > 0.0 && crossing.position_km < 2.0);
        }
    }

    #[test]
    fn tracks_are_reproducible_and_independent() {
        let params = reference();
        let cfg = TrajectoryConfig::new(1.0, 50.0, 17);
        let first = track_crossings(&params, &cfg, 4).unwrap();
        let again = track_crossings(&params, &cfg, 4).unwrap();
        assert_eq!(first, again);
        let other = track_crossings(&params, &cfg, 5).unwrap();
        assert_ne!(first, other);
    }

    #[test]
    fn count_crossings_aggregates_types() {
        let params = reference();
        let cfg = TrajectoryConfig::new(1.0, 100.0, 23);
        let estimate = count_crossings(&params, &cfg, 4).unwrap();
        assert_eq!(estimate.tracks, 4);
        // 4 km at 100 km/h is 144 seconds
        approx::assert_relative_eq!(estimate.total_time_s, 144.0, max_relative = 1e-12);
        assert_eq!(
            estimate.counts.total(),
            estimate.counts.macro_to_macro + estimate.counts.femto_involved()
        );
        assert!(estimate.total_rate_per_s() > 0.0);
    }

    #[test]
    fn empty_field_has_no_crossings() {
        let params = NetworkParams::new(TierParams::new(0.0, 1.0), TierParams::new(0.0, 0.1), 4.0);
        let cfg = TrajectoryConfig::new(1.0, 100.0, 1);
        assert!(track_crossings(&params, &cfg, 0).unwrap().is_empty());
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let params = reference();
        let mut cfg = TrajectoryConfig::new(0.0, 100.0, 1);
        assert!(matches!(
            track_crossings(&params, &cfg, 0),
            Err(SimError::InvalidSetting { .. })
        ));
        cfg.track_length_km = 1.0;
        cfg.velocity_kmh = 0.0;
        assert!(matches!(
            count_crossings(&params, &cfg, 2),
            Err(SimError::InvalidSetting { .. })
        ));
        cfg.velocity_kmh = 100.0;
        assert!(matches!(
            count_crossings(&params, &cfg, 0),
            Err(SimError::InvalidSetting { .. })
        ));
    }
}
