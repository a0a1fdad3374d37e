//! Streaming sampler for one realization of the two-tier Poisson field.
//!
//! Coverage statistics need only a handful of summaries of the field as seen
//! by a probe user at the origin: the three strongest stations overall (joint
//! service during skipped dwells comes from the next-strongest pair), the
//! three strongest macros (macro-only strategies serve and skip by macro
//! rank) and the total instantaneous interference power. Stations are
//! therefore folded into those summaries one at a time instead of
//! materialising the whole field.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use hoskip_model::{NetworkParams, Tier, TierParams};

use crate::SimError;

/// One station as seen by the probe user at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedStation {
    /// Mean received power `P d^-eta` in watts (fading averaged out);
    /// association and joint-service ranking use this.
    pub mean_rss: f64,
    /// Instantaneous received power including the Rayleigh fade.
    pub faded: f64,
    pub tier: Tier,
}

/// The strongest three stations of a stream, ranked by mean received power.
#[derive(Debug, Clone, Copy, Default)]
pub struct TopThree {
    items: [Option<RankedStation>; 3],
}

impl TopThree {
    /// Folds one station into the ranking.
    pub fn push(&mut self, station: RankedStation) {
        for i in 0..3 {
            match self.items[i] {
                Some(held) if held.mean_rss >= station.mean_rss => continue,
                _ => {
                    for j in (i + 1..3).rev() {
                        self.items[j] = self.items[j - 1];
                    }
                    self.items[i] = Some(station);
                    return;
                }
            }
        }
    }

    /// Station of the given rank (0 is strongest), if that many were seen.
    pub fn get(&self, rank: usize) -> Option<RankedStation> {
        self.items.get(rank).copied().flatten()
    }
}

/// Summaries of one field realization around the probe user.
#[derive(Debug, Clone, Copy, Default)]
pub struct Realization {
    /// Three strongest stations of either tier.
    pub top: TopThree,
    /// Three strongest macro stations.
    pub top_macro: TopThree,
    /// Sum of instantaneous received powers over every sampled station.
    pub total_faded: f64,
}

/// Default side of the square sampling window, in km.
///
/// Wide enough that the three strongest stations of every populated tier fall
/// inside with overwhelming probability and that the interference truncated
/// at the edge is negligible next to the near field: at least `40 / sqrt(S)`
/// for each tier's equivalent density `S` and at least `8 / sqrt(lambda)` for
/// each tier's own density. Returns 0 when both tiers are empty.
pub fn default_window_side_km(params: &NetworkParams) -> f64 {
    let mut side = 0f64;
    if params.macro_tier.density_per_km2 > 0.0 {
        side = side.max(40.0 / params.equivalent_density_macro().sqrt());
        side = side.max(8.0 / params.macro_tier.density_per_km2.sqrt());
    }
    if params.femto_tier.density_per_km2 > 0.0 {
        side = side.max(40.0 / params.equivalent_density_femto().sqrt());
        side = side.max(8.0 / params.femto_tier.density_per_km2.sqrt());
    }
    side
}

/// Draws one realization of the field in a centred square window.
///
/// # Arguments
/// * `params` - network parameters, assumed valid.
/// * `side_km` - window side; station counts are Poisson and positions
///   uniform over the square.
/// * `rng` - randomness source. A realization consumes a variable number of
///   draws, so callers wanting reproducibility dedicate one stream per
///   realization index.
pub fn sample_realization<R: Rng + ?Sized>(
    params: &NetworkParams,
    side_km: f64,
    rng: &mut R,
) -> Realization {
    let mut real = Realization::default();
    let eta = params.path_loss_exponent;
    sample_tier(&params.macro_tier, Tier::Macro, eta, side_km, rng, &mut real);
    sample_tier(&params.femto_tier, Tier::Femto, eta, side_km, rng, &mut real);
    real
}

fn sample_tier<R: Rng + ?Sized>(
    tier: &TierParams,
    label: Tier,
    eta: f64,
    side_km: f64,
    rng: &mut R,
    real: &mut Realization,
) {
    let mean_count = tier.density_per_km2 * side_km * side_km;
    if mean_count <= 0.0 {
        return;
    }
    let count = Poisson::new(mean_count).expect("positive mean").sample(rng) as u64;
    let half_side = side_km / 2.0;
    let half_eta = eta / 2.0;
    for _ in 0..count {
        let x: f64 = rng.random_range(-half_side..half_side);
        let y: f64 = rng.random_range(-half_side..half_side);
        // 1 mm guard: a station landing numerically on the user would put an
        // infinite power into the interference total.
        let d2 = (x * x + y * y).max(1e-12);
        let mean_rss = if half_eta == 2.0 {
            tier.power_watt / (d2 * d2)
        } else {
            tier.power_watt * d2.powf(-half_eta)
        };
        let fade: f64 = Exp1.sample(rng);
        let station = RankedStation {
            mean_rss,
            faded: fade * mean_rss,
            tier: label,
        };
        real.total_faded += station.faded;
        real.top.push(station);
        if label == Tier::Macro {
            real.top_macro.push(station);
        }
    }
}

/// Mapped positions of the three strongest stations over many realizations.
///
/// Mapping a station with mean received power `p` to
/// `pi lambda_t p^(-2/eta)` turns the combined field into a unit-rate Poisson
/// process on the half line, so the rank-`k` value is Gamma(k, 1). Returns
/// one vector per rank; realizations with fewer than three stations (never
/// seen at default window sizes) are skipped so the triples stay aligned.
pub fn mapped_order_samples(
    params: &NetworkParams,
    samples: u64,
    seed: u64,
) -> Result<[Vec<f64>; 3], SimError> {
    params.validate()?;
    let side = default_window_side_km(params);
    if !(side > 0.0) {
        return Err(SimError::InvalidSetting {
            name: "window side",
            value: side,
            constraint: "requires a tier with positive density",
        });
    }
    let scale = std::f64::consts::PI * params.mapped_intensity();
    let exponent = -2.0 / params.path_loss_exponent;
    let mut ranks = [Vec::new(), Vec::new(), Vec::new()];
    for index in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let real = sample_realization(params, side, &mut rng);
        let (Some(a), Some(b), Some(c)) = (real.top.get(0), real.top.get(1), real.top.get(2))
        else {
            continue;
        };
        ranks[0].push(scale * a.mean_rss.powf(exponent));
        ranks[1].push(scale * b.mean_rss.powf(exponent));
        ranks[2].push(scale * c.mean_rss.powf(exponent));
    }
    Ok(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> NetworkParams {
        NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(70.0, 0.1), 4.0)
    }

    fn station(mean_rss: f64) -> RankedStation {
        RankedStation {
            mean_rss,
            faded: mean_rss,
            tier: Tier::Macro,
        }
    }

    #[test]
    fn default_window_matches_reference_geometry() {
        // 40 / sqrt(52.1359...) for the macro-equivalent density.
        let side = default_window_side_km(&reference());
        approx::assert_relative_eq!(side, 5.539_765_383_363_942, max_relative = 1e-12);
        let single = NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(0.0, 0.1), 4.0);
        approx::assert_relative_eq!(
            default_window_side_km(&single),
            40.0 / 30f64.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn realization_summaries_are_consistent() {
        let params = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let real = sample_realization(&params, default_window_side_km(&params), &mut rng);
        let top: Vec<_> = (0..3).map(|r| real.top.get(r).unwrap()).collect();
        assert!(top[0].mean_rss >= top[1].mean_rss && top[1].mean_rss >= top[2].mean_rss);
        let macros: Vec<_> = (0..3).map(|r| real.top_macro.get(r).unwrap()).collect();
        assert!(macros.iter().all(|s| s.tier == Tier::Macro));
        assert!(macros[0].mean_rss >= macros[1].mean_rss);
        // the strongest macro can be at best the overall strongest
        assert!(macros[0].mean_rss <= top[0].mean_rss);
        let top_faded: f64 = top.iter().map(|s| s.faded).sum();
        assert!(real.total_faded >= top_faded);
    }

    #[test]
    fn mapped_order_samples_are_sorted_triples() {
        let ranks = mapped_order_samples(&reference(), 200, 11).unwrap();
        assert_eq!(ranks[0].len(), 200);
        for i in 0..200 {
            assert!(0.0 < ranks[0][i] && ranks[0][i] < ranks[1][i] && ranks[1][i] < ranks[2][i]);
        }
    }

    #[test]
    fn empty_network_is_rejected() {
        let params = NetworkParams::new(TierParams::new(0.0, 1.0), TierParams::new(0.0, 0.1), 4.0);
        assert!(matches!(
            mapped_order_samples(&params, 10, 0),
            Err(SimError::InvalidSetting { .. })
        ));
    }

    proptest! {
        #[test]
        fn top_three_matches_sorting(values in proptest::collection::vec(1e-3..1e3f64, 0..12)) {
            let mut top = TopThree::default();
            for &v in &values {
                top.push(station(v));
            }
            let mut sorted = values.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for rank in 0..3 {
                match (top.get(rank), sorted.get(rank)) {
                    (Some(s), Some(&v)) => prop_assert_eq!(s.mean_rss, v),
                    (None, None) => {}
                    (held, expected) => prop_assert!(false, "rank {}: {:?} vs {:?}", rank, held, expected),
                }
            }
        }
    }
}
