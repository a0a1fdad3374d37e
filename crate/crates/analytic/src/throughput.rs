//! Average throughput: coverage-limited rate discounted by handover time.
//!
//! A user decodes `ln(1 + threshold)` nats per symbol whenever its SINR
//! exceeds the threshold, so the long-run spectral efficiency is
//! `ln(1 + threshold) * coverage` and the average throughput over a
//! bandwidth `W` is
//!
//! `W * ln(1 + threshold) * coverage * (1 - handover_fraction) / ln 2`
//!
//! in bits per second. Coverage does not depend on velocity and handover
//! cost does not depend on the threshold, so [`ThroughputModel`] caches the
//! expensive coverage integrals and reuses them across a velocity sweep.

use std::collections::HashMap;

use hoskip_model::{MobilityProfile, NetworkParams};
pub use hoskip_model::StrategyChoice;

use crate::coverage::{coverage, CoverageResult};
use crate::handover::handover_cost;
use crate::AnalyticError;

/// Spectral efficiency in nats/s/Hz at a fixed-rate threshold.
pub fn spectral_efficiency_nats(threshold: f64, coverage_probability: f64) -> f64 {
    threshold.ln_1p() * coverage_probability
}

/// Throughput of one strategy choice at one mobility profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputResult {
    pub choice: StrategyChoice,
    /// Total coverage probability of the choice.
    pub coverage: f64,
    /// Fraction of time lost to handovers (clamped to 1).
    pub handover_fraction: f64,
    /// True when the unclamped rate-delay product exceeded 1.
    pub infeasible: bool,
    /// `ln(1 + threshold) * coverage`, nats/s/Hz before the handover discount.
    pub rate_nats_hz: f64,
    /// `W * rate * (1 - handover_fraction) / ln 2`, bits per second.
    pub throughput_bps: f64,
}

/// Caches coverage per strategy choice for a fixed network and threshold.
#[derive(Debug, Clone)]
pub struct ThroughputModel {
    params: NetworkParams,
    threshold: f64,
    bandwidth_hz: f64,
    cache: HashMap<StrategyChoice, CoverageResult>,
}

impl ThroughputModel {
    /// # Arguments
    ///
    /// * `params` - network parameters (validated here).
    /// * `threshold` - linear SINR threshold, finite and non-negative.
    /// * `bandwidth_hz` - system bandwidth, finite and positive.
    pub fn new(
        params: NetworkParams,
        threshold: f64,
        bandwidth_hz: f64,
    ) -> Result<Self, AnalyticError> {
        params.validate()?;
        if !(threshold >= 0.0) || !threshold.is_finite() {
            return Err(AnalyticError::Domain(format!(
                "SINR threshold must be finite and >= 0, got {threshold}"
            )));
        }
        if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
            return Err(AnalyticError::Domain(format!(
                "bandwidth must be finite and > 0, got {bandwidth_hz}"
            )));
        }
        Ok(Self {
            params,
            threshold,
            bandwidth_hz,
            cache: HashMap::new(),
        })
    }

    pub fn params(&self) -> &NetworkParams {
        &self.params
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    /// Number of coverage results computed so far.
    pub fn cached_len(&self) -> usize {
        self.cache.len()
    }

    /// Coverage of `choice`, computed once and cached.
    ///
    /// The baseline's cancellation flag is normalised away so `bc` and a
    /// hypothetical `bc+ic` share one cache entry.
    pub fn coverage(&mut self, choice: StrategyChoice) -> Result<CoverageResult, AnalyticError> {
        let key = normalise(choice);
        if !self.cache.contains_key(&key) {
            let r = coverage(&self.params, key.strategy, self.threshold, key.ic)?;
            self.cache.insert(key, r);
        }
        Ok(self.cache[&key].clone())
    }

    /// Average throughput of `choice` at `mobility`.
    pub fn throughput(
        &mut self,
        choice: StrategyChoice,
        mobility: &MobilityProfile,
    ) -> Result<ThroughputResult, AnalyticError> {
        let cov = self.coverage(choice)?;
        let cost = handover_cost(&self.params, choice.strategy, mobility)?;
        let rate = spectral_efficiency_nats(self.threshold, cov.value);
        Ok(ThroughputResult {
            choice,
            coverage: cov.value,
            handover_fraction: cost.fraction,
            infeasible: cost.clamped,
            rate_nats_hz: rate,
            throughput_bps: self.bandwidth_hz * rate * (1.0 - cost.fraction)
                / std::f64::consts::LN_2,
        })
    }

    /// The choice with the highest throughput at `mobility`, with ties
    /// resolved in [`StrategyChoice::ALL`] order.
    pub fn best(&mut self, mobility: &MobilityProfile) -> Result<ThroughputResult, AnalyticError> {
        let mut best: Option<ThroughputResult> = None;
        for choice in StrategyChoice::ALL {
            let r = self.throughput(choice, mobility)?;
            let better = match &best {
                Some(b) => r.throughput_bps > b.throughput_bps,
                None => true,
            };
            if better {
                best = Some(r);
            }
        }
        Ok(best.expect("StrategyChoice::ALL is non-empty"))
    }
}

fn normalise(choice: StrategyChoice) -> StrategyChoice {
    if choice.strategy.has_blackout() {
        choice
    } else {
        StrategyChoice::new(choice.strategy, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hoskip_model::{Strategy, TierParams};

    fn reference() -> NetworkParams {
        NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(70.0, 0.1), 4.0)
    }

    fn six_db() -> f64 {
        10f64.powf(0.6)
    }

    fn mobility(v: f64) -> MobilityProfile {
        MobilityProfile {
            velocity_kmh: v,
            macro_delay_s: 0.35,
            femto_delay_s: 0.7,
        }
    }

    #[test]
    fn stationary_throughput_matches_closed_form() {
        let t = six_db();
        let mut model = ThroughputModel::new(reference(), t, 1e7).unwrap();
        let r = model
            .throughput(
                StrategyChoice::new(Strategy::BestConnected, false),
                &mobility(0.0),
            )
            .unwrap();
        // no handovers at v = 0, coverage has the arctan closed form
        let cov = 1.0 / (1.0 + t.sqrt() * t.sqrt().atan());
        let expect = 1e7 * t.ln_1p() * cov / std::f64::consts::LN_2;
        assert_eq!(r.handover_fraction, 0.0);
        assert!((r.throughput_bps - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn throughput_decreases_with_velocity() {
        let mut model = ThroughputModel::new(reference(), six_db(), 1e7).unwrap();
        let choice = StrategyChoice::new(Strategy::FemtoSkip, true);
        let mut prev = f64::INFINITY;
        for v in [0.0, 60.0, 120.0, 180.0] {
            let r = model.throughput(choice, &mobility(v)).unwrap();
            assert!(r.throughput_bps < prev || v == 0.0);
            prev = r.throughput_bps;
        }
    }

    #[test]
    fn coverage_cache_computes_each_choice_once() {
        let mut model = ThroughputModel::new(reference(), six_db(), 1e7).unwrap();
        let choice = StrategyChoice::new(Strategy::FemtoSkip, false);
        let a = model.coverage(choice).unwrap();
        assert_eq!(model.cached_len(), 1);
        let b = model.coverage(choice).unwrap();
        assert_eq!(model.cached_len(), 1);
        assert_eq!(a, b);
        // the baseline ignores ic, sharing a single entry
        model
            .coverage(StrategyChoice::new(Strategy::BestConnected, true))
            .unwrap();
        model
            .coverage(StrategyChoice::new(Strategy::BestConnected, false))
            .unwrap();
        assert_eq!(model.cached_len(), 2);
    }

    #[test]
    fn stationary_best_is_the_baseline() {
        // with no mobility there is no handover cost, so the strategy with
        // the highest coverage (never skipping) wins
        let mut model = ThroughputModel::new(reference(), six_db(), 1e7).unwrap();
        let best = model.best(&mobility(0.0)).unwrap();
        assert_eq!(best.choice.strategy, Strategy::BestConnected);
    }

    #[test]
    fn choice_tags_are_stable() {
        assert_eq!(StrategyChoice::new(Strategy::FemtoSkip, true).tag(), "fs+ic");
        assert_eq!(StrategyChoice::new(Strategy::MacroSkip, false).tag(), "ms");
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(ThroughputModel::new(reference(), -1.0, 1e7).is_err());
        assert!(ThroughputModel::new(reference(), 1.0, 0.0).is_err());
    }
}
