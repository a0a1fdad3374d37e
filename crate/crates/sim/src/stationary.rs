//! Stationary Monte Carlo coverage estimation.
//!
//! One set of field realizations serves a whole strategy-by-threshold grid:
//! each realization is summarised once, every requested strategy choice is
//! evaluated on it, and each SINR is compared against every threshold. The
//! grid therefore costs one field sweep instead of one per cell, and the
//! per-cell estimates are paired.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use hoskip_model::{NetworkParams, StrategyChoice};

use crate::realization::{default_window_side_km, sample_realization};
use crate::sinr::{strategy_sinr, PhaseDraw};
use crate::SimError;

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    /// Number of independent realizations.
    pub samples: u64,
    /// Seed of the realization-indexed random streams. Estimates are
    /// reproducible bit for bit for a fixed seed, whatever the thread count.
    pub seed: u64,
    /// Sampling window side in km; `None` picks a side wide enough for the
    /// parameters at hand, see
    /// [`default_window_side_km`](crate::realization::default_window_side_km).
    pub window_side_km: Option<f64>,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            window_side_km: None,
        }
    }
}

/// One empirical coverage probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub probability: f64,
    /// Binomial standard error `sqrt(p (1 - p) / n)`.
    pub std_error: f64,
    pub hits: u64,
    /// Accepted realizations behind the estimate.
    pub samples: u64,
}

/// Coverage estimates for a strategy-by-threshold grid evaluated on one
/// shared set of realizations.
#[derive(Debug, Clone)]
pub struct CoverageGrid {
    /// `estimates[i][j]` is choice `i` at threshold `j`, in request order.
    pub estimates: Vec<Vec<CoverageEstimate>>,
    /// Realizations dropped because some requested strategy lacked a station
    /// it needed (all cells keep a common denominator). At default window
    /// sizes this stays zero for any reasonable density.
    pub rejected: u64,
}

struct Tally {
    hits: Vec<u64>,
    rejected: u64,
    scratch: Vec<f64>,
}

impl Tally {
    fn new(cells: usize, choices: usize) -> Self {
        Self {
            hits: vec![0; cells],
            rejected: 0,
            scratch: Vec::with_capacity(choices),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.hits.iter_mut().zip(other.hits) {
            *a += b;
        }
        self.rejected += other.rejected;
        self
    }
}

/// Estimates coverage for every `(choice, threshold)` pair.
///
/// # Arguments
/// * `choices` - strategy choices to evaluate; rows of the result.
/// * `thresholds` - linear SINR thresholds (not dB); columns of the result.
pub fn coverage_grid(
    params: &NetworkParams,
    choices: &[StrategyChoice],
    thresholds: &[f64],
    cfg: &McConfig,
) -> Result<CoverageGrid, SimError> {
    params.validate()?;
    if choices.is_empty() {
        return Err(SimError::EmptyRequest("no strategy choices"));
    }
    if thresholds.is_empty() {
        return Err(SimError::EmptyRequest("no thresholds"));
    }
    for &t in thresholds {
        if !(t > 0.0) || !t.is_finite() {
            return Err(SimError::InvalidSetting {
                name: "threshold",
                value: t,
                constraint: "must be finite and > 0",
            });
        }
    }
    if cfg.samples == 0 {
        return Err(SimError::InvalidSetting {
            name: "sample count",
            value: 0.0,
            constraint: "must be >= 1",
        });
    }
    let side = cfg
        .window_side_km
        .unwrap_or_else(|| default_window_side_km(params));
    if !(side > 0.0) || !side.is_finite() {
        return Err(SimError::InvalidSetting {
            name: "window side",
            value: side,
            constraint: "requires a tier with positive density",
        });
    }

    let cells = choices.len() * thresholds.len();
    let tally = (0..cfg.samples)
        .into_par_iter()
        .fold(
            || Tally::new(cells, choices.len()),
            |mut tally, index| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(index);
                let real = sample_realization(params, side, &mut rng);
                let draw = PhaseDraw {
                    skip: rng.random(),
                    blackout_fade: Exp1.sample(&mut rng),
                };
                tally.scratch.clear();
                for &choice in choices {
                    match strategy_sinr(&real, choice, &draw, params.noise_power_watt) {
                        Some(outcome) => tally.scratch.push(outcome.sinr),
                        None => {
                            tally.rejected += 1;
                            return tally;
                        }
                    }
                }
                for (i, &sinr) in tally.scratch.iter().enumerate() {
                    for (j, &threshold) in thresholds.iter().enumerate() {
                        tally.hits[i * thresholds.len() + j] += u64::from(sinr > threshold);
                    }
                }
                tally
            },
        )
        .reduce(|| Tally::new(cells, choices.len()), Tally::merge);

    let accepted = cfg.samples - tally.rejected;
    if accepted == 0 {
        return Err(SimError::AllRejected);
    }
    let estimates = choices
        .iter()
        .enumerate()
        .map(|(i, _)| {
            thresholds
                .iter()
                .enumerate()
                .map(|(j, _)| {
                    let hits = tally.hits[i * thresholds.len() + j];
                    let probability = hits as f64 / accepted as f64;
                    CoverageEstimate {
                        probability,
                        std_error: crate::stats::binomial_std_error(probability, accepted),
                        hits,
                        samples: accepted,
                    }
                })
                .collect()
        })
        .collect();
    Ok(CoverageGrid {
        estimates,
        rejected: tally.rejected,
    })
}

/// Estimates a single strategy choice at a single linear threshold.
pub fn coverage_estimate(
    params: &NetworkParams,
    choice: StrategyChoice,
    threshold: f64,
    cfg: &McConfig,
) -> Result<CoverageEstimate, SimError> {
    let grid = coverage_grid(params, &[choice], &[threshold], cfg)?;
    Ok(grid.estimates[0][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use hoskip_model::{phase_probabilities, ServicePhase, Strategy, TierParams};

    fn reference() -> NetworkParams {
        NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(70.0, 0.1), 4.0)
    }

    #[test]
    fn grid_shape_and_counters_are_consistent() {
        let params = reference();
        let cfg = McConfig::new(300, 42);
        let choices = [
            StrategyChoice::new(Strategy::BestConnected, false),
            StrategyChoice::new(Strategy::MacroSkip, true),
        ];
        let grid = coverage_grid(&params, &choices, &[1.0, 2.0], &cfg).unwrap();
        assert_eq!(grid.estimates.len(), 2);
        assert_eq!(grid.rejected, 0);
        for row in &grid.estimates {
            assert_eq!(row.len(), 2);
            // raising the threshold can only lose hits on shared realizations
            assert!(row[0].hits >= row[1].hits);
            for cell in row {
                assert_eq!(cell.samples, 300);
                assert!(cell.probability >= 0.0 && cell.probability <= 1.0);
            }
        }
    }

    #[test]
    fn same_seed_reproduces_across_thread_counts() {
        let params = reference();
        let cfg = McConfig::new(200, 9);
        let choices = [StrategyChoice::new(Strategy::FemtoSkip, false)];
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| coverage_grid(&params, &choices, &[1.0], &cfg).unwrap())
        };
        let single = run(1);
        let quad = run(4);
        assert_eq!(
            single.estimates[0][0].hits,
            quad.estimates[0][0].hits
        );
        assert_eq!(single.estimates[0][0].probability, quad.estimates[0][0].probability);
    }

    #[test]
    fn phase_frequencies_match_the_analytic_mix() {
        let params = reference();
        let side = default_window_side_km(&params);
        let samples = 4000u64;
        let mut counts = std::collections::HashMap::new();
        for index in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            rng.set_stream(index);
            let real = sample_realization(&params, side, &mut rng);
            let draw = PhaseDraw {
                skip: rng.random(),
                blackout_fade: Exp1.sample(&mut rng),
            };
            for strategy in hoskip_model::Strategy::ALL {
                let out = strategy_sinr(
                    &real,
                    StrategyChoice::new(strategy, false),
                    &draw,
                    0.0,
                )
                .unwrap();
                *counts.entry((strategy, out.phase)).or_insert(0u64) += 1;
            }
        }
        for strategy in hoskip_model::Strategy::ALL {
            let probs = phase_probabilities(&params, strategy).unwrap();
            for phase in [
                ServicePhase::MacroServed,
                ServicePhase::FemtoServed,
                ServicePhase::Blackout,
            ] {
                let expected = probs.get(phase);
                let observed = *counts.get(&(strategy, phase)).unwrap_or(&0) as f64
                    / samples as f64;
                // binomial four-sigma bands around each analytic probability
                let band = 4.0 * (expected * (1.0 - expected) / samples as f64).sqrt();
                assert!(
                    (observed - expected).abs() <= band.max(1e-9),
                    "{strategy:?}/{phase:?}: observed {observed}, expected {expected}"
                );
            }
        }
    }

    #[test]
    fn impossible_requests_error_out() {
        let params = reference();
        let cfg = McConfig::new(10, 0);
        let bc = [StrategyChoice::new(Strategy::BestConnected, false)];
        assert!(matches!(
            coverage_grid(&params, &[], &[1.0], &cfg),
            Err(SimError::EmptyRequest(_))
        ));
        assert!(matches!(
            coverage_grid(&params, &bc, &[], &cfg),
            Err(SimError::EmptyRequest(_))
        ));
        assert!(matches!(
            coverage_grid(&params, &bc, &[-1.0], &cfg),
            Err(SimError::InvalidSetting { .. })
        ));
        let empty = NetworkParams::new(TierParams::new(0.0, 1.0), TierParams::new(0.0, 0.1), 4.0);
        assert!(matches!(
            coverage_grid(&empty, &bc, &[1.0], &cfg),
            Err(SimError::InvalidSetting { .. })
        ));
        // macro-skip in a femto-only network rejects every realization
        let femto_only =
            NetworkParams::new(TierParams::new(0.0, 1.0), TierParams::new(70.0, 0.1), 4.0);
        let ms = [StrategyChoice::new(Strategy::MacroSkip, false)];
        assert!(matches!(
            coverage_grid(&femto_only, &ms, &[1.0], &cfg),
            Err(SimError::AllRejected)
        ));
    }
}
