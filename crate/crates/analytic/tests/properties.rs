//! Structural properties of the analytic layer: monotonicity, dominance,
//! degenerate-tier reductions, and scaling laws.

use hoskip_analytic::coverage::{
    coverage, femto_disregard_blackout_coverage, femto_skip_blackout_coverage,
    macro_skip_blackout_coverage,
};
use hoskip_analytic::db_to_linear;
use hoskip_analytic::handover::handover_cost;
use hoskip_model::StrategyChoice;
use hoskip_model::{MobilityProfile, NetworkParams, TierParams};
use proptest::prelude::*;

fn reference() -> NetworkParams {
    NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(70.0, 0.1), 4.0)
}

#[test]
fn coverage_lies_in_unit_interval_and_decreases_with_threshold() {
    let p = reference();
    for choice in StrategyChoice::ALL {
        let mut prev = 1.0 + 1e-12;
        for db in [-3.0, 2.0, 7.0, 12.0] {
            let c = coverage(&p, choice.strategy, db_to_linear(db), choice.ic).unwrap();
            assert!(
                c.value > 0.0 && c.value < 1.0,
                "{} at {db} dB: {}",
                choice.tag(),
                c.value
            );
            assert!(
                c.value < prev,
                "{} not decreasing at {db} dB",
                choice.tag()
            );
            prev = c.value;
        }
    }
}

#[test]
fn cancelling_the_excluded_station_never_hurts() {
    let p = reference();
    for db in [0.0, 6.0] {
        let t = db_to_linear(db);
        let fs = |ic| femto_skip_blackout_coverage(&p, t, ic).unwrap().value;
        let fd = |ic| femto_disregard_blackout_coverage(&p, t, ic).unwrap().value;
        let ms = |ic| macro_skip_blackout_coverage(&p, t, ic).unwrap().value;
        assert!(fs(true) > fs(false), "{db} dB");
        assert!(fd(true) > fd(false), "{db} dB");
        assert!(ms(true) > ms(false), "{db} dB");
    }
}

#[test]
fn without_femtos_femto_strategies_equal_the_baseline() {
    let p = NetworkParams::new(TierParams::new(30.0, 1.0), TierParams::new(0.0, 0.1), 4.0);
    let t = db_to_linear(6.0);
    let bc = coverage(&p, hoskip_model::Strategy::BestConnected, t, false)
        .unwrap()
        .value;
    for s in [
        hoskip_model::Strategy::FemtoSkip,
        hoskip_model::Strategy::FemtoDisregard,
    ] {
        let c = coverage(&p, s, t, false).unwrap();
        assert_eq!(c.value, bc, "{s:?}");
        assert_eq!(c.phases.len(), 1);
    }
    // macro skipping still blacks out half the time, losing coverage
    let ms = coverage(&p, hoskip_model::Strategy::MacroSkip, t, false).unwrap();
    assert!(ms.value < bc);
}

#[test]
fn noise_strictly_reduces_coverage() {
    let clean = reference();
    let mut noisy = reference();
    noisy.noise_power_watt = 100.0;
    let t = db_to_linear(6.0);
    for choice in [
        StrategyChoice::ALL[0], // bc
        StrategyChoice::ALL[2], // fs+ic
        StrategyChoice::ALL[5], // ms
    ] {
        let a = coverage(&clean, choice.strategy, t, choice.ic)
            .unwrap()
            .value;
        let b = coverage(&noisy, choice.strategy, t, choice.ic)
            .unwrap()
            .value;
        assert!(b < a, "{}: noisy {b} vs clean {a}", choice.tag());
        assert!(b > 0.0);
    }
}

#[test]
fn general_path_loss_route_is_continuous_at_eta_four() {
    // eta = 4.0 dispatches to the arctan closed forms; a hair above uses the
    // hypergeometric series route, and the two must agree to the quadrature
    // tolerance
    let t = db_to_linear(6.0);
    let exact = reference();
    let mut nearby = reference();
    nearby.path_loss_exponent = 4.0 + 1e-7;
    let a = femto_skip_blackout_coverage(&exact, t, false).unwrap().value;
    let b = femto_skip_blackout_coverage(&nearby, t, false).unwrap().value;
    assert!((a - b).abs() < 5e-6, "fs: {a} vs {b}");
    let a = macro_skip_blackout_coverage(&exact, t, true).unwrap().value;
    let b = macro_skip_blackout_coverage(&nearby, t, true).unwrap().value;
    assert!((a - b).abs() < 5e-6, "ms+ic: {a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handover_cost_is_linear_in_velocity_and_ordered(
        v in 1.0..300.0f64,
        dm in 0.01..1.0f64,
        scale in 1.0..4.0f64,
    ) {
        let p = reference();
        let m1 = MobilityProfile {
            velocity_kmh: v,
            macro_delay_s: dm,
            femto_delay_s: dm * scale,
        };
        let m2 = MobilityProfile { velocity_kmh: 2.0 * v, ..m1 };
        let raw = |s, m: &MobilityProfile| handover_cost(&p, s, m).unwrap().raw_fraction;
        for s in hoskip_model::Strategy::ALL {
            let c1 = raw(s, &m1);
            let c2 = raw(s, &m2);
            prop_assert!((c2 - 2.0 * c1).abs() <= 1e-12 * c2, "{s:?}: {c1} {c2}");
        }
        let ms = raw(hoskip_model::Strategy::MacroSkip, &m1);
        let fd = raw(hoskip_model::Strategy::FemtoDisregard, &m1);
        let fs = raw(hoskip_model::Strategy::FemtoSkip, &m1);
        let bc = raw(hoskip_model::Strategy::BestConnected, &m1);
        prop_assert!(ms <= fd && fd <= fs && fs <= bc);
    }
}
