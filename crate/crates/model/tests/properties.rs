use hoskip_model::{phase_probabilities, NetworkParams, TierParams};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = NetworkParams> {
    (
        0.01f64..500.0,
        0.01f64..500.0,
        1e-3f64..100.0,
        1e-3f64..100.0,
        2.05f64..8.0,
    )
        .prop_map(|(lm, lf, pm, pf, eta)| {
            NetworkParams::new(TierParams::new(lm, pm), TierParams::new(lf, pf), eta)
        })
}

proptest! {
    #[test]
    fn association_probability_is_a_probability(p in arb_params()) {
        let a_m = p.association_probability().unwrap();
        prop_assert!((0.0..=1.0).contains(&a_m));
    }

    #[test]
    fn association_probability_increases_with_macro_density(p in arb_params()) {
        let a1 = p.association_probability().unwrap();
        let mut denser = p;
        denser.macro_tier.density_per_km2 *= 2.0;
        let a2 = denser.association_probability().unwrap();
        prop_assert!(a2 >= a1 - 1e-12);
    }

    #[test]
    fn phase_probabilities_sum_to_one_and_are_nonnegative(p in arb_params()) {
        for s in hoskip_model::Strategy::ALL {
            let ph = phase_probabilities(&p, s).unwrap();
            prop_assert!((ph.sum() - 1.0).abs() < 1e-12);
            prop_assert!(ph.macro_served >= 0.0);
            prop_assert!(ph.femto_served >= 0.0);
            prop_assert!(ph.blackout >= 0.0);
        }
    }

    #[test]
    fn mapped_intensity_positive_and_consistent(p in arb_params()) {
        let lt = p.mapped_intensity();
        prop_assert!(lt > 0.0);
        // lambda_t = S_m * P_m^(2/eta) where S_m is the macro-equivalent density
        let e = 2.0 / p.path_loss_exponent;
        let via_equivalent = p.equivalent_density_macro() * p.macro_tier.power_watt.powf(e);
        prop_assert!((lt - via_equivalent).abs() <= 1e-10 * lt);
    }
}
