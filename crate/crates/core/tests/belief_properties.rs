use belief_core::assistance::{analogy_from_concentrations, make_posterior_vis};
use belief_core::density::{focused_polyline, trapezoid};
use belief_core::hdi::equal_tailed;
use belief_core::text::Templates;
use belief_core::{
    fit_beta, hdi, likelihood_belief, posterior_update, AnalogyReference, BetaBelief, ElicitedInterval,
    ObservedData,
};
use belief_testkit as oracle;
use proptest::prelude::*;

/// Beta with both shapes at least 1, drawn through mode and concentration.
fn peaked(kappa_range: std::ops::Range<f64>) -> impl Strategy<Value = BetaBelief> {
    (0.01f64..0.99, kappa_range.start.ln()..kappa_range.end.ln())
        .prop_map(|(mode, lk)| BetaBelief::from_mode_concentration(mode, lk.exp()).unwrap())
}

fn data() -> impl Strategy<Value = ObservedData> {
    (1u64..20_000).prop_flat_map(|n| (0..=n).prop_map(move |s| ObservedData::new(s, n).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn conjugacy_closure(prior in peaked(2.0..1e5), d in data()) {
        let post = posterior_update(&prior, &d);
        prop_assert_eq!(post.alpha(), prior.alpha() + d.successes() as f64);
        prop_assert_eq!(post.beta(), prior.beta() + d.failures() as f64);
        let expected = prior.concentration() + d.sample_size() as f64;
        prop_assert!((post.concentration() - expected).abs() <= 1e-9 * expected);
    }

    #[test]
    fn splitting_data_commutes(
        a in 1u32..50, b in 1u32..50,
        s1 in 0u64..500, f1 in 0u64..500, s2 in 0u64..500, f2 in 0u64..500,
    ) {
        let prior = BetaBelief::new(a as f64, b as f64).unwrap();
        prop_assume!(s1 + f1 > 0 && s2 + f2 > 0);
        let d1 = ObservedData::new(s1, s1 + f1).unwrap();
        let d2 = ObservedData::new(s2, s2 + f2).unwrap();
        let both = ObservedData::new(s1 + s2, s1 + f1 + s2 + f2).unwrap();
        let stepwise = posterior_update(&posterior_update(&prior, &d1), &d2);
        prop_assert_eq!(stepwise, posterior_update(&prior, &both));
    }

    #[test]
    fn flat_prior_gives_likelihood(d in data()) {
        prop_assert_eq!(posterior_update(&BetaBelief::uniform(), &d), likelihood_belief(&d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn fit_round_trip(belief in peaked(10.0..1e5)) {
        let target = hdi(&belief, 0.95).unwrap();
        let mode = belief.mode().unwrap();
        let elicited = ElicitedInterval::new(mode, target.lower, target.upper).unwrap();
        let fitted = fit_beta(&elicited).unwrap();
        let got = hdi(&fitted, 0.95).unwrap();
        prop_assert!((got.lower - target.lower).abs() <= 0.01, "{:?} vs {:?}", got, target);
        prop_assert!((got.upper - target.upper).abs() <= 0.01, "{:?} vs {:?}", got, target);
        // The mode is fixed before the concentration is searched.
        prop_assert!((fitted.mode().unwrap() - mode).abs() <= 1e-12);
    }

    #[test]
    fn hdi_no_wider_than_equal_tailed(belief in peaked(2.5..1e5)) {
        let h = hdi(&belief, 0.95).unwrap();
        let (a, b) = (belief.alpha(), belief.beta());
        let lo = oracle::beta_quantile(a, b, 0.025);
        let hi = oracle::beta_quantile(a, b, 0.975);
        prop_assert!(h.width() <= (hi - lo) + 1e-9);
        prop_assert!(h.width() <= equal_tailed(&belief, 0.95).width() + 1e-12);
        let mass = oracle::beta_mass(a, b, h.lower, h.upper);
        prop_assert!((mass - 0.95).abs() < 1e-6, "mass {}", mass);
    }

    #[test]
    fn posterior_density_integrates_to_one(belief in peaked(2.0..1e6)) {
        let area = trapezoid(&focused_polyline(&belief));
        prop_assert!((0.99..=1.01).contains(&area), "{:?}: {}", belief, area);
    }

    #[test]
    fn payload_matches_update(prior in peaked(2.0..1e4), d in data()) {
        let payload = make_posterior_vis(&prior, &d).unwrap();
        prop_assert_eq!(payload.posterior, posterior_update(&prior, &d));
        let h = hdi(&payload.posterior, 0.95).unwrap();
        prop_assert_eq!(payload.interval_95, (h.lower, h.upper));
        let area = trapezoid(&payload.density_points);
        prop_assert!((0.99..=1.01).contains(&area));
    }

    #[test]
    fn analogy_antisymmetry(k1 in 2.0f64..1e5, k2 in 2.0f64..1e5) {
        prop_assume!(k1 != k2);
        let t = Templates::english();
        let a = analogy_from_concentrations(k1, k2, t).unwrap();
        let b = analogy_from_concentrations(k2, k1, t).unwrap();
        prop_assert_eq!(a.multiplier, b.multiplier);
        prop_assert!(a.multiplier >= 1.0);
        prop_assert_ne!(a.reference, b.reference);
        let richer = if k1 > k2 { AnalogyReference::PriorRicher } else { AnalogyReference::DataRicher };
        prop_assert_eq!(a.reference, richer);
    }
}
