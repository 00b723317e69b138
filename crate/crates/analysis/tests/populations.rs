use belief_analysis::aggregate::{aggregate_elicitation_analysis, MIN_ELICITED_PRIORS};
use belief_analysis::simulate::{simulate_population, Reporting, SimulationConfig, UpdateRule};
use belief_analysis::AnalysisError;
use belief_core::evaluation::{classify_location_means, evaluate_records, EvaluationOptions, LocationType};
use belief_core::{likelihood_belief, posterior_update, Condition, Dataset};

#[test]
fn bayesian_population_is_exactly_normative() {
    let records = simulate_population(&SimulationConfig::new(UpdateRule::Bayesian, 100, 1)).unwrap();
    let eval = evaluate_records(&records, &EvaluationOptions::default()).unwrap();
    assert_eq!(eval.rows.len(), 100);
    for row in &eval.rows {
        assert!(row.kld < 1e-9);
        assert_eq!(row.location_type, LocationType::NearNormative);
    }
}

#[test]
fn ignore_prior_population_matches_enumeration() {
    let records = simulate_population(&SimulationConfig::new(UpdateRule::IgnorePrior, 200, 2)).unwrap();
    let eval = evaluate_records(&records, &EvaluationOptions::default()).unwrap();
    let mut near = 0;
    for (row, record) in eval.rows.iter().zip(&records) {
        let prior = record.prior.unwrap().fitted;
        let data = record.observed();
        let lik = likelihood_belief(&data);
        let normative = posterior_update(&prior, &data);
        // Reporting the likelihood lands between the normative mean and
        // the data, or inside the window when the prior was weak.
        let expected = if (lik.mean() - normative.mean()).abs() <= 0.02 {
            LocationType::NearNormative
        } else {
            LocationType::OverweightData
        };
        assert_eq!(row.location_type, expected, "{}", row.participant_id);
        assert_eq!(
            row.location_type,
            classify_location_means(prior.mean(), lik.mean(), normative.mean(), lik.mean())
        );
        near += usize::from(expected == LocationType::NearNormative);
    }
    assert!(near > 0 && near < eval.rows.len());
}

fn small_sample(rule: UpdateRule, n: usize, seed: u64, conditions: &[Condition]) -> SimulationConfig {
    SimulationConfig {
        dataset: Some(Dataset::DementiaSmall),
        conditions: conditions.to_vec(),
        reporting: Reporting::Slider,
        ..SimulationConfig::new(rule, n, seed)
    }
}

#[test]
fn elicitation_lowers_log_kld_in_aggregate() {
    // Participants who broadly agree before seeing data, so the common
    // prior carries real information.
    let shared_view = |rule, seed, conditions: &[Condition]| SimulationConfig {
        prior_mode: (0.2, 0.3),
        prior_kappa: (100.0, 300.0),
        ..small_sample(rule, 80, seed, conditions)
    };
    let elicited = simulate_population(&shared_view(UpdateRule::Bayesian, 4, &Condition::ELICITATION)).unwrap();
    let others = [Condition::NoElicitPoint, Condition::NoElicitUncertainty];
    let non_elicited = simulate_population(&shared_view(UpdateRule::IgnorePrior, 5, &others)).unwrap();
    let data = Dataset::DementiaSmall.observed();
    let report = aggregate_elicitation_analysis(&elicited, &non_elicited, &data, 10_000, 7).unwrap();
    assert!(report.elicited.mean_log_kld < report.non_elicited.mean_log_kld, "{report:?}");
    assert!(report.difference.ci_lower > 0.0, "{report:?}");
    assert!(report.elicited.ci_lower <= report.elicited.mean_log_kld);
    assert!(report.elicited.mean_log_kld <= report.elicited.ci_upper);

    let again = aggregate_elicitation_analysis(&elicited, &non_elicited, &data, 10_000, 7).unwrap();
    assert_eq!(report, again);

    let few = &elicited[..MIN_ELICITED_PRIORS - 1];
    assert!(matches!(
        aggregate_elicitation_analysis(few, &non_elicited, &data, 100, 7),
        Err(AnalysisError::TooFewPriors { found: 29, .. })
    ));
    let other_data = Dataset::AbortionLarge.observed();
    assert!(aggregate_elicitation_analysis(&elicited, &non_elicited, &other_data, 100, 7).is_err());
}
