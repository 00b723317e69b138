mod common;

use std::collections::HashSet;

use belief_core::record::read_records;
use belief_core::{fit_beta, Condition, ExclusionAnswer};
use belief_study::session::SESSION_TIMEOUT_MS;
use belief_study::{AssistancePayload, Step, StepKind, StudyConfig, StudyError, StudyService};
use common::{complete, service_with_clock, step_for};

#[test]
fn every_condition_exports_a_valid_record() {
    let (service, _) = service_with_clock(1);
    let mut seen = HashSet::new();
    for i in 0..24 {
        seen.insert(complete(&service, &format!("p{i:02}"), ExclusionAnswer::Between30And60));
    }
    assert_eq!(seen.len(), 6);
    let records = service.records(false).unwrap();
    assert_eq!(records.len(), 24);
    for r in &records {
        r.validate().unwrap();
        assert_eq!(r.prior.is_some(), r.condition.elicits_prior());
        assert_eq!(r.timestamps.assistance.is_some(), r.condition.has_assistance());
    }

    // Export, parse back, and refit: identical Betas.
    let csv = service.export_csv(false).unwrap();
    assert!(csv.starts_with("#schema=1\n"));
    let back = read_records(csv.as_bytes()).unwrap();
    assert_eq!(back.len(), records.len());
    for (a, b) in back.iter().zip(&records) {
        assert!((a.posterior.fitted.alpha() - b.posterior.fitted.alpha()).abs() <= 1e-9);
        assert!((a.posterior.fitted.beta() - b.posterior.fitted.beta()).abs() <= 1e-9);
        let refit = fit_beta(&a.posterior.interval).unwrap();
        assert!((refit.alpha() - b.posterior.fitted.alpha()).abs() <= 1e-9);
    }
}

#[test]
fn steps_must_follow_the_protocol() {
    let (service, _) = service_with_clock(2);
    let a = service.create_session("x").unwrap();
    let ok = step_for(StepKind::Intro, ExclusionAnswer::Between30And60);
    service.record_step("x", ok).unwrap();
    let posterior = step_for(StepKind::Posterior, ExclusionAnswer::Between30And60);
    let err = service.record_step("x", posterior).unwrap_err();
    assert!(matches!(err, StudyError::OrderViolation { .. }), "{err}");

    // Nothing rejected was stored.
    assert_eq!(service.session("x").unwrap().steps.len(), 1);
    assert_eq!(service.session("x").unwrap().next_step(), Some(a.steps[1]));

    assert!(matches!(service.create_session("x"), Err(StudyError::Duplicate(_))));
    assert!(matches!(
        service.record_step("nobody", Step::Intro {}),
        Err(StudyError::UnknownParticipant(_))
    ));
}

#[test]
fn prior_before_posterior_in_elicitation_conditions() {
    let (service, _) = service_with_clock(3);
    for i in 0..12 {
        let id = format!("e{i}");
        let a = service.create_session(&id).unwrap();
        if !a.condition.elicits_prior() {
            continue;
        }
        service.record_step(&id, Step::Intro {}).unwrap();
        let err = service
            .record_step(&id, step_for(StepKind::Posterior, ExclusionAnswer::Between30And60))
            .unwrap_err();
        assert!(matches!(err, StudyError::OrderViolation { expected: Some(StepKind::Prior), .. }));
    }
}

#[test]
fn malformed_payloads_are_rejected() {
    let (service, _) = service_with_clock(4);
    let a = service.create_session("m").unwrap();
    service.record_step("m", Step::Intro {}).unwrap();
    let bad = if a.steps[1] == StepKind::Prior {
        Step::Prior { point_estimate: 0.3, lower: 0.4, upper: 0.5 }
    } else {
        Step::Posterior { point_estimate: 1.3, lower: 0.4, upper: 0.5 }
    };
    if a.steps[1] == StepKind::Prior {
        assert!(matches!(service.record_step("m", bad), Err(StudyError::Belief(_))));
    }
}

#[test]
fn excluded_participants_are_flagged_and_filtered() {
    let (service, _) = service_with_clock(5);
    complete(&service, "keep", ExclusionAnswer::Between30And60);
    complete(&service, "drop", ExclusionAnswer::Above60);
    let csv = service.export_csv(false).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let all = read_records(service.export_csv(true).unwrap().as_bytes()).unwrap();
    assert_eq!(all.len(), 2);
    let dropped = all.iter().find(|r| r.participant_id == "drop").unwrap();
    assert!(dropped.excluded());
}

#[test]
fn empty_store_exports_header_only() {
    let (service, _) = service_with_clock(6);
    let csv = service.export_csv(false).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(read_records(csv.as_bytes()).unwrap().is_empty());
}

#[test]
fn incomplete_sessions_are_not_exported_and_time_out() {
    let (service, clock) = service_with_clock(7);
    service.create_session("slow").unwrap();
    service.record_step("slow", Step::Intro {}).unwrap();
    assert!(service.records(true).unwrap().is_empty());
    clock.advance(SESSION_TIMEOUT_MS + 1);
    let next = service.session("slow").unwrap().next_step().unwrap();
    let err = service.record_step("slow", step_for(next, ExclusionAnswer::Between30And60)).unwrap_err();
    assert!(matches!(err, StudyError::Expired(_)));
    assert!(service.records(true).unwrap().is_empty());
}

#[test]
fn assistance_payload_follows_condition() {
    let (service, _) = service_with_clock(8);
    for i in 0..24 {
        let id = format!("a{i}");
        let a = service.create_session(&id).unwrap();
        if !a.condition.has_assistance() {
            assert!(matches!(service.assistance(&id), Err(StudyError::NotAvailable(_))));
            continue;
        }
        assert!(service.assistance(&id).is_err(), "needs the prior first");
        service.record_step(&id, Step::Intro {}).unwrap();
        service.record_step(&id, step_for(StepKind::Prior, ExclusionAnswer::Between30And60)).unwrap();
        match (a.condition, service.assistance(&id).unwrap()) {
            (Condition::Analogy, AssistancePayload::Analogy(analogy)) => assert!(analogy.multiplier >= 1.0),
            (Condition::PosteriorVis, AssistancePayload::PosteriorVis(p)) => {
                let prior = service.session(&id).unwrap().prior().unwrap().unwrap().fitted;
                assert_eq!(p.posterior, belief_core::posterior_update(&prior, &a.dataset.observed()));
            }
            other => panic!("unexpected payload {other:?}"),
        }
    }
}

#[test]
fn stimulus_matches_condition() {
    let (service, _) = service_with_clock(9);
    for i in 0..24 {
        let id = format!("s{i}");
        let a = service.create_session(&id).unwrap();
        let spec = service.stimulus(&id).unwrap();
        let data = a.dataset.observed();
        assert_eq!((spec.successes, spec.sample_size), (data.successes(), data.sample_size()));
        assert_eq!(spec.likelihood_payload.is_some(), a.condition.shows_interval());
        assert_eq!(spec.point_payload.is_some(), !a.condition.shows_interval());
        if let Some(lik) = spec.likelihood_payload {
            let h = belief_core::hdi(&belief_core::likelihood_belief(&data), 0.95).unwrap();
            assert_eq!(lik.interval_95, (h.lower, h.upper));
        }
    }
}

#[test]
fn balance_holds_throughout() {
    let service = StudyService::in_memory(10);
    for i in 0..500 {
        service.create_session(&format!("b{i}")).unwrap();
        assert!(service.assignment_spread() <= 1);
    }
}

#[test]
fn log_replays_after_restart() {
    let dir = tempfile::tempdir().unwrap();
    let config = StudyConfig { seed: 11, data_dir: Some(dir.path().to_path_buf()) };
    let before = {
        let service = StudyService::open(&config).unwrap();
        for i in 0..10 {
            complete(&service, &format!("r{i}"), ExclusionAnswer::Between30And60);
        }
        service.create_session("half").unwrap();
        service.record_step("half", Step::Intro {}).unwrap();
        service.export_csv(true).unwrap()
    };
    let log_path = dir.path().join(belief_study::store::LOG_FILE);
    let log_before = std::fs::read_to_string(&log_path).unwrap();

    let service = StudyService::open(&config).unwrap();
    assert_eq!(service.export_csv(true).unwrap(), before);
    assert!(matches!(service.create_session("r3"), Err(StudyError::Duplicate(_))));
    // The half-finished session picks up where it stopped.
    let next = service.session("half").unwrap().next_step().unwrap();
    service.record_step("half", step_for(next, ExclusionAnswer::Between30And60)).unwrap();
    for i in 0..30 {
        service.create_session(&format!("n{i}")).unwrap();
        assert!(service.assignment_spread() <= 1);
    }
    // Append-only: earlier lines are untouched.
    let log_after = std::fs::read_to_string(&log_path).unwrap();
    assert!(log_after.starts_with(&log_before));
    assert!(log_after.len() > log_before.len());
}
