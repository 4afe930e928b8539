//! Cross-module integration: locality of learner state, checkpoint/restore,
//! observed-error accounting, and end-to-end determinism.

use pwm_ensemble::aggregators::{ExtendedPwmState, PwmState};
use pwm_ensemble::classifiers::{LocalClassifier, ThresholdClassifier};
use pwm_ensemble::config::ExperimentConfig;
use pwm_ensemble::environment::{run_learners, AggregatorKind, HarnessConfig, StreamEvent};
use pwm_ensemble::experiment::{build_events, run_experiment};
use pwm_ensemble::types::{BinaryLabel, PredictionVector};

fn threshold_factory() -> impl FnMut(usize) -> pwm_ensemble::Result<Box<dyn LocalClassifier>> {
    |_| Ok(Box::new(ThresholdClassifier::new(0)))
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml_str(text).unwrap()
}

fn two_learner_events() -> Vec<StreamEvent> {
    let cfg = config(
        r#"
        schema_version = 1
        [stream]
        kind = "s3"
        k = 2
        mu = 0.8
        [classifier]
        kind = "threshold"
        [environment]
        label_prob = 0.7
        [run]
        n = 400
        aggregators = ["epwm"]
        seeds = { count = 1, base = 0 }
    "#,
    );
    build_events(&cfg, None, 31).unwrap()
}

// A learner's weight trajectory depends only on the label releases it
// observes itself (with stateless classifiers, another learner's releases
// cannot leak in through the vote stream either).
#[test]
fn learner_state_is_local_to_its_own_label_releases() {
    let events = two_learner_events();
    let mut harness = HarnessConfig::new(AggregatorKind::ExtendedPwm);
    harness.record_trajectories = true;

    let base = run_learners(&events, &harness, &mut threshold_factory()).unwrap();

    // delete every label release of learner 2
    let mut censored = events.clone();
    for event in &mut censored {
        censored_learner(event, 1);
    }
    let censored_run = run_learners(&censored, &harness, &mut threshold_factory()).unwrap();

    let base_traj = base.trajectories.unwrap();
    let censored_traj = censored_run.trajectories.unwrap();
    for (slot, (a, b)) in base_traj.iter().zip(&censored_traj).enumerate() {
        assert_eq!(a[0], b[0], "learner 1 diverged at slot {}", slot + 1);
    }
    // learner 2 itself obviously changed: it never updates now
    assert!(censored_traj.last().unwrap()[1].iter().all(|&w| w == 0));
    assert_eq!(
        base.metrics.per_learner_mistakes[0],
        censored_run.metrics.per_learner_mistakes[0]
    );
}

fn censored_learner(event: &mut StreamEvent, learner: usize) {
    event.learners[learner].label_release = None;
}

// Observed errors are a subset of the real-time mistakes whenever labels
// arrive in their own slot.
#[test]
fn observed_errors_never_exceed_mistakes_without_delay() {
    let events = two_learner_events();
    let harness = HarnessConfig::new(AggregatorKind::ExtendedPwm);
    let outcome = run_learners(&events, &harness, &mut threshold_factory()).unwrap();
    for i in 0..2 {
        assert!(
            outcome.metrics.observed_errors[i] <= outcome.metrics.per_learner_mistakes[i],
            "learner {i}: observed {} > mistakes {}",
            outcome.metrics.observed_errors[i],
            outcome.metrics.per_learner_mistakes[i]
        );
    }
}

// The extended aggregator with missing labels degenerates to the plain one
// (pending entries for unreleased labels are pruned without effect).
#[test]
fn extended_equals_plain_under_missing_labels() {
    let events = two_learner_events();
    let mut factory = threshold_factory();
    let plain = run_learners(
        &events,
        &HarnessConfig::new(AggregatorKind::Pwm),
        &mut factory,
    )
    .unwrap();
    let extended = run_learners(
        &events,
        &HarnessConfig::new(AggregatorKind::ExtendedPwm),
        &mut factory,
    )
    .unwrap();
    assert_eq!(plain.metrics, extended.metrics);
}

// Restoring a mid-run snapshot reproduces the continuation exactly.
#[test]
fn snapshot_restore_resumes_identically() {
    let events = two_learner_events();
    let votes: Vec<(PredictionVector, BinaryLabel)> = events
        .iter()
        .map(|e| {
            let labels: Vec<BinaryLabel> = e
                .learners
                .iter()
                .map(|l| {
                    if l.features[0] >= 0.0 {
                        BinaryLabel::Plus
                    } else {
                        BinaryLabel::Minus
                    }
                })
                .collect();
            (PredictionVector::from_labels(&labels), e.label)
        })
        .collect();

    let mut original = PwmState::new(2);
    for (s, y) in votes.iter().take(200) {
        original.update(s, *y).unwrap();
    }
    let mut resumed = PwmState::restore(&original.snapshot()).unwrap();
    for (s, y) in votes.iter().skip(200) {
        assert_eq!(original.predict(s).unwrap(), resumed.predict(s).unwrap());
        original.update(s, *y).unwrap();
        resumed.update(s, *y).unwrap();
    }
    assert_eq!(original.weights(), resumed.weights());

    let mut extended = ExtendedPwmState::new(2);
    for (slot, (s, y)) in votes.iter().take(100).enumerate() {
        extended.predict_and_store(slot as u64, s.clone()).unwrap();
        if slot % 3 != 0 {
            extended.observe_label(slot as u64, *y).unwrap();
        }
    }
    let resumed = ExtendedPwmState::restore(&extended.snapshot()).unwrap();
    assert_eq!(extended, resumed);
}

// The whole experiment pipeline is deterministic: running the same config
// twice produces byte-identical result files.
#[test]
fn experiment_outputs_are_reproducible() {
    let cfg = config(
        r#"
        schema_version = 1
        [stream]
        kind = "s1"
        k = 3
        relevant = 2
        [classifier]
        kind = "logistic"
        [environment]
        max_delay = 5
        label_prob = 0.8
        [run]
        n = 150
        aggregators = ["epwm", "alone"]
        seeds = { count = 4, base = 11 }
    "#,
    );
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let report_a = run_experiment(&cfg, dir_a.path()).unwrap();
    let report_b = run_experiment(&cfg, dir_b.path()).unwrap();
    assert!(report_a.failures.is_empty());
    let runs_a = std::fs::read(report_a.runs_path.unwrap()).unwrap();
    let runs_b = std::fs::read(report_b.runs_path.unwrap()).unwrap();
    assert_eq!(runs_a, runs_b);
    let summary_a = std::fs::read(report_a.summary_path.unwrap()).unwrap();
    let summary_b = std::fs::read(report_b.summary_path.unwrap()).unwrap();
    assert_eq!(summary_a, summary_b);
}

// The synchronization index counts exactly the slots where some learner
// missed its instance.
#[test]
fn alpha_matches_realized_arrivals() {
    let cfg = config(
        r#"
        schema_version = 1
        [stream]
        kind = "s3"
        k = 3
        mu = 1.0
        [classifier]
        kind = "threshold"
        [environment]
        arrival_prob = 0.8
        [run]
        n = 500
        aggregators = ["epwm"]
        seeds = { count = 1, base = 0 }
    "#,
    );
    let events = build_events(&cfg, None, 5).unwrap();
    let outcome = run_learners(
        &events,
        &HarnessConfig::new(AggregatorKind::ExtendedPwm),
        &mut threshold_factory(),
    )
    .unwrap();
    let synchronized = events
        .iter()
        .filter(|e| e.learners.iter().all(|l| l.arrived))
        .count() as u64;
    assert_eq!(outcome.metrics.sync_slots, synchronized);
    assert_eq!(
        outcome.metrics.alpha,
        (500 - synchronized) as f64 / 500.0
    );
    assert!(outcome.metrics.alpha > 0.0);
}

// A harness-defined classifier type plugs in through the trait alone.
#[test]
fn custom_classifiers_plug_into_the_harness() {
    struct Contrarian;
    impl LocalClassifier for Contrarian {
        fn predict(
            &self,
            features: &[f64],
        ) -> pwm_ensemble::Result<pwm_ensemble::types::LocalPrediction> {
            Ok(pwm_ensemble::types::LocalPrediction::Label(
                if features[0] >= 0.0 {
                    BinaryLabel::Minus
                } else {
                    BinaryLabel::Plus
                },
            ))
        }
        fn learn(&mut self, _: &[f64], _: BinaryLabel) -> pwm_ensemble::Result<()> {
            Ok(())
        }
        fn snapshot(&self) -> Vec<f64> {
            vec![]
        }
        fn restore(&mut self, _: &[f64]) -> pwm_ensemble::Result<()> {
            Ok(())
        }
    }

    let cfg = config(
        r#"
        schema_version = 1
        [stream]
        kind = "s3"
        k = 2
        mu = 2.0
        [classifier]
        kind = "threshold"
        [run]
        n = 300
        aggregators = ["pwm"]
        seeds = { count = 1, base = 0 }
    "#,
    );
    let events = build_events(&cfg, None, 8).unwrap();
    let mut factory =
        |_: usize| Ok(Box::new(Contrarian) as Box<dyn LocalClassifier>);
    let outcome = run_learners(
        &events,
        &HarnessConfig::new(AggregatorKind::Pwm),
        &mut factory,
    )
    .unwrap();
    // an always-wrong classifier earns a negative weight and the ensemble
    // still learns the concept
    assert!(outcome.metrics.system_error < 0.2);
    assert!(outcome.metrics.best_classifier_error > 0.8);
}
