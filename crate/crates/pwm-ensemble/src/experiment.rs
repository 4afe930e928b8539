//! Seeded experiment execution: single runs, sweeps, result files.
//!
//! Each (sweep point, aggregator, seed) triple is one independent run. Runs
//! execute in parallel; records are gathered, sorted, and written as plain
//! CSV (one row per run plus one averaged summary row per sweep point and
//! aggregator).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregators::optimal_static_oracle;
use crate::bounds;
use crate::classifiers::{LocalClassifier, OnlineLogisticRegression, ThresholdClassifier};
use crate::config::{
    ClassifierConfig, DelayDistribution, ExperimentConfig, NoiseInterpretation, OracleMode,
    StreamConfig, SweepVariable,
};
use crate::environment::{
    run_learners, schedule, AggregatorKind, ArrivalModel, DelayModel, HarnessConfig,
    LabelObservationModel, RunOutcome, StreamEvent,
};
use crate::error::{Error, Result};
use crate::metrics::OracleSummary;
use crate::streams::{
    CsvSchema, CsvSource, EventDetectionSource, GaussianSource, RotatingHyperplaneSource,
    StreamSource,
};
use crate::types::{BinaryLabel, PredictionVector};

pub const RESULTS_SCHEMA_VERSION: u32 = 1;

/// Environment variable consulted for the default output directory.
pub const OUT_DIR_ENV: &str = "PWM_ENSEMBLE_OUT";

/// One row of `runs.csv`: everything measured in one run, plus every bound
/// that applies to its configuration. Empty cells mean "not applicable here"
/// (for example, the missing-label bound when every label is observed, or
/// oracle-based bounds when the oracle did not run).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub sweep_variable: String,
    pub sweep_value: Option<f64>,
    pub aggregator: String,
    pub seed: u64,
    pub n: u64,
    /// Learners generated by the stream.
    pub learners: usize,
    /// Learners whose votes the aggregator listens to.
    pub aggregated: usize,
    pub system_error: f64,
    pub learner1_error: f64,
    pub p_star: f64,
    pub v_star: usize,
    pub p_opt: Option<f64>,
    pub p_opt_exact: Option<bool>,
    pub bound_b1: Option<f64>,
    pub bound_b2: f64,
    pub bound_b: Option<f64>,
    pub bound_delayed: Option<f64>,
    pub bound_missing: Option<f64>,
    pub bound_async: Option<f64>,
    pub alpha: f64,
    pub sync_slots: u64,
    pub observed_errors_learner1: u64,
    pub concepts: usize,
}

/// One row of `summary.csv`: seed-averaged results for one sweep point and
/// aggregator, with standard errors across seeds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub schema_version: u32,
    pub sweep_variable: String,
    pub sweep_value: Option<f64>,
    pub aggregator: String,
    pub runs: usize,
    pub mean_system_error: f64,
    pub se_system_error: f64,
    pub mean_learner1_error: f64,
    pub se_learner1_error: f64,
    pub mean_p_star: f64,
    pub mean_bound_b: Option<f64>,
    pub mean_bound_delayed: Option<f64>,
    pub mean_bound_missing: Option<f64>,
    pub mean_bound_async: Option<f64>,
    pub mean_alpha: f64,
}

/// A finished experiment: all per-run records, the summaries, and any
/// (seed, error) pairs that failed.
#[derive(Debug)]
pub struct ExperimentReport {
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SummaryRecord>,
    pub failures: Vec<(u64, String)>,
    pub runs_path: Option<PathBuf>,
    pub summary_path: Option<PathBuf>,
}

/// Stream/environment parameters after applying one sweep value.
#[derive(Clone, Debug)]
struct ResolvedPoint {
    stream: StreamConfig,
    max_delay: u64,
    label_prob: f64,
    arrival_prob: f64,
    aggregate_first: Option<usize>,
}

fn resolve_point(config: &ExperimentConfig, sweep_value: Option<f64>) -> Result<ResolvedPoint> {
    let mut point = ResolvedPoint {
        stream: config.stream.clone(),
        max_delay: config.environment.max_delay,
        label_prob: config.environment.label_prob,
        arrival_prob: config.environment.arrival_prob,
        aggregate_first: None,
    };
    let (Some(sweep), Some(value)) = (&config.sweep, sweep_value) else {
        return Ok(point);
    };
    match sweep.variable {
        SweepVariable::AggregatedLearners => point.aggregate_first = Some(value as usize),
        SweepVariable::MaxDelay => point.max_delay = value as u64,
        SweepVariable::LabelProb => point.label_prob = value,
        SweepVariable::ArrivalProb => point.arrival_prob = value,
        SweepVariable::Mu => {
            if let StreamConfig::S3 { mu, .. } = &mut point.stream {
                *mu = value;
            }
        }
    }
    Ok(point)
}

fn build_source(stream: &StreamConfig, seed: u64) -> Result<Box<dyn StreamSource>> {
    Ok(match stream {
        StreamConfig::S1 { k, relevant, walk_std } => Box::new(RotatingHyperplaneSource::new(
            *k, *relevant, *walk_std, seed,
        )?),
        StreamConfig::S2 {
            k,
            event_prob,
            switch_prob,
            noise_good,
            noise_bad,
            noise_interpretation,
            label_rule,
            flip_label_at,
        } => {
            let to_std = |v: f64| match noise_interpretation {
                NoiseInterpretation::Variance => v.sqrt(),
                NoiseInterpretation::Std => v,
            };
            Box::new(EventDetectionSource::with_params(
                *k,
                *event_prob,
                *switch_prob,
                to_std(*noise_good),
                to_std(*noise_bad),
                *label_rule,
                *flip_label_at,
                seed,
            )?)
        }
        StreamConfig::S3 { k, mu } => Box::new(GaussianSource::new(*k, *mu, seed)?),
        StreamConfig::Csv { path, schema } => {
            let schema = CsvSchema::from_toml_file(schema)?;
            Box::new(CsvSource::open(path, &schema)?)
        }
    })
}

fn classifier_factory(
    config: &ClassifierConfig,
    dimension: usize,
) -> impl FnMut(usize) -> Result<Box<dyn LocalClassifier>> + '_ {
    move |_learner| {
        Ok(match config {
            ClassifierConfig::Logistic { learning_rate } => {
                Box::new(OnlineLogisticRegression::new(dimension, *learning_rate)?)
                    as Box<dyn LocalClassifier>
            }
            ClassifierConfig::Threshold {
                threshold,
                dimension_index,
            } => Box::new(ThresholdClassifier {
                threshold: *threshold,
                dimension_index: *dimension_index,
            }),
        })
    }
}

/// Build the scheduled event sequence for one (config, sweep value, seed).
pub fn build_events(
    config: &ExperimentConfig,
    sweep_value: Option<f64>,
    seed: u64,
) -> Result<Vec<StreamEvent>> {
    let point = resolve_point(config, sweep_value)?;
    let mut source = build_source(&point.stream, seed)?;
    let source = source.as_mut();
    let k = source.learner_count();
    let delays = if point.max_delay == 0 {
        DelayModel::None
    } else {
        match config.environment.delay_distribution {
            DelayDistribution::Uniform => DelayModel::uniform(k, point.max_delay),
            DelayDistribution::Deterministic => DelayModel::Deterministic {
                delays: vec![point.max_delay; k],
            },
        }
    };
    schedule(
        source,
        &delays,
        &LabelObservationModel {
            mu: point.label_prob,
        },
        &ArrivalModel::uniform(k, point.arrival_prob),
        config.run.n,
        seed,
    )
}

/// Execute one aggregator over pre-built events and assemble its record.
pub fn run_on_events(
    config: &ExperimentConfig,
    events: &[StreamEvent],
    aggregator: AggregatorKind,
    sweep_value: Option<f64>,
    seed: u64,
) -> Result<(RunRecord, RunOutcome)> {
    let point = resolve_point(config, sweep_value)?;
    let k = events
        .first()
        .map(|e| e.learners.len())
        .ok_or_else(|| Error::Config("no events".into()))?;
    let dimension = events[0].learners[0].features.len();
    let effective = point.aggregate_first.unwrap_or(k);

    let mut harness = HarnessConfig::new(aggregator);
    harness.aggregate_first = point.aggregate_first;
    harness.max_delays = vec![point.max_delay; k];
    let mut factory = classifier_factory(&config.classifier, dimension);
    let mut outcome = run_learners(events, &harness, &mut factory)?;

    // classifier statistics over the aggregated prefix
    let effective_trace: Vec<(PredictionVector, BinaryLabel)> = outcome
        .vote_trace
        .iter()
        .map(|(s, y)| (s.take_first(effective), *y))
        .collect();
    let (_, p_star, v_star) = crate::metrics::classifier_error_rates(&effective_trace)?;

    let n = events.len() as u64;
    let run_oracle = match config.oracle.mode {
        OracleMode::On => true,
        OracleMode::Off => false,
        OracleMode::Auto => effective <= 4,
    };
    let oracle = if run_oracle {
        let result = optimal_static_oracle(&effective_trace, config.oracle.weight_cap)?;
        Some(OracleSummary::new(&result, n))
    } else {
        None
    };
    outcome.metrics.oracle = oracle.clone();
    let bound_b2 = bounds::bound_b2(effective, n, p_star, v_star)?;
    let (bound_b1, bound_b) = match &oracle {
        Some(o) => (
            Some(bounds::bound_b1(effective, n, o.error)?),
            Some(bounds::bound_b(effective, n, o.error, p_star, v_star)?),
        ),
        None => (None, None),
    };
    let bound_delayed = match (bound_b, point.max_delay) {
        (Some(b), d) if d > 0 => Some(bounds::bound_delayed(b, &vec![d; k], n, k)?),
        _ => None,
    };
    let bound_missing = match bound_b {
        Some(b) if point.label_prob < 1.0 => bounds::bound_missing(
            b,
            point.label_prob,
            config.environment.missing_bound_epsilon,
            outcome.metrics.observed_errors[0],
        )
        .ok(),
        _ => None,
    };
    let bound_async = match bound_b {
        Some(b) if point.arrival_prob < 1.0 => {
            Some(bounds::bound_async(b, outcome.metrics.alpha)?)
        }
        _ => None,
    };

    let record = RunRecord {
        schema_version: RESULTS_SCHEMA_VERSION,
        sweep_variable: config
            .sweep
            .as_ref()
            .map(|s| s.variable.name().to_string())
            .unwrap_or_else(|| "none".into()),
        sweep_value,
        aggregator: aggregator.name().into(),
        seed,
        n,
        learners: k,
        aggregated: effective,
        system_error: outcome.metrics.system_error,
        learner1_error: outcome.metrics.per_learner_error[0],
        p_star,
        v_star,
        p_opt: oracle.as_ref().map(|o| o.error),
        p_opt_exact: oracle.as_ref().map(|o| o.exact),
        bound_b1,
        bound_b2,
        bound_b,
        bound_delayed,
        bound_missing,
        bound_async,
        alpha: outcome.metrics.alpha,
        sync_slots: outcome.metrics.sync_slots,
        observed_errors_learner1: outcome.metrics.observed_errors[0],
        concepts: outcome.metrics.per_concept.len(),
    };
    Ok((record, outcome))
}

/// Convenience wrapper: build events and run one aggregator.
pub fn single_run(
    config: &ExperimentConfig,
    aggregator: AggregatorKind,
    sweep_value: Option<f64>,
    seed: u64,
) -> Result<(RunRecord, RunOutcome)> {
    let events = build_events(config, sweep_value, seed)?;
    run_on_events(config, &events, aggregator, sweep_value, seed)
}

/// Resolve the output directory: explicit argument, then config, then the
/// `PWM_ENSEMBLE_OUT` environment variable, then the working directory.
pub fn resolve_out_dir(config: &ExperimentConfig, cli_dir: Option<&Path>) -> PathBuf {
    if let Some(dir) = cli_dir {
        return dir.to_path_buf();
    }
    if let Some(dir) = &config.output.dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from(".")
}

/// Run the whole experiment described by a config: every sweep point,
/// aggregator, and seed. Writes `runs.csv` and `summary.csv` under `out_dir`
/// (plus one trace file per seed and sweep point when trace export is on).
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentReport> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;

    let sweep_values: Vec<Option<f64>> = match &config.sweep {
        Some(sweep) => sweep.grid.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let aggregators: Vec<AggregatorKind> = config
        .run
        .aggregators
        .iter()
        .map(|name| config.aggregator_params.parse_aggregator(name))
        .collect::<Result<_>>()?;
    let seeds = config.run.seeds.seeds();

    // one event build per (sweep point, seed), shared by every aggregator
    let jobs: Vec<(Option<f64>, u64)> = sweep_values
        .iter()
        .flat_map(|&v| seeds.iter().map(move |&s| (v, s)))
        .collect();

    let results: Vec<std::result::Result<Vec<RunRecord>, (u64, String)>> = jobs
        .par_iter()
        .map(|&(sweep_value, seed)| {
            let run = || -> Result<Vec<RunRecord>> {
                let events = build_events(config, sweep_value, seed)?;
                if config.output.export_traces {
                    let tag = match sweep_value {
                        Some(v) => format!("sweep{v}-seed{seed}"),
                        None => format!("seed{seed}"),
                    };
                    crate::trace::export_trace(&out_dir.join(format!("trace-{tag}.jsonl")), &events)?;
                }
                aggregators
                    .iter()
                    .map(|&aggregator| {
                        run_on_events(config, &events, aggregator, sweep_value, seed)
                            .map(|(record, _)| record)
                    })
                    .collect()
            };
            run().map_err(|e| (seed, e.to_string()))
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for result in results {
        match result {
            Ok(mut rs) => records.append(&mut rs),
            Err(f) => failures.push(f),
        }
    }
    records.sort_by(|a, b| {
        a.sweep_value
            .partial_cmp(&b.sweep_value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.aggregator.cmp(&b.aggregator))
            .then_with(|| a.seed.cmp(&b.seed))
    });
    let summaries = summarize(&records);

    let runs_path = out_dir.join("runs.csv");
    let summary_path = out_dir.join("summary.csv");
    write_csv(&runs_path, &records)?;
    write_csv(&summary_path, &summaries)?;

    Ok(ExperimentReport {
        records,
        summaries,
        failures,
        runs_path: Some(runs_path),
        summary_path: Some(summary_path),
    })
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn mean_opt(values: &[Option<f64>]) -> Option<f64> {
    let present: Vec<f64> = values.iter().filter_map(|v| *v).collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

/// Seed-averaged summaries, one per (sweep point, aggregator).
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRecord> {
    let mut groups: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
    for record in records {
        let key = (
            record
                .sweep_value
                .map(|v| format!("{v:.6}"))
                .unwrap_or_default(),
            record.aggregator.clone(),
        );
        groups.entry(key).or_default().push(record);
    }
    groups
        .into_values()
        .map(|group| {
            let system: Vec<f64> = group.iter().map(|r| r.system_error).collect();
            let learner1: Vec<f64> = group.iter().map(|r| r.learner1_error).collect();
            let (mean_system_error, se_system_error) = mean_se(&system);
            let (mean_learner1_error, se_learner1_error) = mean_se(&learner1);
            SummaryRecord {
                schema_version: RESULTS_SCHEMA_VERSION,
                sweep_variable: group[0].sweep_variable.clone(),
                sweep_value: group[0].sweep_value,
                aggregator: group[0].aggregator.clone(),
                runs: group.len(),
                mean_system_error,
                se_system_error,
                mean_learner1_error,
                se_learner1_error,
                mean_p_star: group.iter().map(|r| r.p_star).sum::<f64>() / group.len() as f64,
                mean_bound_b: mean_opt(&group.iter().map(|r| r.bound_b).collect::<Vec<_>>()),
                mean_bound_delayed: mean_opt(
                    &group.iter().map(|r| r.bound_delayed).collect::<Vec<_>>(),
                ),
                mean_bound_missing: mean_opt(
                    &group.iter().map(|r| r.bound_missing).collect::<Vec<_>>(),
                ),
                mean_bound_async: mean_opt(
                    &group.iter().map(|r| r.bound_async).collect::<Vec<_>>(),
                ),
                mean_alpha: group.iter().map(|r| r.alpha).sum::<f64>() / group.len() as f64,
            }
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Parse {
                location: path.display().to_string(),
                message: e.to_string(),
            })?;
    }
    writer.flush()?;
    Ok(())
}

/// Re-run a recorded event trace under a config's first aggregator and
/// return fresh metrics. Replaying a run's own trace reproduces its metrics
/// exactly; replaying under a different aggregator yields a comparable run
/// over identical events.
pub fn replay(
    trace_path: &Path,
    config: &ExperimentConfig,
) -> Result<(RunRecord, RunOutcome)> {
    let events = crate::trace::import_trace(trace_path)?;
    let aggregator = config
        .aggregator_params
        .parse_aggregator(&config.run.aggregators[0])?;
    if events.len() as u64 != config.run.n {
        return Err(Error::Config(format!(
            "trace holds {} slots but the config expects {}",
            events.len(),
            config.run.n
        )));
    }
    run_on_events(config, &events, aggregator, None, 0)
}
