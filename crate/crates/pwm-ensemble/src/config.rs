//! Declarative experiment configuration.
//!
//! One TOML file fully determines an experiment: stream family and
//! parameters, local classifiers, environment imperfections, aggregators,
//! seeds, and an optional one-variable sweep. Unknown keys are rejected so a
//! typo cannot silently fall back to a default.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::environment::AggregatorKind;
use crate::error::{Error, Result};
use crate::streams::EventLabelRule;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub stream: StreamConfig,
    pub classifier: ClassifierConfig,
    #[serde(default)]
    pub environment: EnvironmentConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub aggregator_params: AggregatorParams,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StreamConfig {
    /// Gradually rotating hyperplane over the first `relevant` learners.
    S1 {
        k: usize,
        relevant: usize,
        #[serde(default = "default_walk_std")]
        walk_std: f64,
    },
    /// Distributed event detection with Markov-modulated noise.
    S2 {
        k: usize,
        #[serde(default = "default_event_prob")]
        event_prob: f64,
        #[serde(default = "default_switch_prob")]
        switch_prob: f64,
        /// Gaussian noise parameter in the good state.
        #[serde(default = "default_noise_good")]
        noise_good: f64,
        /// Gaussian noise parameter in the bad state.
        #[serde(default = "default_noise_bad")]
        noise_bad: f64,
        /// Whether the two noise parameters are variances or standard
        /// deviations.
        #[serde(default)]
        noise_interpretation: NoiseInterpretation,
        #[serde(default)]
        label_rule: EventLabelRule,
        /// Negate the label from this slot on (single hand-placed drift).
        #[serde(default)]
        flip_label_at: Option<u64>,
    },
    /// Stable Gaussian source with class separation `mu`.
    S3 { k: usize, mu: f64 },
    /// External data replayed from a CSV file.
    Csv { path: PathBuf, schema: PathBuf },
}

fn default_walk_std() -> f64 {
    0.1
}
fn default_event_prob() -> f64 {
    0.05
}
fn default_switch_prob() -> f64 {
    0.01
}
fn default_noise_good() -> f64 {
    0.5
}
fn default_noise_bad() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseInterpretation {
    #[default]
    Variance,
    Std,
}

impl StreamConfig {
    pub fn learner_count(&self) -> Option<usize> {
        match self {
            StreamConfig::S1 { k, .. }
            | StreamConfig::S2 { k, .. }
            | StreamConfig::S3 { k, .. } => Some(*k),
            StreamConfig::Csv { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassifierConfig {
    /// Online logistic regression, one model per learner.
    Logistic {
        #[serde(default = "default_learning_rate")]
        learning_rate: f64,
    },
    /// Fixed threshold on one feature dimension.
    Threshold {
        #[serde(default)]
        threshold: f64,
        #[serde(default)]
        dimension_index: usize,
    },
}

fn default_learning_rate() -> f64 {
    0.1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    /// Uniform label delay bound `D` shared by all learners (0 = immediate).
    #[serde(default)]
    pub max_delay: u64,
    #[serde(default)]
    pub delay_distribution: DelayDistribution,
    /// Probability that a learner observes each label.
    #[serde(default = "default_prob_one")]
    pub label_prob: f64,
    /// Probability that a learner observes each instance.
    #[serde(default = "default_prob_one")]
    pub arrival_prob: f64,
    /// Confidence level used when reporting the missing-label bound.
    #[serde(default = "default_epsilon")]
    pub missing_bound_epsilon: f64,
}

fn default_prob_one() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.05
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        EnvironmentConfig {
            max_delay: 0,
            delay_distribution: DelayDistribution::default(),
            label_prob: 1.0,
            arrival_prob: 1.0,
            missing_bound_epsilon: default_epsilon(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayDistribution {
    #[default]
    Uniform,
    Deterministic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: u64,
    pub aggregators: Vec<String>,
    pub seeds: SeedSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    Range { count: u64, base: u64 },
    List { list: Vec<u64> },
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::Range { count, base } => (0..*count).map(|i| base + i).collect(),
            SeedSpec::List { list } => list.clone(),
        }
    }
}

/// Multiplicative baseline parameters; defaults follow the standard
/// comparison settings (beta 0.5, gamma 1.5, sharing 0.25).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregatorParams {
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_share_alpha")]
    pub share_alpha: f64,
}

fn default_beta() -> f64 {
    0.5
}
fn default_gamma() -> f64 {
    1.5
}
fn default_share_alpha() -> f64 {
    0.25
}

impl Default for AggregatorParams {
    fn default() -> Self {
        AggregatorParams {
            beta: default_beta(),
            gamma: default_gamma(),
            share_alpha: default_share_alpha(),
        }
    }
}

impl AggregatorParams {
    pub fn parse_aggregator(&self, name: &str) -> Result<AggregatorKind> {
        Ok(match name {
            "pwm" => AggregatorKind::Pwm,
            "pwm_no_bias" => AggregatorKind::PwmNoBias,
            "epwm" => AggregatorKind::ExtendedPwm,
            "wm" => AggregatorKind::Wm { beta: self.beta },
            "blum" => AggregatorKind::Blum {
                beta: self.beta,
                gamma: self.gamma,
            },
            "trackexp" => AggregatorKind::TrackExp {
                beta: self.beta,
                share_alpha: self.share_alpha,
            },
            "am" => AggregatorKind::AverageMajority,
            "alone" => AggregatorKind::Alone,
            other => {
                return Err(Error::Config(format!(
                    "run.aggregators: unknown aggregator {other:?} (expected one of \
                     pwm, pwm_no_bias, epwm, wm, blum, trackexp, am, alone)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// How many learners' local predictions are aggregated.
    AggregatedLearners,
    /// Uniform label delay bound.
    MaxDelay,
    /// Label observation probability.
    LabelProb,
    /// Instance arrival probability.
    ArrivalProb,
    /// Class separation of the Gaussian stream.
    Mu,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::AggregatedLearners => "aggregated_learners",
            SweepVariable::MaxDelay => "max_delay",
            SweepVariable::LabelProb => "label_prob",
            SweepVariable::ArrivalProb => "arrival_prob",
            SweepVariable::Mu => "mu",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default)]
    pub mode: OracleMode,
    #[serde(default = "default_weight_cap")]
    pub weight_cap: i64,
}

fn default_weight_cap() -> i64 {
    5
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::Auto,
            weight_cap: default_weight_cap(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Run the oracle whenever the aggregated learner count is at most 4.
    #[default]
    Auto,
    On,
    Off,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; falls back to `PWM_ENSEMBLE_OUT` and then the
    /// working directory.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Also export each run's event trace for replay.
    #[serde(default)]
    pub export_traces: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {CONFIG_SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        if self.run.n < 1 {
            return Err(Error::Config("run.n must be >= 1".into()));
        }
        if self.run.seeds.seeds().is_empty() {
            return Err(Error::Config("run.seeds must name at least one seed".into()));
        }
        if self.run.aggregators.is_empty() {
            return Err(Error::Config(
                "run.aggregators must name at least one aggregator".into(),
            ));
        }
        for name in &self.run.aggregators {
            self.aggregator_params.parse_aggregator(name)?;
        }
        match &self.stream {
            StreamConfig::S1 { k, relevant, walk_std } => {
                if *k < 1 || *relevant < 1 || relevant > k {
                    return Err(Error::Config(
                        "stream: need 1 <= relevant <= k".into(),
                    ));
                }
                if *walk_std < 0.0 {
                    return Err(Error::Config("stream.walk_std must be >= 0".into()));
                }
            }
            StreamConfig::S2 {
                k,
                event_prob,
                switch_prob,
                noise_good,
                noise_bad,
                ..
            } => {
                if *k < 1 {
                    return Err(Error::Config("stream.k must be >= 1".into()));
                }
                for (name, p) in [("event_prob", event_prob), ("switch_prob", switch_prob)] {
                    if !(0.0..=1.0).contains(p) {
                        return Err(Error::Config(format!(
                            "stream.{name} must lie in [0, 1]"
                        )));
                    }
                }
                if *noise_good < 0.0 || *noise_bad < 0.0 {
                    return Err(Error::Config("stream noise parameters must be >= 0".into()));
                }
            }
            StreamConfig::S3 { k, mu } => {
                if *k < 1 {
                    return Err(Error::Config("stream.k must be >= 1".into()));
                }
                if *mu < 0.0 {
                    return Err(Error::Config("stream.mu must be >= 0".into()));
                }
            }
            StreamConfig::Csv { .. } => {}
        }
        for (name, p) in [
            ("label_prob", self.environment.label_prob),
            ("arrival_prob", self.environment.arrival_prob),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Config(format!(
                    "environment.{name} must lie in (0, 1]"
                )));
            }
        }
        if !(self.environment.missing_bound_epsilon > 0.0
            && self.environment.missing_bound_epsilon < 1.0)
        {
            return Err(Error::Config(
                "environment.missing_bound_epsilon must lie in (0, 1)".into(),
            ));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.grid.is_empty() {
                return Err(Error::Config("sweep.grid must not be empty".into()));
            }
            match sweep.variable {
                SweepVariable::AggregatedLearners => {
                    let k = self.stream.learner_count().unwrap_or(usize::MAX);
                    for &v in &sweep.grid {
                        if v.fract() != 0.0 || v < 1.0 || v > k as f64 {
                            return Err(Error::Config(format!(
                                "sweep.grid: {v} is not a learner count in 1..={k}"
                            )));
                        }
                    }
                }
                SweepVariable::MaxDelay => {
                    if sweep.grid.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
                        return Err(Error::Config(
                            "sweep.grid: delays must be non-negative integers".into(),
                        ));
                    }
                }
                SweepVariable::LabelProb | SweepVariable::ArrivalProb => {
                    if sweep.grid.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
                        return Err(Error::Config(
                            "sweep.grid: probabilities must lie in (0, 1]".into(),
                        ));
                    }
                }
                SweepVariable::Mu => {
                    if !matches!(self.stream, StreamConfig::S3 { .. }) {
                        return Err(Error::Config(
                            "sweep over mu requires the s3 stream".into(),
                        ));
                    }
                    if sweep.grid.iter().any(|v| *v < 0.0) {
                        return Err(Error::Config("sweep.grid: mu must be >= 0".into()));
                    }
                }
            }
        }
        if self.oracle.weight_cap < 1 {
            return Err(Error::Config("oracle.weight_cap must be >= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        schema_version = 1

        [stream]
        kind = "s3"
        k = 4
        mu = 1.0

        [classifier]
        kind = "threshold"

        [run]
        n = 100
        aggregators = ["pwm", "alone"]
        seeds = { count = 3, base = 7 }
    "#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let config = ExperimentConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(config.run.seeds.seeds(), vec![7, 8, 9]);
        assert_eq!(config.environment.label_prob, 1.0);
        assert_eq!(config.oracle.weight_cap, 5);
        assert_eq!(config.aggregator_params.beta, 0.5);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = MINIMAL.replace("[run]", "typo_key = 1\n[run]");
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err();
        assert!(err.to_string().contains("typo_key"), "{err}");
    }

    #[test]
    fn empty_seed_list_is_rejected() {
        let bad = MINIMAL.replace("{ count = 3, base = 7 }", "{ list = [] }");
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err();
        assert!(err.to_string().contains("seed"), "{err}");
    }

    #[test]
    fn unknown_aggregator_is_rejected_with_candidates() {
        let bad = MINIMAL.replace("\"alone\"", "\"adaboost\"");
        let err = ExperimentConfig::from_toml_str(&bad).unwrap_err();
        assert!(err.to_string().contains("adaboost"), "{err}");
    }

    #[test]
    fn sweep_validation_catches_bad_grids() {
        let with_sweep = format!(
            "{MINIMAL}\n[sweep]\nvariable = \"aggregated_learners\"\ngrid = [1.0, 2.5]\n"
        );
        assert!(ExperimentConfig::from_toml_str(&with_sweep).is_err());
        let ok = format!(
            "{MINIMAL}\n[sweep]\nvariable = \"aggregated_learners\"\ngrid = [1.0, 4.0]\n"
        );
        assert!(ExperimentConfig::from_toml_str(&ok).is_ok());
    }

    #[test]
    fn mu_sweep_requires_the_gaussian_stream() {
        let s1 = MINIMAL.replace(
            "kind = \"s3\"\n        k = 4\n        mu = 1.0",
            "kind = \"s1\"\n        k = 4\n        relevant = 2",
        );
        let bad = format!("{s1}\n[sweep]\nvariable = \"mu\"\ngrid = [0.5]\n");
        assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }
}
