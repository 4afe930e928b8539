//! Deterministic replay of external data from CSV files.
//!
//! A schema file maps header columns to `(learner, feature index)` pairs and
//! names one label column. Ingestion is eager, so replaying the source twice
//! yields identical sequences.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::BinaryLabel;

use super::{SlotSample, StreamSource};

/// Accepted encodings of the label column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelEncoding {
    /// `0` maps to `-1`, `1` maps to `+1`.
    #[default]
    ZeroOne,
    /// Literal `-1` / `+1`.
    PlusMinus,
}

/// Feature columns of one learner, in feature-index order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LearnerColumns {
    pub columns: Vec<String>,
}

/// Column mapping for one CSV file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSchema {
    pub label_column: String,
    #[serde(default)]
    pub label_encoding: LabelEncoding,
    pub learners: Vec<LearnerColumns>,
}

impl CsvSchema {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
    }

    fn decode_label(&self, raw: &str, row: usize) -> Result<BinaryLabel> {
        let allowed: &[(&str, BinaryLabel)] = match self.label_encoding {
            LabelEncoding::ZeroOne => &[("0", BinaryLabel::Minus), ("1", BinaryLabel::Plus)],
            LabelEncoding::PlusMinus => &[
                ("-1", BinaryLabel::Minus),
                ("1", BinaryLabel::Plus),
                ("+1", BinaryLabel::Plus),
            ],
        };
        allowed
            .iter()
            .find(|(s, _)| *s == raw.trim())
            .map(|(_, l)| *l)
            .ok_or_else(|| {
                Error::Schema(format!(
                    "row {row}: label value {raw:?} not covered by the schema encoding"
                ))
            })
    }
}

/// A fully-loaded CSV stream.
#[derive(Debug)]
pub struct CsvSource {
    rows: Vec<(Vec<Vec<f64>>, BinaryLabel)>,
    cursor: usize,
    feature_dimension: usize,
}

impl CsvSource {
    pub fn open(path: &Path, schema: &CsvSchema) -> Result<Self> {
        if schema.learners.is_empty() {
            return Err(Error::Schema("schema maps no learners".into()));
        }
        let dim = schema.learners[0].columns.len();
        if dim == 0 || schema.learners.iter().any(|l| l.columns.len() != dim) {
            return Err(Error::Schema(
                "every learner needs the same, non-zero number of feature columns".into(),
            ));
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)?;
        let headers = reader
            .headers()
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?
            .clone();
        let find = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Schema(format!("column {name:?} missing from header")))
        };
        let label_idx = find(&schema.label_column)?;
        let mut learner_idx = Vec::new();
        for learner in &schema.learners {
            let mut idx = Vec::new();
            for column in &learner.columns {
                idx.push(find(column)?);
            }
            learner_idx.push(idx);
        }

        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let row = i + 2; // header is line 1
            let record = record.map_err(|e| Error::Parse {
                location: format!("row {row}"),
                message: e.to_string(),
            })?;
            let cell = |idx: usize| -> Result<&str> {
                record.get(idx).ok_or_else(|| Error::Parse {
                    location: format!("row {row}"),
                    message: format!("missing field {idx}"),
                })
            };
            let label = schema.decode_label(cell(label_idx)?, row)?;
            let mut features = Vec::with_capacity(learner_idx.len());
            for idx in &learner_idx {
                let mut values = Vec::with_capacity(idx.len());
                for &column in idx {
                    let raw = cell(column)?;
                    values.push(raw.parse::<f64>().map_err(|e| Error::Parse {
                        location: format!("row {row}, field {column}"),
                        message: format!("{e}: {raw:?}"),
                    })?);
                }
                features.push(values);
            }
            rows.push((features, label));
        }
        if rows.is_empty() {
            return Err(Error::Schema("file contains no data rows".into()));
        }
        Ok(CsvSource {
            rows,
            cursor: 0,
            feature_dimension: dim,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl StreamSource for CsvSource {
    fn learner_count(&self) -> usize {
        self.rows[0].0.len()
    }

    fn feature_dimension(&self) -> usize {
        self.feature_dimension
    }

    fn next_slot(&mut self) -> Result<SlotSample> {
        let (features, label) = self
            .rows
            .get(self.cursor)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "stream exhausted after {} rows",
                    self.rows.len()
                ))
            })?
            .clone();
        self.cursor += 1;
        Ok(SlotSample {
            features,
            label,
            concept: 0,
        })
    }
}
