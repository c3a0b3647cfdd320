//! Tabular binary-classification data: CSV ingestion, deterministic splits,
//! class-skewed subsampling and feature standardization.
//!
//! Every operation that involves randomness takes an explicit 64-bit seed and
//! is a pure function of its inputs; repeated calls are byte-identical.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Names of the feature columns plus the binary label column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    feature_names: Vec<String>,
    label_name: String,
}

impl FeatureSchema {
    pub fn new(feature_names: Vec<String>, label_name: impl Into<String>) -> Result<Self> {
        let label_name = label_name.into();
        if feature_names.len() < 2 {
            return Err(Error::InvalidSchema(
                "at least two features are required".into(),
            ));
        }
        for (i, name) in feature_names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidSchema(format!("feature {i} has an empty name")));
            }
            if feature_names[..i].contains(name) {
                return Err(Error::InvalidSchema(format!("duplicate feature name {name:?}")));
            }
        }
        if label_name.is_empty() {
            return Err(Error::InvalidSchema("label name is empty".into()));
        }
        if feature_names.contains(&label_name) {
            return Err(Error::InvalidSchema(format!(
                "label {label_name:?} is also listed as a feature"
            )));
        }
        Ok(Self {
            feature_names,
            label_name,
        })
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|n| n == name)
    }
}

/// Labeled rows over a fixed schema. Labels are 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    schema: FeatureSchema,
    rows: Vec<(Vec<f64>, u8)>,
}

impl Dataset {
    pub fn new(schema: FeatureSchema, rows: Vec<(Vec<f64>, u8)>) -> Result<Self> {
        let f = schema.feature_count();
        for (i, (x, y)) in rows.iter().enumerate() {
            if x.len() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: x.len(),
                });
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::BadCell {
                    row: i,
                    column: "<feature>".into(),
                    value: "non-finite".into(),
                });
            }
            if *y > 1 {
                return Err(Error::BadLabel {
                    row: i,
                    value: y.to_string(),
                });
            }
        }
        Ok(Self { schema, rows })
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[(Vec<f64>, u8)] {
        &self.rows
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.rows[i].0
    }

    pub fn label(&self, i: usize) -> u8 {
        self.rows[i].1
    }

    pub fn positives(&self) -> usize {
        self.rows.iter().filter(|(_, y)| *y == 1).count()
    }

    pub fn has_both_classes(&self) -> bool {
        let p = self.positives();
        p > 0 && p < self.len()
    }

    fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

/// A request for a class-skewed subsample: `size` rows of which
/// `round(size * tp_rate)` carry the positive label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub size: usize,
    pub tp_rate: f64,
    pub rng_seed: u64,
}

impl SampleSpec {
    pub fn new(size: usize, tp_rate: f64, rng_seed: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("sample size must be positive".into()));
        }
        if !(tp_rate > 0.0 && tp_rate < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "tp_rate must lie in (0,1), got {tp_rate}"
            )));
        }
        let spec = Self {
            size,
            tp_rate,
            rng_seed,
        };
        if spec.positive_count() < 1 || spec.negative_count() < 1 {
            return Err(Error::InvalidArgument(format!(
                "size {size} with tp_rate {tp_rate} leaves one class empty"
            )));
        }
        Ok(spec)
    }

    /// Half-up rounding of `size * tp_rate`.
    pub fn positive_count(&self) -> usize {
        (self.size as f64 * self.tp_rate).round() as usize
    }

    pub fn negative_count(&self) -> usize {
        self.size - self.positive_count()
    }
}

/// Per-feature mean and standard deviation fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
}

/// Load a CSV file with a header row. Extra columns are ignored; missing
/// schema columns, unparsable cells and non-binary labels are reported with
/// their location.
pub fn load_csv(path: impl AsRef<Path>, schema: &FeatureSchema) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn { name: name.into() })
    };
    let feature_cols: Vec<usize> = schema
        .feature_names()
        .iter()
        .map(|n| find(n))
        .collect::<Result<_>>()?;
    let label_col = find(schema.label_name())?;

    let mut rows = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let mut x = Vec::with_capacity(feature_cols.len());
        for (&col, name) in feature_cols.iter().zip(schema.feature_names()) {
            let raw = record.get(col).unwrap_or("");
            let v: f64 = raw.trim().parse().map_err(|_| Error::BadCell {
                row: row_idx,
                column: name.clone(),
                value: raw.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::BadCell {
                    row: row_idx,
                    column: name.clone(),
                    value: raw.to_string(),
                });
            }
            x.push(v);
        }
        let raw = record.get(label_col).unwrap_or("");
        let label: f64 = raw.trim().parse().map_err(|_| Error::BadLabel {
            row: row_idx,
            value: raw.to_string(),
        })?;
        let y = if label == 0.0 {
            0
        } else if label == 1.0 {
            1
        } else {
            return Err(Error::BadLabel {
                row: row_idx,
                value: raw.to_string(),
            });
        };
        rows.push((x, y));
    }
    Dataset::new(schema.clone(), rows)
}

/// Write a dataset as CSV (features in schema order, then the label column).
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header: Vec<String> = ds.schema().feature_names().to_vec();
    header.push(ds.schema().label_name().to_string());
    writer.write_record(&header)?;
    for (x, y) in ds.rows() {
        let mut record: Vec<String> = x.iter().map(|v| format!("{v}")).collect();
        record.push(y.to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Deterministic shuffled split. The training side gets
/// `round(train_fraction * |ds|)` rows.
pub fn train_test_split(
    ds: &Dataset,
    train_fraction: f64,
    rng_seed: u64,
) -> Result<(Dataset, Dataset)> {
    if ds.is_empty() {
        return Err(Error::InvalidArgument("dataset is empty".into()));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train_fraction must lie in (0,1), got {train_fraction}"
        )));
    }
    let mut indices: Vec<usize> = (0..ds.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    indices.shuffle(&mut rng);
    let train_size = (train_fraction * ds.len() as f64).round() as usize;
    let (train_idx, test_idx) = indices.split_at(train_size.min(ds.len()));
    Ok((ds.subset(train_idx), ds.subset(test_idx)))
}

/// Draw exactly `spec.size` rows without replacement with exactly
/// `spec.positive_count()` positives.
pub fn biased_sample(ds: &Dataset, spec: &SampleSpec) -> Result<Dataset> {
    let want_pos = spec.positive_count();
    let want_neg = spec.negative_count();
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for i in 0..ds.len() {
        if ds.label(i) == 1 {
            pos.push(i);
        } else {
            neg.push(i);
        }
    }
    if pos.len() < want_pos {
        return Err(Error::InsufficientClass {
            label: 1,
            needed: want_pos,
            available: pos.len(),
        });
    }
    if neg.len() < want_neg {
        return Err(Error::InsufficientClass {
            label: 0,
            needed: want_neg,
            available: neg.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut chosen: Vec<usize> = pos[..want_pos]
        .iter()
        .chain(neg[..want_neg].iter())
        .copied()
        .collect();
    chosen.shuffle(&mut rng);
    Ok(ds.subset(&chosen))
}

/// Fit per-feature mean/sd on `ds` and return the standardized copy.
/// Constant features scale to all zeros with a stored sd of 1.
pub fn standardize(ds: &Dataset) -> Result<(Dataset, ScalerParams)> {
    if ds.is_empty() {
        return Err(Error::InvalidArgument("dataset is empty".into()));
    }
    let f = ds.schema().feature_count();
    let n = ds.len() as f64;
    let mut means = vec![0.0; f];
    for (x, _) in ds.rows() {
        for (m, v) in means.iter_mut().zip(x) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut sds = vec![0.0; f];
    for (x, _) in ds.rows() {
        for j in 0..f {
            let d = x[j] - means[j];
            sds[j] += d * d;
        }
    }
    for s in &mut sds {
        *s = (*s / n).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    let params = ScalerParams { means, sds };
    let scaled = apply_scaler(ds, &params)?;
    Ok((scaled, params))
}

/// Apply training statistics to another dataset.
pub fn apply_scaler(ds: &Dataset, params: &ScalerParams) -> Result<Dataset> {
    let f = ds.schema().feature_count();
    if params.means.len() != f || params.sds.len() != f {
        return Err(Error::DimensionMismatch {
            expected: f,
            got: params.means.len(),
        });
    }
    let rows = ds
        .rows()
        .iter()
        .map(|(x, y)| {
            let scaled = x
                .iter()
                .enumerate()
                .map(|(j, v)| (v - params.means[j]) / params.sds[j])
                .collect();
            (scaled, *y)
        })
        .collect();
    Ok(Dataset {
        schema: ds.schema().clone(),
        rows,
    })
}

/// Undo `apply_scaler`.
pub fn invert_scaler(ds: &Dataset, params: &ScalerParams) -> Result<Dataset> {
    let f = ds.schema().feature_count();
    if params.means.len() != f || params.sds.len() != f {
        return Err(Error::DimensionMismatch {
            expected: f,
            got: params.means.len(),
        });
    }
    let rows = ds
        .rows()
        .iter()
        .map(|(x, y)| {
            let raw = x
                .iter()
                .enumerate()
                .map(|(j, v)| v * params.sds[j] + params.means[j])
                .collect();
            (raw, *y)
        })
        .collect();
    Ok(Dataset {
        schema: ds.schema().clone(),
        rows,
    })
}
