//! Trainable classifiers: a linear SVM (hinge loss, stochastic subgradient
//! descent) and a fixed-architecture feed-forward network, both accepting
//! random or human-seeded initial weights, plus confusion-matrix metrics and
//! checkpoint files.

mod mlp;
mod svm;

pub use mlp::{
    backprop_gradients, bce_loss, mlp_forward, mlp_init, mlp_init_with_hidden, mlp_train,
    train_in_place, Activation, ForwardTrace, Gradients, Layer, Mlp,
};
pub use svm::{svm_feature_importance, svm_predict, svm_train, LinearSvm};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::seed::SeedWeights;

/// Hidden layer widths of the reference network; the input width follows the
/// schema and the output is a single sigmoid neuron.
pub const DEFAULT_HIDDEN_LAYERS: [usize; 3] = [12, 10, 8];

/// How initial weights are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitMode {
    Random,
    Seeded(SeedWeights),
}

/// Shared training configuration for both model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// L2 coefficient; used by the SVM only.
    pub l2: f64,
    pub rng_seed: u64,
    pub init: InitMode,
    /// Relative jitter applied to seeded first-layer rows of the network.
    /// Set to 0 for exact seed replication (test hook).
    pub seed_jitter: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 50,
            learning_rate: 0.01,
            batch_size: 32,
            l2: 1e-3,
            rng_seed: 0,
            init: InitMode::Random,
            seed_jitter: 0.05,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::InvalidArgument("learning rate must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch size must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.seed_jitter) {
            return Err(Error::InvalidArgument(
                "seed jitter must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn seed_weights(&self) -> Option<&SeedWeights> {
        match &self.init {
            InitMode::Random => None,
            InitMode::Seeded(sw) => Some(sw),
        }
    }
}

/// Confusion counts at the 0.5 threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Metrics {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Metrics {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn accuracy(&self) -> f64 {
        (self.tp + self.tn) as f64 / self.total() as f64
    }

    /// F1 = 2TP / (2TP + FP + FN), with the 0/0 case defined as 0.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.tp + self.fp + self.fn_;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.tp as f64 / denom as f64
        }
    }
}

/// Anything that maps a feature vector to a hard 0/1 label.
pub trait Classifier {
    fn predict(&self, x: &[f64]) -> Result<u8>;
}

/// Confusion counts of a classifier over a test set.
pub fn evaluate(model: &impl Classifier, test: &Dataset) -> Result<Metrics> {
    if test.is_empty() {
        return Err(Error::InvalidArgument("test set is empty".into()));
    }
    let mut m = Metrics::default();
    for (x, y) in test.rows() {
        match (model.predict(x)?, y) {
            (1, 1) => m.tp += 1,
            (1, 0) => m.fp += 1,
            (0, 1) => m.fn_ += 1,
            _ => m.tn += 1,
        }
    }
    Ok(m)
}

/// On-disk model checkpoint: parameters plus the configuration that produced
/// them. JSON f64 serialization round-trips losslessly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Checkpoint {
    Svm { svm: LinearSvm, config: TrainConfig },
    Mlp { mlp: Mlp, config: TrainConfig },
}

impl Checkpoint {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}
