//! Linear SVM trained by stochastic subgradient descent on the L2-regularized
//! hinge loss. With a linear kernel the feature importance is simply the
//! weight vector.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::{Classifier, InitMode, TrainConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearSvm {
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }
}

impl Classifier for LinearSvm {
    fn predict(&self, x: &[f64]) -> Result<u8> {
        svm_predict(self, x)
    }
}

/// Initial weights: the seed vector verbatim, or uniform in
/// [-1/sqrt(F), 1/sqrt(F)]. Bias starts at 0.
fn initial_weights(f: usize, cfg: &TrainConfig, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    match &cfg.init {
        InitMode::Seeded(sw) => {
            if sw.feature_count() != f {
                return Err(Error::DimensionMismatch {
                    expected: f,
                    got: sw.feature_count(),
                });
            }
            Ok(sw.values.clone())
        }
        InitMode::Random => {
            let bound = 1.0 / (f as f64).sqrt();
            Ok((0..f).map(|_| rng.gen_range(-bound..=bound)).collect())
        }
    }
}

/// Minimize `λ/2 ||w||² + mean hinge(y (w·x + b))` by per-sample subgradient
/// steps with a seeded per-epoch shuffle. Deterministic per seed.
pub fn svm_train(data: &Dataset, cfg: &TrainConfig) -> Result<LinearSvm> {
    cfg.validate()?;
    if !data.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let f = data.schema().feature_count();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut weights = initial_weights(f, cfg, &mut rng)?;
    let mut bias = 0.0;

    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let (x, label) = &data.rows()[i];
            let y = if *label == 1 { 1.0 } else { -1.0 };
            let margin = y * (weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + bias);
            // subgradient of λ/2||w||² + hinge: λw alone when the margin holds
            for (w, v) in weights.iter_mut().zip(x) {
                let mut g = cfg.l2 * *w;
                if margin < 1.0 {
                    g -= y * v;
                }
                *w -= cfg.learning_rate * g;
            }
            if margin < 1.0 {
                bias += cfg.learning_rate * y;
            }
        }
        if weights.iter().any(|w| !w.is_finite()) || !bias.is_finite() {
            return Err(Error::Diverged { epoch });
        }
    }
    Ok(LinearSvm { weights, bias })
}

/// Label 1 iff `w·x + b >= 0`.
pub fn svm_predict(m: &LinearSvm, x: &[f64]) -> Result<u8> {
    Ok(if m.decision(x)? >= 0.0 { 1 } else { 0 })
}

/// For a linear kernel, importance is the weight vector verbatim.
pub fn svm_feature_importance(m: &LinearSvm) -> &[f64] {
    &m.weights
}
