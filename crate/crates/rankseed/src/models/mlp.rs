//! Feed-forward network with rectifier hidden layers and a single sigmoid
//! output neuron, trained on binary cross-entropy by mini-batch SGD.
//!
//! The reference architecture is (F_in, 12, 10, 8, 1); arbitrary layer chains
//! are supported for tests and reduced hand-checked nets. The rectifier
//! derivative at exactly 0 is defined as 0.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::{Classifier, InitMode, TrainConfig, DEFAULT_HIDDEN_LAYERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Sigmoid,
    /// Pass-through, for linear test hooks.
    Identity,
}

impl Activation {
    pub fn apply(&self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => sigmoid(z),
            Activation::Identity => z,
        }
    }

    /// Derivative at pre-activation `z` with post-activation `a` available.
    pub fn derivative(&self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => a * (1.0 - a),
            Activation::Identity => 1.0,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// One dense layer; weights are row-major `out_dim × in_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
    pub activation: Activation,
}

impl Layer {
    pub fn new(in_dim: usize, out_dim: usize, activation: Activation) -> Self {
        Self {
            weights: vec![0.0; in_dim * out_dim],
            bias: vec![0.0; out_dim],
            in_dim,
            out_dim,
            activation,
        }
    }

    pub fn weight(&self, out: usize, inp: usize) -> f64 {
        self.weights[out * self.in_dim + inp]
    }

    pub fn weight_mut(&mut self, out: usize, inp: usize) -> &mut f64 {
        &mut self.weights[out * self.in_dim + inp]
    }

    fn affine(&self, input: &[f64]) -> Vec<f64> {
        let mut out = self.bias.clone();
        for o in 0..self.out_dim {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            out[o] += row.iter().zip(input).map(|(w, v)| w * v).sum::<f64>();
        }
        out
    }

    /// Propagate a tangent vector through the affine map (no activation).
    fn affine_tangent(&self, tangent: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.out_dim];
        for o in 0..self.out_dim {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            out[o] = row.iter().zip(tangent).map(|(w, v)| w * v).sum();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    layers: Vec<Layer>,
}

/// Per-layer pre- and post-activations of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    pub input: Vec<f64>,
    pub pre: Vec<Vec<f64>>,
    pub post: Vec<Vec<f64>>,
}

impl Mlp {
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidArgument("network needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim != pair[1].in_dim {
                return Err(Error::DimensionMismatch {
                    expected: pair[0].out_dim,
                    got: pair[1].in_dim,
                });
            }
        }
        if layers.last().unwrap().out_dim != 1 {
            return Err(Error::InvalidArgument("output layer must have one neuron".into()));
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim
    }

    /// Number of hidden layers (all but the output layer).
    pub fn hidden_layer_count(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    pub fn parameters_finite(&self) -> bool {
        self.layers.iter().all(|l| {
            l.weights.iter().all(|w| w.is_finite()) && l.bias.iter().all(|b| b.is_finite())
        })
    }

    pub fn forward_trace(&self, x: &[f64]) -> Result<ForwardTrace> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite input".into()));
        }
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post = Vec::with_capacity(self.layers.len());
        let mut current = x.to_vec();
        for layer in &self.layers {
            let z = layer.affine(&current);
            let a: Vec<f64> = z.iter().map(|&v| layer.activation.apply(v)).collect();
            pre.push(z);
            current = a.clone();
            post.push(a);
        }
        Ok(ForwardTrace {
            input: x.to_vec(),
            pre,
            post,
        })
    }

    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        Ok(self.forward_trace(x)?.post.last().unwrap()[0])
    }

    /// Gradient of the scalar output with respect to every layer's
    /// post-activation; index L of the result pairs with `trace.post[L]`.
    pub fn output_grad_wrt_layers(&self, trace: &ForwardTrace) -> Vec<Vec<f64>> {
        let n_layers = self.layers.len();
        let mut grads = vec![Vec::new(); n_layers];
        // d output / d post of last layer = 1
        grads[n_layers - 1] = vec![1.0];
        for l in (0..n_layers - 1).rev() {
            let upper = &self.layers[l + 1];
            // delta through upper layer: grad wrt its pre-activation
            let upper_grad = &grads[l + 1];
            let mut delta = vec![0.0; upper.out_dim];
            for o in 0..upper.out_dim {
                delta[o] = upper_grad[o]
                    * upper
                        .activation
                        .derivative(trace.pre[l + 1][o], trace.post[l + 1][o]);
            }
            let mut g = vec![0.0; upper.in_dim];
            for o in 0..upper.out_dim {
                let row = &upper.weights[o * upper.in_dim..(o + 1) * upper.in_dim];
                for (gi, w) in g.iter_mut().zip(row) {
                    *gi += delta[o] * w;
                }
            }
            grads[l] = g;
        }
        grads
    }

    /// Gradient of the scalar output with respect to the input vector.
    pub fn output_input_gradient(&self, trace: &ForwardTrace) -> Vec<f64> {
        let grads = self.output_grad_wrt_layers(trace);
        let first = &self.layers[0];
        let mut delta = vec![0.0; first.out_dim];
        for o in 0..first.out_dim {
            delta[o] =
                grads[0][o] * first.activation.derivative(trace.pre[0][o], trace.post[0][o]);
        }
        let mut g = vec![0.0; first.in_dim];
        for o in 0..first.out_dim {
            let row = &first.weights[o * first.in_dim..(o + 1) * first.in_dim];
            for (gi, w) in g.iter_mut().zip(row) {
                *gi += delta[o] * w;
            }
        }
        g
    }

    /// Directional derivatives of every layer's post-activation along the
    /// input direction `dx` (forward-mode pass reusing `trace`).
    pub fn layer_tangents(&self, trace: &ForwardTrace, dx: &[f64]) -> Vec<Vec<f64>> {
        let mut tangents = Vec::with_capacity(self.layers.len());
        let mut current = dx.to_vec();
        for (l, layer) in self.layers.iter().enumerate() {
            let mut t = layer.affine_tangent(&current);
            for o in 0..layer.out_dim {
                t[o] *= layer.activation.derivative(trace.pre[l][o], trace.post[l][o]);
            }
            current = t.clone();
            tangents.push(t);
        }
        tangents
    }
}

impl Classifier for Mlp {
    fn predict(&self, x: &[f64]) -> Result<u8> {
        Ok(if self.forward(x)? >= 0.5 { 1 } else { 0 })
    }
}

/// Per-layer (weight, bias) gradients, same shapes as the model parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub layers: Vec<(Vec<f64>, Vec<f64>)>,
}

/// Exact analytic gradients of the mean binary cross-entropy over a batch.
/// Targets are real-valued so that output-equals-target stationarity can be
/// exercised directly.
pub fn backprop_gradients(m: &Mlp, inputs: &[Vec<f64>], targets: &[f64]) -> Result<Gradients> {
    if inputs.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    if inputs.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            got: targets.len(),
        });
    }
    let n = inputs.len() as f64;
    let mut grads = Gradients {
        layers: m
            .layers()
            .iter()
            .map(|l| (vec![0.0; l.weights.len()], vec![0.0; l.bias.len()]))
            .collect(),
    };
    for (x, &y) in inputs.iter().zip(targets) {
        let trace = m.forward_trace(x)?;
        let n_layers = m.layers().len();
        let p = trace.post[n_layers - 1][0];
        // delta = dL/d(pre-activation), starting at the output layer
        let out_layer = &m.layers()[n_layers - 1];
        let mut delta = match out_layer.activation {
            // sigmoid + BCE collapses to p - y
            Activation::Sigmoid => vec![(p - y) / n],
            _ => {
                let p_c = p.clamp(1e-12, 1.0 - 1e-12);
                let dl_dp = (-y / p_c + (1.0 - y) / (1.0 - p_c)) / n;
                vec![
                    dl_dp
                        * out_layer.activation.derivative(
                            trace.pre[n_layers - 1][0],
                            trace.post[n_layers - 1][0],
                        ),
                ]
            }
        };
        for l in (0..n_layers).rev() {
            let layer = &m.layers()[l];
            let below: &[f64] = if l == 0 { &trace.input } else { &trace.post[l - 1] };
            let (dw, db) = &mut grads.layers[l];
            for o in 0..layer.out_dim {
                db[o] += delta[o];
                let row = &mut dw[o * layer.in_dim..(o + 1) * layer.in_dim];
                for (g, v) in row.iter_mut().zip(below) {
                    *g += delta[o] * v;
                }
            }
            if l > 0 {
                let lower = &m.layers()[l - 1];
                let mut next_delta = vec![0.0; layer.in_dim];
                for o in 0..layer.out_dim {
                    let row = &layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (nd, w) in next_delta.iter_mut().zip(row) {
                        *nd += delta[o] * w;
                    }
                }
                for (i, nd) in next_delta.iter_mut().enumerate() {
                    *nd *= lower
                        .activation
                        .derivative(trace.pre[l - 1][i], trace.post[l - 1][i]);
                }
                delta = next_delta;
            }
        }
    }
    Ok(grads)
}

/// Build the network for `input_dim` features with the given hidden widths.
///
/// Random mode draws every weight uniformly from ±1/sqrt(fan_in) with zero
/// biases. Seeded mode sets first-layer weight (j, i) to
/// `seed[i] * (1 + ε_ji)` with ε uniform in ±`cfg.seed_jitter` and initializes
/// the remaining layers in random mode.
pub fn mlp_init_with_hidden(
    cfg: &TrainConfig,
    input_dim: usize,
    hidden: &[usize],
) -> Result<Mlp> {
    cfg.validate()?;
    let mut sizes = vec![input_dim];
    sizes.extend_from_slice(hidden);
    sizes.push(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut layers = Vec::new();
    for w in sizes.windows(2) {
        let (in_dim, out_dim) = (w[0], w[1]);
        let activation = if layers.len() == sizes.len() - 2 {
            Activation::Sigmoid
        } else {
            Activation::Relu
        };
        let mut layer = Layer::new(in_dim, out_dim, activation);
        let bound = 1.0 / (in_dim as f64).sqrt();
        for v in &mut layer.weights {
            *v = rng.gen_range(-bound..=bound);
        }
        layers.push(layer);
    }
    if let InitMode::Seeded(sw) = &cfg.init {
        if sw.feature_count() != input_dim {
            return Err(Error::DimensionMismatch {
                expected: input_dim,
                got: sw.feature_count(),
            });
        }
        let first = &mut layers[0];
        for o in 0..first.out_dim {
            for i in 0..first.in_dim {
                let eps = if cfg.seed_jitter > 0.0 {
                    rng.gen_range(-cfg.seed_jitter..=cfg.seed_jitter)
                } else {
                    0.0
                };
                *first.weight_mut(o, i) = sw.values[i] * (1.0 + eps);
            }
        }
    }
    Mlp::from_layers(layers)
}

/// Reference architecture: hidden widths (12, 10, 8).
pub fn mlp_init(cfg: &TrainConfig, input_dim: usize) -> Result<Mlp> {
    mlp_init_with_hidden(cfg, input_dim, &DEFAULT_HIDDEN_LAYERS)
}

/// Mini-batch SGD on mean binary cross-entropy with a seeded per-epoch
/// shuffle. Deterministic per seed; any non-finite parameter aborts.
pub fn mlp_train(data: &Dataset, cfg: &TrainConfig) -> Result<Mlp> {
    cfg.validate()?;
    if !data.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let mut model = mlp_init(cfg, data.schema().feature_count())?;
    train_in_place(&mut model, data, cfg)?;
    Ok(model)
}

/// Continue training an existing model (used by tests with hand-built nets).
pub fn train_in_place(model: &mut Mlp, data: &Dataset, cfg: &TrainConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed.wrapping_add(0x9E37_79B9_7F4A_7C15));
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            let inputs: Vec<Vec<f64>> = chunk.iter().map(|&i| data.features(i).to_vec()).collect();
            let targets: Vec<f64> = chunk.iter().map(|&i| data.label(i) as f64).collect();
            let grads = backprop_gradients(model, &inputs, &targets)?;
            for (layer, (dw, db)) in model.layers_mut().iter_mut().zip(&grads.layers) {
                for (w, g) in layer.weights.iter_mut().zip(dw) {
                    *w -= cfg.learning_rate * g;
                }
                for (b, g) in layer.bias.iter_mut().zip(db) {
                    *b -= cfg.learning_rate * g;
                }
            }
        }
        if !model.parameters_finite() {
            return Err(Error::Diverged { epoch });
        }
    }
    Ok(())
}

/// Probability that `x` belongs to the positive class.
pub fn mlp_forward(m: &Mlp, x: &[f64]) -> Result<f64> {
    m.forward(x)
}

/// Mean binary cross-entropy of the model on a dataset.
pub fn bce_loss(m: &Mlp, data: &Dataset) -> Result<f64> {
    let mut total = 0.0;
    for (x, y) in data.rows() {
        let p = m.forward(x)?.clamp(1e-12, 1.0 - 1e-12);
        let y = *y as f64;
        total -= y * p.ln() + (1.0 - y) * (1.0 - p).ln();
    }
    Ok(total / data.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, FeatureSchema};
    use crate::rank::AggregationMethod;
    use crate::seed::SeedWeights;

    fn seed(values: Vec<f64>) -> SeedWeights {
        let names = (0..values.len()).map(|i| format!("f{i}")).collect();
        SeedWeights {
            feature_names: names,
            values,
            provenance: AggregationMethod::Mc4,
            degenerate: false,
        }
    }

    fn toy_2d() -> Dataset {
        // linearly separable blobs
        let schema = FeatureSchema::new(vec!["a".into(), "b".into()], "y").unwrap();
        let mut rows = Vec::new();
        for i in 0..20 {
            let t = i as f64 / 10.0;
            rows.push((vec![1.0 + 0.1 * t, 1.0 - 0.05 * t], 1));
            rows.push((vec![-1.0 - 0.1 * t, -1.0 + 0.05 * t], 0));
        }
        Dataset::new(schema, rows).unwrap()
    }

    #[test]
    fn forward_zero_parameters_gives_half() {
        let m = Mlp::from_layers(vec![
            Layer::new(3, 4, Activation::Relu),
            Layer::new(4, 1, Activation::Sigmoid),
        ])
        .unwrap();
        assert_eq!(m.forward(&[1.0, -2.0, 3.0]).unwrap(), 0.5);
    }

    #[test]
    fn forward_hand_computed_reduced_net() {
        // (1, 2, 1): hidden ReLU weights (2, -1), biases (0.5, 1), output
        // sigmoid weights (1, 2), bias -0.25
        let mut hidden = Layer::new(1, 2, Activation::Relu);
        hidden.weights = vec![2.0, -1.0];
        hidden.bias = vec![0.5, 1.0];
        let mut out = Layer::new(2, 1, Activation::Sigmoid);
        out.weights = vec![1.0, 2.0];
        out.bias = vec![-0.25];
        let m = Mlp::from_layers(vec![hidden, out]).unwrap();
        // x = 1: hidden pre (2.5, 0), post (2.5, 0); out pre 2.25
        let expected = 1.0 / (1.0 + (-2.25f64).exp());
        assert!((m.forward(&[1.0]).unwrap() - expected).abs() < 1e-15);
        // x = -1: hidden pre (-1.5, 2), post (0, 2); out pre 3.75
        let expected = 1.0 / (1.0 + (-3.75f64).exp());
        assert!((m.forward(&[-1.0]).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn forward_output_in_open_unit_interval() {
        let cfg = TrainConfig {
            rng_seed: 9,
            ..Default::default()
        };
        let m = mlp_init(&cfg, 5).unwrap();
        for x in [[0.0; 5], [100.0; 5], [-100.0; 5]] {
            let p = m.forward(&x).unwrap();
            assert!(p > 0.0 && p < 1.0);
        }
        assert!(m.forward(&[f64::NAN, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn init_random_deterministic() {
        let cfg = TrainConfig {
            rng_seed: 31,
            ..Default::default()
        };
        assert_eq!(mlp_init(&cfg, 12).unwrap(), mlp_init(&cfg, 12).unwrap());
        let other = TrainConfig {
            rng_seed: 32,
            ..Default::default()
        };
        assert_ne!(mlp_init(&cfg, 12).unwrap(), mlp_init(&other, 12).unwrap());
    }

    #[test]
    fn init_architecture_shapes() {
        let m = mlp_init(&TrainConfig::default(), 12).unwrap();
        let dims: Vec<(usize, usize)> = m.layers().iter().map(|l| (l.in_dim, l.out_dim)).collect();
        assert_eq!(dims, vec![(12, 12), (12, 10), (10, 8), (8, 1)]);
        assert_eq!(m.layers().last().unwrap().activation, Activation::Sigmoid);
        assert!(m.layers()[..3]
            .iter()
            .all(|l| l.activation == Activation::Relu));
    }

    #[test]
    fn seeded_init_replicates_rows_without_jitter() {
        let s = vec![0.5, -1.0, 0.25];
        let cfg = TrainConfig {
            init: InitMode::Seeded(seed(s.clone())),
            seed_jitter: 0.0,
            ..Default::default()
        };
        let m = mlp_init_with_hidden(&cfg, 3, &[4, 2]).unwrap();
        let first = &m.layers()[0];
        for o in 0..first.out_dim {
            for i in 0..first.in_dim {
                assert_eq!(first.weight(o, i), s[i]);
            }
        }
    }

    #[test]
    fn seeded_init_preserves_sign_pattern_with_jitter() {
        let s = vec![0.5, -1.0, 0.25, -0.1];
        let cfg = TrainConfig {
            init: InitMode::Seeded(seed(s.clone())),
            seed_jitter: 0.05,
            rng_seed: 17,
            ..Default::default()
        };
        let m = mlp_init_with_hidden(&cfg, 4, &[6]).unwrap();
        let first = &m.layers()[0];
        for o in 0..first.out_dim {
            for i in 0..first.in_dim {
                assert_eq!(first.weight(o, i).signum(), s[i].signum());
                assert!((first.weight(o, i) - s[i]).abs() <= 0.05 * s[i].abs() + 1e-15);
            }
        }
    }

    #[test]
    fn seeded_init_arity_mismatch() {
        let cfg = TrainConfig {
            init: InitMode::Seeded(seed(vec![0.1, 0.2])),
            ..Default::default()
        };
        assert!(mlp_init(&cfg, 3).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..10 {
            let cfg = TrainConfig {
                rng_seed: rng.gen(),
                ..Default::default()
            };
            let m = mlp_init_with_hidden(&cfg, 4, &[5, 3]).unwrap();
            let inputs: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let targets: Vec<f64> = (0..3).map(|_| f64::from(rng.gen_range(0..2))).collect();
            let grads = backprop_gradients(&m, &inputs, &targets).unwrap();

            let loss = |model: &Mlp| -> f64 {
                let mut total = 0.0;
                for (x, &y) in inputs.iter().zip(&targets) {
                    let p = model.forward(x).unwrap();
                    total -= y * p.ln() + (1.0 - y) * (1.0 - p).ln();
                }
                total / inputs.len() as f64
            };
            let h = 1e-5;
            for l in 0..m.layers().len() {
                for w_idx in 0..m.layers()[l].weights.len() {
                    let mut plus = m.clone();
                    plus.layers_mut()[l].weights[w_idx] += h;
                    let mut minus = m.clone();
                    minus.layers_mut()[l].weights[w_idx] -= h;
                    let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
                    let an = grads.layers[l].0[w_idx];
                    let denom = fd.abs().max(an.abs()).max(1e-6);
                    assert!(
                        (fd - an).abs() / denom < 1e-4,
                        "layer {l} weight {w_idx}: fd {fd} vs analytic {an}"
                    );
                }
            }
        }
    }

    #[test]
    fn output_bias_gradient_is_mean_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = TrainConfig {
            rng_seed: 3,
            ..Default::default()
        };
        let m = mlp_init_with_hidden(&cfg, 3, &[4]).unwrap();
        let inputs: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let targets = vec![1.0, 0.0, 1.0, 1.0, 0.0];
        let grads = backprop_gradients(&m, &inputs, &targets).unwrap();
        let mean_residual: f64 = inputs
            .iter()
            .zip(&targets)
            .map(|(x, &y)| m.forward(x).unwrap() - y)
            .sum::<f64>()
            / inputs.len() as f64;
        let out_bias_grad = grads.layers.last().unwrap().1[0];
        assert!((out_bias_grad - mean_residual).abs() < 1e-12);
    }

    #[test]
    fn gradient_zero_when_targets_equal_outputs() {
        let cfg = TrainConfig {
            rng_seed: 8,
            ..Default::default()
        };
        let m = mlp_init_with_hidden(&cfg, 2, &[3]).unwrap();
        let inputs = vec![vec![0.3, -0.4], vec![1.0, 0.2]];
        let targets: Vec<f64> = inputs.iter().map(|x| m.forward(x).unwrap()).collect();
        let grads = backprop_gradients(&m, &inputs, &targets).unwrap();
        for (dw, db) in &grads.layers {
            assert!(dw.iter().all(|g| g.abs() < 1e-12));
            assert!(db.iter().all(|g| g.abs() < 1e-12));
        }
    }

    #[test]
    fn training_learns_separable_toy() {
        let cfg = TrainConfig {
            epochs: 200,
            rng_seed: 4,
            ..Default::default()
        };
        let data = toy_2d();
        let m = mlp_train(&data, &cfg).unwrap();
        let correct = data
            .rows()
            .iter()
            .filter(|(x, y)| m.predict(x).unwrap() == *y)
            .count();
        assert!(correct as f64 / data.len() as f64 >= 0.95);
    }

    #[test]
    fn zero_epochs_leaves_parameters_unchanged() {
        let cfg = TrainConfig {
            epochs: 0,
            rng_seed: 12,
            ..Default::default()
        };
        let m = mlp_train(&toy_2d(), &cfg).unwrap();
        assert_eq!(m, mlp_init(&cfg, 2).unwrap());
    }

    #[test]
    fn loss_decreases_early() {
        let data = toy_2d();
        let base = TrainConfig {
            rng_seed: 21,
            ..Default::default()
        };
        let mut losses = Vec::new();
        for epochs in 0..=5 {
            let cfg = TrainConfig { epochs, ..base.clone() };
            let m = mlp_train(&data, &cfg).unwrap();
            losses.push(bce_loss(&m, &data).unwrap());
        }
        let violations = losses
            .windows(2)
            .filter(|pair| pair[1] >= pair[0])
            .count();
        assert!(violations <= 1, "losses {losses:?}");
    }

    #[test]
    fn training_deterministic_per_seed() {
        let cfg = TrainConfig {
            epochs: 10,
            rng_seed: 99,
            ..Default::default()
        };
        let data = toy_2d();
        assert_eq!(mlp_train(&data, &cfg).unwrap(), mlp_train(&data, &cfg).unwrap());
    }
}
