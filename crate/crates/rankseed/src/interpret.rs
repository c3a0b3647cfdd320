//! Attribution for trained networks: integrated gradients over a straight
//! path from a baseline, per-neuron conductance for a hidden layer, and their
//! combination into layer-level feature importance.
//!
//! All path integrals use the Riemann midpoint rule with a shared step count,
//! so a layer's total conductance and the summed integrated gradients agree
//! with the output difference up to the same discretization error. Nothing
//! here is randomized.

use std::path::Path;

use crate::dataset::{Dataset, FeatureSchema};
use crate::error::{Error, Result};
use crate::models::Mlp;

/// Baseline and discretization for the path integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionConfig {
    /// Reference input x'; `None` means the all-zeros vector, which in
    /// standardized feature space is the training mean.
    pub baseline: Option<Vec<f64>>,
    pub steps: usize,
}

impl Default for AttributionConfig {
    fn default() -> Self {
        Self {
            baseline: None,
            steps: 50,
        }
    }
}

impl AttributionConfig {
    fn resolve_baseline(&self, dim: usize) -> Result<Vec<f64>> {
        match &self.baseline {
            None => Ok(vec![0.0; dim]),
            Some(b) if b.len() == dim => Ok(b.clone()),
            Some(b) => Err(Error::DimensionMismatch {
                expected: dim,
                got: b.len(),
            }),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive".into()));
        }
        Ok(())
    }
}

/// Attributions for one input (or averaged over a dataset).
#[derive(Debug, Clone, PartialEq)]
pub struct AttributionResult {
    /// Per-input-feature integrated gradients.
    pub ig: Vec<f64>,
    /// Per-neuron conductance of the inspected hidden layer.
    pub conductance: Vec<f64>,
    /// Layer-level feature importance: conductance-weighted per-neuron
    /// integrated gradients, summed over the layer.
    pub combined: Vec<f64>,
    /// |Σ ig - (F(x) - F(x'))| diagnostic at the configured step count.
    pub completeness_gap: f64,
    pub layer: usize,
    pub steps: usize,
}

fn check_hidden_layer(m: &Mlp, layer: usize) -> Result<()> {
    if layer >= m.hidden_layer_count() {
        return Err(Error::InvalidArgument(format!(
            "layer {layer} out of range: network has {} hidden layers",
            m.hidden_layer_count()
        )));
    }
    Ok(())
}

/// Integrated gradients of the model output for input `x`:
/// `(x_i - x'_i) * mean over path midpoints of ∂F/∂x_i`.
pub fn integrated_gradients(m: &Mlp, x: &[f64], cfg: &AttributionConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let baseline = cfg.resolve_baseline(m.input_dim())?;
    if x.len() != m.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.input_dim(),
            got: x.len(),
        });
    }
    let dim = x.len();
    let delta: Vec<f64> = x.iter().zip(&baseline).map(|(a, b)| a - b).collect();
    let mut acc = vec![0.0; dim];
    for s in 0..cfg.steps {
        let alpha = (s as f64 + 0.5) / cfg.steps as f64;
        let z: Vec<f64> = baseline
            .iter()
            .zip(&delta)
            .map(|(b, d)| b + alpha * d)
            .collect();
        let trace = m.forward_trace(&z)?;
        let grad = m.output_input_gradient(&trace);
        for (a, g) in acc.iter_mut().zip(&grad) {
            *a += g;
        }
    }
    Ok(acc
        .iter()
        .zip(&delta)
        .map(|(a, d)| d * a / cfg.steps as f64)
        .collect())
}

/// Conductance of every neuron in a hidden layer (post-activation), using the
/// same midpoint discretization as `integrated_gradients`.
pub fn layer_conductance(
    m: &Mlp,
    layer: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_hidden_layer(m, layer)?;
    let baseline = cfg.resolve_baseline(m.input_dim())?;
    if x.len() != m.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.input_dim(),
            got: x.len(),
        });
    }
    let delta: Vec<f64> = x.iter().zip(&baseline).map(|(a, b)| a - b).collect();
    let width = m.layers()[layer].out_dim;
    let mut cond = vec![0.0; width];
    for s in 0..cfg.steps {
        let alpha = (s as f64 + 0.5) / cfg.steps as f64;
        let z: Vec<f64> = baseline
            .iter()
            .zip(&delta)
            .map(|(b, d)| b + alpha * d)
            .collect();
        let trace = m.forward_trace(&z)?;
        let out_grads = m.output_grad_wrt_layers(&trace);
        let tangents = m.layer_tangents(&trace, &delta);
        for j in 0..width {
            cond[j] += out_grads[layer][j] * tangents[layer][j];
        }
    }
    for c in &mut cond {
        *c /= cfg.steps as f64;
    }
    Ok(cond)
}

/// Conductance of a single neuron.
pub fn neuron_conductance(
    m: &Mlp,
    layer: usize,
    neuron: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<f64> {
    check_hidden_layer(m, layer)?;
    if neuron >= m.layers()[layer].out_dim {
        return Err(Error::InvalidArgument(format!(
            "neuron {neuron} out of range: layer {layer} has {} neurons",
            m.layers()[layer].out_dim
        )));
    }
    Ok(layer_conductance(m, layer, x, cfg)?[neuron])
}

/// Per-input-feature split of one neuron's conductance (the integrand before
/// summing over input features). Sums to `neuron_conductance`.
pub fn neuron_conductance_decomposed(
    m: &Mlp,
    layer: usize,
    neuron: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<Vec<f64>> {
    check_hidden_layer(m, layer)?;
    if neuron >= m.layers()[layer].out_dim {
        return Err(Error::InvalidArgument(format!(
            "neuron {neuron} out of range: layer {layer} has {} neurons",
            m.layers()[layer].out_dim
        )));
    }
    let (_, _, cond_split) = layer_pass(m, layer, x, cfg)?;
    Ok(cond_split[neuron].clone())
}

/// Shared path sweep for the per-feature quantities of one hidden layer.
///
/// Returns (conductance per neuron, mean input Jacobian per neuron, the
/// per-neuron-per-feature conductance split).
fn layer_pass(
    m: &Mlp,
    layer: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    cfg.validate()?;
    let baseline = cfg.resolve_baseline(m.input_dim())?;
    if x.len() != m.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.input_dim(),
            got: x.len(),
        });
    }
    let dim = m.input_dim();
    let delta: Vec<f64> = x.iter().zip(&baseline).map(|(a, b)| a - b).collect();
    let width = m.layers()[layer].out_dim;
    let mut cond = vec![0.0; width];
    let mut jac_mean = vec![vec![0.0; dim]; width];
    let mut cond_split = vec![vec![0.0; dim]; width];
    for s in 0..cfg.steps {
        let alpha = (s as f64 + 0.5) / cfg.steps as f64;
        let z: Vec<f64> = baseline
            .iter()
            .zip(&delta)
            .map(|(b, d)| b + alpha * d)
            .collect();
        let trace = m.forward_trace(&z)?;
        let out_grads = m.output_grad_wrt_layers(&trace);
        // full layer Jacobian, one tangent per input feature
        for i in 0..dim {
            let mut unit = vec![0.0; dim];
            unit[i] = 1.0;
            let tangents = m.layer_tangents(&trace, &unit);
            for j in 0..width {
                let dj = tangents[layer][j];
                jac_mean[j][i] += dj;
                let contrib = out_grads[layer][j] * dj * delta[i];
                cond_split[j][i] += contrib;
                cond[j] += contrib;
            }
        }
    }
    let n = cfg.steps as f64;
    for j in 0..width {
        cond[j] /= n;
        for i in 0..dim {
            jac_mean[j][i] /= n;
            cond_split[j][i] /= n;
        }
    }
    Ok((cond, jac_mean, cond_split))
}

/// Layer-level feature importance: for each input feature `w`, the sum over
/// layer neurons of `conductance[j] * ig_j[w]`, where `ig_j[w]` is the
/// integrated gradient of input `w` for the sub-network ending at neuron `j`.
pub fn layer_feature_importance(
    m: &Mlp,
    layer: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<Vec<f64>> {
    check_hidden_layer(m, layer)?;
    let (cond, jac_mean, _) = layer_pass(m, layer, x, cfg)?;
    let baseline = cfg.resolve_baseline(m.input_dim())?;
    let delta: Vec<f64> = x.iter().zip(&baseline).map(|(a, b)| a - b).collect();
    let dim = m.input_dim();
    let mut combined = vec![0.0; dim];
    for (j, c) in cond.iter().enumerate() {
        for w in 0..dim {
            let neuron_ig = delta[w] * jac_mean[j][w];
            combined[w] += c * neuron_ig;
        }
    }
    Ok(combined)
}

/// Full attribution bundle for one input.
pub fn attribute(
    m: &Mlp,
    layer: usize,
    x: &[f64],
    cfg: &AttributionConfig,
) -> Result<AttributionResult> {
    check_hidden_layer(m, layer)?;
    let ig = integrated_gradients(m, x, cfg)?;
    let conductance = layer_conductance(m, layer, x, cfg)?;
    let combined = layer_feature_importance(m, layer, x, cfg)?;
    let baseline = cfg.resolve_baseline(m.input_dim())?;
    let fx = m.forward(x)?;
    let fb = m.forward(&baseline)?;
    let completeness_gap = (ig.iter().sum::<f64>() - (fx - fb)).abs();
    Ok(AttributionResult {
        ig,
        conductance,
        combined,
        completeness_gap,
        layer,
        steps: cfg.steps,
    })
}

/// Arithmetic mean of per-row attributions over a dataset.
pub fn dataset_average_attributions(
    m: &Mlp,
    ds: &Dataset,
    layer: usize,
    cfg: &AttributionConfig,
) -> Result<AttributionResult> {
    if ds.is_empty() {
        return Err(Error::InvalidArgument("dataset is empty".into()));
    }
    let mut acc: Option<AttributionResult> = None;
    for (x, _) in ds.rows() {
        let r = attribute(m, layer, x, cfg)?;
        match &mut acc {
            None => acc = Some(r),
            Some(total) => {
                for (a, b) in total.ig.iter_mut().zip(&r.ig) {
                    *a += b;
                }
                for (a, b) in total.conductance.iter_mut().zip(&r.conductance) {
                    *a += b;
                }
                for (a, b) in total.combined.iter_mut().zip(&r.combined) {
                    *a += b;
                }
                total.completeness_gap += r.completeness_gap;
            }
        }
    }
    let mut result = acc.unwrap();
    let n = ds.len() as f64;
    result.ig.iter_mut().for_each(|v| *v /= n);
    result.conductance.iter_mut().for_each(|v| *v /= n);
    result.combined.iter_mut().for_each(|v| *v /= n);
    result.completeness_gap /= n;
    Ok(result)
}

/// Plot-ready attribution table: columns (entity, value, method, layer, steps).
pub fn write_attribution_csv(
    result: &AttributionResult,
    schema: &FeatureSchema,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(["entity", "value", "method", "layer", "steps"])?;
    let layer = result.layer.to_string();
    let steps = result.steps.to_string();
    for (name, v) in schema.feature_names().iter().zip(&result.ig) {
        writer.write_record([name.as_str(), &format!("{v}"), "integrated_gradients", &layer, &steps])?;
    }
    for (j, v) in result.conductance.iter().enumerate() {
        writer.write_record([
            &format!("neuron_{j}"),
            &format!("{v}"),
            "conductance",
            &layer,
            &steps,
        ])?;
    }
    for (name, v) in schema.feature_names().iter().zip(&result.combined) {
        writer.write_record([
            name.as_str(),
            &format!("{v}"),
            "layer_feature_importance",
            &layer,
            &steps,
        ])?;
    }
    writer.flush()?;
    Ok(())
}
