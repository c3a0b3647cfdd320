//! The experiment grid: sample size × true-positive rate × epochs ×
//! initialization mode, with repetitions, CSV result tables, a
//! seeded-vs-random comparison report, and a synthetic data generator that
//! stands in for unpublished volunteer rankings.
//!
//! Every grid cell derives a private RNG stream from (base seed, cell
//! coordinates, repetition); the stream is independent of the initialization
//! mode so that random and seeded arms of one repetition see the same split,
//! the same biased sample and the same training shuffle.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{
    apply_scaler, biased_sample, standardize, train_test_split, Dataset, FeatureSchema, SampleSpec,
};
use crate::error::{Error, Result};
use crate::models::{
    evaluate, mlp_train, svm_train, InitMode, Metrics, TrainConfig,
};
use crate::rank::{
    aggregate, AggregationMethod, ProfileDocument, ProfileEntry, Ranking, RankingProfile,
};
use crate::seed::{resolve_directions, seed_from_aggregate, DirectionVotes, SeedWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Svm,
    Mlp,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::Mlp => "mlp",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svm" => Ok(ModelKind::Svm),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(Error::InvalidArgument(format!(
                "unknown model {other:?} (expected svm or mlp)"
            ))),
        }
    }
}

/// One initialization arm of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridInitMode {
    Random,
    Seeded(AggregationMethod),
}

impl GridInitMode {
    pub fn label(&self) -> String {
        match self {
            GridInitMode::Random => "random".into(),
            GridInitMode::Seeded(m) => format!("{}-seeded", short_method(*m)),
        }
    }

    pub fn aggregator_label(&self) -> String {
        match self {
            GridInitMode::Random => "-".into(),
            GridInitMode::Seeded(m) => short_method(*m).into(),
        }
    }
}

fn short_method(m: AggregationMethod) -> &'static str {
    match m {
        AggregationMethod::KemenyYoung => "kemeny",
        AggregationMethod::Mc4 => "mc4",
        AggregationMethod::Borda => "borda",
    }
}

impl std::str::FromStr for GridInitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(GridInitMode::Random),
            other => {
                let name = other.strip_suffix("-seeded").unwrap_or(other);
                Ok(GridInitMode::Seeded(name.parse()?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub sample_sizes: Vec<usize>,
    pub tp_rates: Vec<f64>,
    pub epoch_settings: Vec<usize>,
    pub init_modes: Vec<GridInitMode>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub model: ModelKind,
    pub train_fraction: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub l2: f64,
    pub seed_jitter: f64,
    /// When false, the wall_ms column is written as 0 so that repeated runs
    /// are byte-identical.
    pub record_timings: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            sample_sizes: vec![500, 1000, 1500, 2000],
            tp_rates: vec![0.2, 0.4, 0.6, 0.8],
            epoch_settings: vec![50, 200],
            init_modes: vec![
                GridInitMode::Random,
                GridInitMode::Seeded(AggregationMethod::Borda),
                GridInitMode::Seeded(AggregationMethod::Mc4),
                GridInitMode::Seeded(AggregationMethod::KemenyYoung),
            ],
            repetitions: 20,
            base_seed: 0,
            model: ModelKind::Mlp,
            train_fraction: 0.8,
            learning_rate: 0.01,
            batch_size: 32,
            l2: 1e-3,
            seed_jitter: 0.05,
            record_timings: false,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sample_sizes.is_empty()
            || self.tp_rates.is_empty()
            || self.epoch_settings.is_empty()
            || self.init_modes.is_empty()
        {
            return Err(Error::InvalidArgument("grid lists must be non-empty".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be positive".into()));
        }
        Ok(())
    }

    pub fn expected_record_count(&self) -> usize {
        self.sample_sizes.len()
            * self.tp_rates.len()
            * self.epoch_settings.len()
            * self.init_modes.len()
            * self.repetitions
    }
}

/// One (cell, repetition) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub model: ModelKind,
    pub aggregator: String,
    pub init_mode: String,
    pub sample_size: usize,
    pub tp_rate: f64,
    pub epochs: usize,
    pub repetition: usize,
    pub seed: u64,
    pub metrics: Metrics,
    pub wall_ms: u64,
    pub status: String,
}

impl CellRecord {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridResult {
    pub records: Vec<CellRecord>,
}

impl GridResult {
    pub fn skipped(&self) -> usize {
        self.records.iter().filter(|r| !r.is_ok()).count()
    }
}

/// splitmix64 step, used to derive per-cell seed streams.
fn mix(state: u64, value: u64) -> u64 {
    let mut z = state
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(value.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn cell_data_seed(base: u64, size: usize, tp_rate: f64, epochs: usize, rep: usize) -> u64 {
    let mut s = mix(base, size as u64);
    s = mix(s, tp_rate.to_bits());
    s = mix(s, epochs as u64);
    mix(s, rep as u64)
}

/// Build seed weights for every aggregator requested by the grid.
pub fn seeds_for_modes(
    modes: &[GridInitMode],
    schema: &FeatureSchema,
    profile: &RankingProfile,
    signs: &[Vec<i8>],
) -> Result<Vec<(AggregationMethod, SeedWeights)>> {
    let votes = DirectionVotes::from_user_signs(signs)?;
    let directions = resolve_directions(&votes)?;
    let mut out = Vec::new();
    for mode in modes {
        if let GridInitMode::Seeded(method) = mode {
            if out.iter().any(|(m, _)| m == method) {
                continue;
            }
            let agg = aggregate(profile, *method)?;
            let sw = seed_from_aggregate(&agg, &directions, schema.feature_names())?;
            out.push((*method, sw));
        }
    }
    Ok(out)
}

/// Run every cell of the grid. Infeasible cells are recorded as skipped with
/// their reason; the grid never aborts because of one cell.
pub fn run_grid(
    cfg: &GridConfig,
    data: &Dataset,
    profile: Option<(&RankingProfile, &[Vec<i8>])>,
) -> Result<GridResult> {
    cfg.validate()?;
    let needs_seeds = cfg
        .init_modes
        .iter()
        .any(|m| matches!(m, GridInitMode::Seeded(_)));
    let seeds = match (needs_seeds, profile) {
        (true, Some((p, signs))) => seeds_for_modes(&cfg.init_modes, data.schema(), p, signs)?,
        (true, None) => {
            return Err(Error::InvalidArgument(
                "seeded init modes require a ranking profile".into(),
            ))
        }
        (false, _) => Vec::new(),
    };

    let mut cells = Vec::with_capacity(cfg.expected_record_count());
    for &size in &cfg.sample_sizes {
        for &tp_rate in &cfg.tp_rates {
            for &epochs in &cfg.epoch_settings {
                for mode in &cfg.init_modes {
                    for rep in 0..cfg.repetitions {
                        cells.push((size, tp_rate, epochs, *mode, rep));
                    }
                }
            }
        }
    }

    let records: Vec<CellRecord> = cells
        .par_iter()
        .map(|&(size, tp_rate, epochs, mode, rep)| {
            run_cell(cfg, data, &seeds, size, tp_rate, epochs, mode, rep)
        })
        .collect();
    Ok(GridResult { records })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    cfg: &GridConfig,
    data: &Dataset,
    seeds: &[(AggregationMethod, SeedWeights)],
    size: usize,
    tp_rate: f64,
    epochs: usize,
    mode: GridInitMode,
    rep: usize,
) -> CellRecord {
    let data_seed = cell_data_seed(cfg.base_seed, size, tp_rate, epochs, rep);
    let start = Instant::now();
    let mut record = CellRecord {
        model: cfg.model,
        aggregator: mode.aggregator_label(),
        init_mode: mode.label(),
        sample_size: size,
        tp_rate,
        epochs,
        repetition: rep,
        seed: data_seed,
        metrics: Metrics::default(),
        wall_ms: 0,
        status: "ok".into(),
    };
    let outcome = (|| -> Result<Metrics> {
        let (train, test) = train_test_split(data, cfg.train_fraction, data_seed)?;
        let spec = SampleSpec::new(size, tp_rate, mix(data_seed, 1))?;
        let sample = biased_sample(&train, &spec)?;
        let (sample, scaler) = standardize(&sample)?;
        let test = apply_scaler(&test, &scaler)?;
        let init = match mode {
            GridInitMode::Random => InitMode::Random,
            GridInitMode::Seeded(method) => {
                let sw = seeds
                    .iter()
                    .find(|(m, _)| *m == method)
                    .map(|(_, sw)| sw.clone())
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("no seed weights for {}", method.name()))
                    })?;
                InitMode::Seeded(sw)
            }
        };
        let train_cfg = TrainConfig {
            epochs,
            learning_rate: cfg.learning_rate,
            batch_size: cfg.batch_size,
            l2: cfg.l2,
            rng_seed: mix(data_seed, 2),
            init,
            seed_jitter: cfg.seed_jitter,
        };
        match cfg.model {
            ModelKind::Svm => {
                let m = svm_train(&sample, &train_cfg)?;
                evaluate(&m, &test)
            }
            ModelKind::Mlp => {
                let m = mlp_train(&sample, &train_cfg)?;
                evaluate(&m, &test)
            }
        }
    })();
    match outcome {
        Ok(metrics) => record.metrics = metrics,
        Err(e) => record.status = format!("skipped: {e}"),
    }
    if cfg.record_timings {
        record.wall_ms = start.elapsed().as_millis() as u64;
    }
    record
}

/// Results CSV, one row per (cell, repetition).
pub fn write_results_csv(grid: &GridResult, path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record([
        "model", "aggregator", "init_mode", "sample_size", "tp_rate", "epochs", "repetition",
        "seed", "accuracy", "f1", "tp", "fp", "fn", "tn", "wall_ms", "status",
    ])?;
    for r in &grid.records {
        let (acc, f1) = if r.is_ok() {
            (format!("{}", r.metrics.accuracy()), format!("{}", r.metrics.f1()))
        } else {
            (String::new(), String::new())
        };
        writer.write_record([
            r.model.name().to_string(),
            r.aggregator.clone(),
            r.init_mode.clone(),
            r.sample_size.to_string(),
            format!("{}", r.tp_rate),
            r.epochs.to_string(),
            r.repetition.to_string(),
            r.seed.to_string(),
            acc,
            f1,
            r.metrics.tp.to_string(),
            r.metrics.fp.to_string(),
            r.metrics.fn_.to_string(),
            r.metrics.tn.to_string(),
            r.wall_ms.to_string(),
            r.status.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Per-cell comparison of one seeded arm against the random arm.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub model: ModelKind,
    pub sample_size: usize,
    pub tp_rate: f64,
    pub epochs: usize,
    pub seeded_mode: String,
    pub repetitions: usize,
    pub acc_random_mean: f64,
    pub acc_random_sd: f64,
    pub acc_seeded_mean: f64,
    pub acc_seeded_sd: f64,
    pub acc_diff_mean: f64,
    pub acc_win_rate: f64,
    pub f1_random_mean: f64,
    pub f1_random_sd: f64,
    pub f1_seeded_mean: f64,
    pub f1_seeded_sd: f64,
    pub f1_diff_mean: f64,
    pub f1_win_rate: f64,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Paired per-cell means, differences and win-rates of each seeded mode over
/// random initialization. Ties count half a win.
pub fn seeded_vs_random_report(grid: &GridResult) -> Result<Vec<ComparisonRow>> {
    // cell key = (model, size, tp bits, epochs)
    type Key = (String, usize, u64, usize);
    let mut cells: Vec<Key> = Vec::new();
    for r in &grid.records {
        let key = (
            r.model.name().to_string(),
            r.sample_size,
            r.tp_rate.to_bits(),
            r.epochs,
        );
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    let seeded_modes: Vec<String> = {
        let mut m: Vec<String> = grid
            .records
            .iter()
            .filter(|r| r.init_mode != "random")
            .map(|r| r.init_mode.clone())
            .collect();
        m.sort();
        m.dedup();
        m
    };
    if seeded_modes.is_empty() {
        return Err(Error::InvalidArgument(
            "report needs at least one seeded init mode".into(),
        ));
    }

    let pick = |key: &Key, mode: &str| -> Vec<&CellRecord> {
        let mut rs: Vec<&CellRecord> = grid
            .records
            .iter()
            .filter(|r| {
                r.is_ok()
                    && r.init_mode == mode
                    && (
                        r.model.name().to_string(),
                        r.sample_size,
                        r.tp_rate.to_bits(),
                        r.epochs,
                    ) == *key
            })
            .collect();
        rs.sort_by_key(|r| r.repetition);
        rs
    };

    let mut rows = Vec::new();
    for key in &cells {
        let random = pick(key, "random");
        if random.is_empty() {
            continue;
        }
        for mode in &seeded_modes {
            let seeded = pick(key, mode);
            if seeded.is_empty() {
                continue;
            }
            let rand_reps: Vec<usize> = random.iter().map(|r| r.repetition).collect();
            let seed_reps: Vec<usize> = seeded.iter().map(|r| r.repetition).collect();
            if rand_reps != seed_reps {
                return Err(Error::InvalidArgument(format!(
                    "cell size={} tp={} epochs={}: repetitions {:?} ({mode}) do not pair with {:?} (random)",
                    key.1,
                    f64::from_bits(key.2),
                    key.3,
                    seed_reps,
                    rand_reps
                )));
            }
            let acc_r: Vec<f64> = random.iter().map(|r| r.metrics.accuracy()).collect();
            let acc_s: Vec<f64> = seeded.iter().map(|r| r.metrics.accuracy()).collect();
            let f1_r: Vec<f64> = random.iter().map(|r| r.metrics.f1()).collect();
            let f1_s: Vec<f64> = seeded.iter().map(|r| r.metrics.f1()).collect();
            let win = |s: &[f64], r: &[f64]| -> f64 {
                s.iter()
                    .zip(r)
                    .map(|(a, b)| {
                        if a > b {
                            1.0
                        } else if a == b {
                            0.5
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>()
                    / s.len() as f64
            };
            let diff = |s: &[f64], r: &[f64]| -> f64 {
                s.iter().zip(r).map(|(a, b)| a - b).sum::<f64>() / s.len() as f64
            };
            let (acc_random_mean, acc_random_sd) = mean_sd(&acc_r);
            let (acc_seeded_mean, acc_seeded_sd) = mean_sd(&acc_s);
            let (f1_random_mean, f1_random_sd) = mean_sd(&f1_r);
            let (f1_seeded_mean, f1_seeded_sd) = mean_sd(&f1_s);
            rows.push(ComparisonRow {
                model: random[0].model,
                sample_size: key.1,
                tp_rate: f64::from_bits(key.2),
                epochs: key.3,
                seeded_mode: mode.clone(),
                repetitions: random.len(),
                acc_random_mean,
                acc_random_sd,
                acc_seeded_mean,
                acc_seeded_sd,
                acc_diff_mean: diff(&acc_s, &acc_r),
                acc_win_rate: win(&acc_s, &acc_r),
                f1_random_mean,
                f1_random_sd,
                f1_seeded_mean,
                f1_seeded_sd,
                f1_diff_mean: diff(&f1_s, &f1_r),
                f1_win_rate: win(&f1_s, &f1_r),
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "no cell has both a random and a seeded arm".into(),
        ));
    }
    Ok(rows)
}

pub fn write_report_csv(rows: &[ComparisonRow], path: impl AsRef<Path>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record([
        "model", "sample_size", "tp_rate", "epochs", "seeded_mode", "repetitions",
        "acc_random_mean", "acc_random_sd", "acc_seeded_mean", "acc_seeded_sd", "acc_diff_mean",
        "acc_win_rate", "f1_random_mean", "f1_random_sd", "f1_seeded_mean", "f1_seeded_sd",
        "f1_diff_mean", "f1_win_rate",
    ])?;
    for r in rows {
        writer.write_record([
            r.model.name().to_string(),
            r.sample_size.to_string(),
            format!("{}", r.tp_rate),
            r.epochs.to_string(),
            r.seeded_mode.clone(),
            r.repetitions.to_string(),
            format!("{}", r.acc_random_mean),
            format!("{}", r.acc_random_sd),
            format!("{}", r.acc_seeded_mean),
            format!("{}", r.acc_seeded_sd),
            format!("{}", r.acc_diff_mean),
            format!("{}", r.acc_win_rate),
            format!("{}", r.f1_random_mean),
            format!("{}", r.f1_random_sd),
            format!("{}", r.f1_seeded_mean),
            format!("{}", r.f1_seeded_sd),
            format!("{}", r.f1_diff_mean),
            format!("{}", r.f1_win_rate),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Generator settings for the synthetic oracle benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    /// True weight vector; the label rule is `y = 1 iff w·x + noise > 0`.
    pub weights: Vec<f64>,
    pub rows: usize,
    pub noise_scale: f64,
    /// Simulated users, each reporting the oracle ranking with perturbations.
    pub users: usize,
    /// Probability of each adjacent transposition applied to the oracle
    /// ranking, and of each direction flip.
    pub perturbation: f64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.weights.len() < 2 {
            return Err(Error::InvalidArgument("need at least two features".into()));
        }
        if self.weights.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidArgument("true weights must be non-zero".into()));
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite true weight".into()));
        }
        if self.rows == 0 || self.users == 0 {
            return Err(Error::InvalidArgument("rows and users must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.perturbation) {
            return Err(Error::InvalidArgument("perturbation must lie in [0,1)".into()));
        }
        if self.noise_scale < 0.0 {
            return Err(Error::InvalidArgument("noise scale must be non-negative".into()));
        }
        Ok(())
    }

    /// Default true weights for F features: magnitudes decaying linearly from
    /// 1, alternating sign.
    pub fn default_weights(f: usize) -> Vec<f64> {
        (0..f)
            .map(|i| {
                let mag = 1.0 - i as f64 / (f as f64 + 1.0);
                if i % 2 == 0 {
                    mag
                } else {
                    -mag
                }
            })
            .collect()
    }

    /// Features sorted by |w*| descending, ties towards the smaller index.
    pub fn oracle_ranking(&self) -> Ranking {
        let mut order: Vec<usize> = (0..self.weights.len()).collect();
        order.sort_by(|&a, &b| {
            self.weights[b]
                .abs()
                .partial_cmp(&self.weights[a].abs())
                .unwrap()
                .then(a.cmp(&b))
        });
        Ranking::new(order).expect("permutation")
    }
}

/// Draw standard-normal features, label them with the noisy linear rule, and
/// simulate the volunteer rankings with adjacent transpositions and direction
/// flips of the oracle answer.
pub fn generate_synthetic(spec: &SyntheticSpec, rng_seed: u64) -> Result<(Dataset, ProfileDocument)> {
    spec.validate()?;
    let f = spec.weights.len();
    let feature_names: Vec<String> = (0..f).map(|i| format!("f{i}")).collect();
    let schema = FeatureSchema::new(feature_names.clone(), "label")?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);

    let mut rows = Vec::with_capacity(spec.rows);
    for _ in 0..spec.rows {
        let x: Vec<f64> = (0..f).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let noise: f64 = rng.sample::<f64, _>(StandardNormal);
        let score: f64 =
            spec.weights.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + spec.noise_scale * noise;
        rows.push((x, u8::from(score > 0.0)));
    }
    let dataset = Dataset::new(schema, rows)?;

    let oracle = spec.oracle_ranking();
    let mut users = Vec::with_capacity(spec.users);
    for u in 0..spec.users {
        let mut order = oracle.order().to_vec();
        for i in 0..f - 1 {
            if rng.gen::<f64>() < spec.perturbation {
                order.swap(i, i + 1);
            }
        }
        let ranking_names: Vec<String> = order.iter().map(|&i| feature_names[i].clone()).collect();
        let directions = feature_names
            .iter()
            .enumerate()
            .map(|(i, name)| {
                let mut sign: i8 = if spec.weights[i] < 0.0 { -1 } else { 1 };
                if rng.gen::<f64>() < spec.perturbation {
                    sign = -sign;
                }
                (name.clone(), sign)
            })
            .collect();
        users.push(ProfileEntry {
            user_id: format!("sim{u}"),
            ranking: ranking_names,
            directions,
        });
    }
    let doc = ProfileDocument {
        features: feature_names,
        users,
    };
    Ok((dataset, doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_synthetic(rows: usize, seed: u64) -> (Dataset, ProfileDocument, SyntheticSpec) {
        let spec = SyntheticSpec {
            weights: SyntheticSpec::default_weights(4),
            rows,
            noise_scale: 0.25,
            users: 3,
            perturbation: 0.0,
        };
        let (ds, doc) = generate_synthetic(&spec, seed).unwrap();
        (ds, doc, spec)
    }

    #[test]
    fn synthetic_zero_perturbation_reproduces_oracle() {
        let (_, doc, spec) = tiny_synthetic(10, 1);
        let (profile, signs) = doc.to_profile(None).unwrap();
        let oracle = spec.oracle_ranking();
        for r in profile.rankings() {
            assert_eq!(r, &oracle);
        }
        let expected_signs: Vec<i8> = spec
            .weights
            .iter()
            .map(|&w| if w < 0.0 { -1 } else { 1 })
            .collect();
        for s in &signs {
            assert_eq!(s, &expected_signs);
        }
    }

    #[test]
    fn synthetic_noiseless_single_feature_rule() {
        let mut w = vec![0.0; 4];
        w[0] = 1.0;
        let spec = SyntheticSpec {
            weights: w,
            rows: 200,
            noise_scale: 0.0,
            users: 1,
            perturbation: 0.0,
        };
        let (ds, _) = generate_synthetic(&spec, 9).unwrap();
        for (x, y) in ds.rows() {
            assert_eq!(*y, u8::from(x[0] > 0.0));
        }
    }

    #[test]
    fn synthetic_label_balance_near_half() {
        let spec = SyntheticSpec {
            weights: SyntheticSpec::default_weights(6),
            rows: 20_000,
            noise_scale: 0.5,
            users: 1,
            perturbation: 0.0,
        };
        let (ds, _) = generate_synthetic(&spec, 13).unwrap();
        let frac = ds.positives() as f64 / ds.len() as f64;
        assert!((frac - 0.5).abs() < 0.02, "positive fraction {frac}");
    }

    #[test]
    fn grid_record_count_and_determinism() {
        let (ds, doc, _) = tiny_synthetic(400, 3);
        let (profile, signs) = doc.to_profile(None).unwrap();
        let cfg = GridConfig {
            sample_sizes: vec![40, 60],
            tp_rates: vec![0.3, 0.6],
            epoch_settings: vec![2],
            init_modes: vec![
                GridInitMode::Random,
                GridInitMode::Seeded(AggregationMethod::Borda),
            ],
            repetitions: 3,
            base_seed: 5,
            ..Default::default()
        };
        let a = run_grid(&cfg, &ds, Some((&profile, &signs))).unwrap();
        assert_eq!(a.records.len(), 24);
        assert_eq!(cfg.expected_record_count(), 24);
        let b = run_grid(&cfg, &ds, Some((&profile, &signs))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.skipped(), 0);
    }

    #[test]
    fn grid_skips_infeasible_cells_without_aborting() {
        let (ds, doc, _) = tiny_synthetic(100, 7);
        let (profile, signs) = doc.to_profile(None).unwrap();
        let cfg = GridConfig {
            // 80 training rows cannot supply 500-row samples
            sample_sizes: vec![20, 500],
            tp_rates: vec![0.5],
            epoch_settings: vec![1],
            init_modes: vec![GridInitMode::Random],
            repetitions: 2,
            base_seed: 1,
            ..Default::default()
        };
        let res = run_grid(&cfg, &ds, Some((&profile, &signs))).unwrap();
        assert_eq!(res.records.len(), 4);
        let skipped = res.skipped();
        assert_eq!(skipped, 2);
        assert!(res
            .records
            .iter()
            .filter(|r| !r.is_ok())
            .all(|r| r.sample_size == 500 && r.status.starts_with("skipped: ")));
    }

    #[test]
    fn grid_requires_profile_for_seeded_modes() {
        let (ds, _, _) = tiny_synthetic(100, 7);
        let cfg = GridConfig {
            sample_sizes: vec![20],
            tp_rates: vec![0.5],
            epoch_settings: vec![1],
            init_modes: vec![GridInitMode::Seeded(AggregationMethod::Mc4)],
            repetitions: 1,
            ..Default::default()
        };
        assert!(run_grid(&cfg, &ds, None).is_err());
    }

    #[test]
    fn report_pairs_and_identities() {
        let (ds, doc, _) = tiny_synthetic(400, 11);
        let (profile, signs) = doc.to_profile(None).unwrap();
        let cfg = GridConfig {
            sample_sizes: vec![50],
            tp_rates: vec![0.4],
            epoch_settings: vec![3],
            init_modes: vec![
                GridInitMode::Random,
                GridInitMode::Seeded(AggregationMethod::Mc4),
            ],
            repetitions: 4,
            base_seed: 2,
            ..Default::default()
        };
        let grid = run_grid(&cfg, &ds, Some((&profile, &signs))).unwrap();
        let rows = seeded_vs_random_report(&grid).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.repetitions, 4);
        // diff mean equals independently recomputed column arithmetic
        let acc = |mode: &str| -> Vec<f64> {
            let mut rs: Vec<&CellRecord> = grid
                .records
                .iter()
                .filter(|r| r.init_mode == mode)
                .collect();
            rs.sort_by_key(|r| r.repetition);
            rs.iter().map(|r| r.metrics.accuracy()).collect()
        };
        let r = acc("random");
        let s = acc("mc4-seeded");
        let manual_diff =
            s.iter().zip(&r).map(|(a, b)| a - b).sum::<f64>() / s.len() as f64;
        assert!((row.acc_diff_mean - manual_diff).abs() < 1e-12);
        assert!(row.acc_win_rate >= 0.0 && row.acc_win_rate <= 1.0);
    }

    #[test]
    fn report_identical_arms_give_zero_diff_and_half_winrate() {
        // hand-build a grid where both arms are identical
        let mk = |mode: &str, rep: usize| CellRecord {
            model: ModelKind::Mlp,
            aggregator: "-".into(),
            init_mode: mode.into(),
            sample_size: 100,
            tp_rate: 0.4,
            epochs: 5,
            repetition: rep,
            seed: 0,
            metrics: Metrics {
                tp: 30,
                fp: 10,
                fn_: 10,
                tn: 50,
            },
            wall_ms: 0,
            status: "ok".into(),
        };
        let grid = GridResult {
            records: vec![
                mk("random", 0),
                mk("random", 1),
                mk("borda-seeded", 0),
                mk("borda-seeded", 1),
            ],
        };
        let rows = seeded_vs_random_report(&grid).unwrap();
        assert_eq!(rows[0].acc_diff_mean, 0.0);
        assert_eq!(rows[0].acc_win_rate, 0.5);
        assert_eq!(rows[0].f1_win_rate, 0.5);
    }

    #[test]
    fn results_csv_written() {
        let (ds, _, _) = tiny_synthetic(200, 3);
        let cfg = GridConfig {
            sample_sizes: vec![30],
            tp_rates: vec![0.5],
            epoch_settings: vec![1],
            init_modes: vec![GridInitMode::Random],
            repetitions: 2,
            ..Default::default()
        };
        let grid = run_grid(&cfg, &ds, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        write_results_csv(&grid, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with(
            "model,aggregator,init_mode,sample_size,tp_rate,epochs,repetition,seed,accuracy,f1,tp,fp,fn,tn,wall_ms,status"
        ));
    }
}
