//! Command-line front end: elicit rankings, aggregate them, inspect seed
//! files, train models, attribute predictions, and run the experiment grid.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error. Every subcommand
//! accepts `--seed` and is byte-deterministic given its flags.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::{BufRead, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rankseed::dataset::{load_csv, standardize, write_csv, Dataset, FeatureSchema};
use rankseed::harness::{
    generate_synthetic, run_grid, seeded_vs_random_report, write_report_csv, write_results_csv,
    GridConfig, GridInitMode, ModelKind, SyntheticSpec,
};
use rankseed::interpret::{
    attribute, dataset_average_attributions, write_attribution_csv, AttributionConfig,
};
use rankseed::models::{
    evaluate, mlp_train, svm_train, Checkpoint, InitMode, TrainConfig,
};
use rankseed::rank::{aggregate, AggregationMethod, ProfileDocument, ProfileEntry};
use rankseed::seed::{resolve_directions, seed_from_aggregate, seed_from_file, seed_to_file};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(rankseed::Error),
}

impl From<rankseed::Error> for CliError {
    fn from(e: rankseed::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Flat key-value config file (`key = value` per line, `#` comments).
/// Explicit flags win over config entries.
struct FileConfig(BTreeMap<String, String>);

impl FileConfig {
    fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(rankseed::Error::from)?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| usage(format!("config line {}: expected key = value", i + 1)))?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| usage(format!("config key {key}: {e}"))),
        }
    }
}

/// Flag value if given, else config entry, else default.
fn pick<T: FromStr>(flag: Option<T>, cfg: &FileConfig, key: &str, default: T) -> CliResult<T>
where
    T::Err: Display,
{
    match flag {
        Some(v) => Ok(v),
        None => Ok(cfg.get(key)?.unwrap_or(default)),
    }
}

fn parse_list<T: FromStr>(raw: &str, what: &str) -> CliResult<Vec<T>>
where
    T::Err: Display,
{
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|e| usage(format!("bad {what} entry {s:?}: {e}")))
        })
        .collect()
}

#[derive(Parser)]
#[command(
    name = "rankseed",
    version,
    about = "Aggregate human feature rankings into seed weights and benchmark them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Show sample rows and record one user's ranking and direction flags
    Elicit(ElicitArgs),
    /// Aggregate a ranking profile into a seed-weight file
    Aggregate(AggregateArgs),
    /// Validate and display a seed-weight file
    Seed(SeedArgs),
    /// Train a classifier from random or seeded initial weights
    Train(TrainArgs),
    /// Attribute a trained network's outputs to inputs and hidden neurons
    Explain(ExplainArgs),
    /// Run the sample-size x skew x epochs x init-mode experiment grid
    Grid(GridArgs),
    /// Generate a synthetic dataset with simulated user rankings
    Synth(SynthArgs),
}

#[derive(clap::Args)]
struct ElicitArgs {
    /// Dataset CSV with a header row
    #[arg(long)]
    data: PathBuf,
    /// Label column name
    #[arg(long, default_value = "label")]
    label: String,
    /// Ranking-profile JSON file to append to (created if missing)
    #[arg(long)]
    profile: PathBuf,
    /// Identifier of the user being elicited
    #[arg(long)]
    user: String,
    /// Number of sample rows to display
    #[arg(long)]
    rows: Option<usize>,
    /// Non-interactive: comma-separated feature names, most important first
    #[arg(long)]
    ranking: Option<String>,
    /// Non-interactive: comma-separated name=+1 or name=-1 direction flags
    #[arg(long)]
    directions: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Flat key=value config file; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct AggregateArgs {
    /// Ranking-profile JSON file
    #[arg(long)]
    profile: PathBuf,
    /// Aggregation method: kemeny, mc4 or borda
    #[arg(long)]
    method: Option<AggregationMethod>,
    /// Output seed-weight JSON file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SeedArgs {
    /// Seed-weight JSON file to validate
    #[arg(long)]
    file: PathBuf,
    /// Expected feature names, comma-separated
    #[arg(long)]
    features: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TrainArgs {
    /// Dataset CSV with a header row
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "label")]
    label: String,
    /// Model family: svm or mlp
    #[arg(long)]
    model: Option<ModelKind>,
    /// Initialization: random or seeded
    #[arg(long, default_value = "random")]
    init: String,
    /// Seed-weight file (required with --init seeded)
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    seed_jitter: Option<f64>,
    /// Output checkpoint JSON file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ExplainArgs {
    /// Checkpoint JSON written by `train`
    #[arg(long)]
    checkpoint: PathBuf,
    /// Dataset CSV to attribute over (standardized in place)
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "label")]
    label: String,
    /// Hidden layer index for conductance
    #[arg(long)]
    layer: Option<usize>,
    /// Interpolation steps
    #[arg(long)]
    steps: Option<usize>,
    /// Attribute a single row instead of the dataset average
    #[arg(long)]
    row: Option<usize>,
    /// Output attribution CSV
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GridArgs {
    /// Dataset CSV with a header row
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "label")]
    label: String,
    /// Ranking-profile JSON (required for seeded init modes)
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Comma-separated sample sizes
    #[arg(long)]
    sizes: Option<String>,
    /// Comma-separated true-positive rates
    #[arg(long)]
    rates: Option<String>,
    /// Comma-separated epoch settings
    #[arg(long)]
    epochs: Option<String>,
    /// Comma-separated init modes: random, borda-seeded, mc4-seeded, kemeny-seeded
    #[arg(long)]
    modes: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    model: Option<ModelKind>,
    /// Output results CSV
    #[arg(long)]
    out: PathBuf,
    /// Optional seeded-vs-random comparison CSV
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    jobs: Option<usize>,
    /// Record real wall times (breaks byte determinism of the results file)
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Feature count (ignored when --weights is given)
    #[arg(long)]
    features: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    /// True weight vector, comma-separated (default: decaying alternating)
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    noise: Option<f64>,
    /// Simulated users
    #[arg(long)]
    users: Option<usize>,
    /// Adjacent-transposition and direction-flip probability
    #[arg(long)]
    perturbation: Option<f64>,
    /// Output dataset CSV
    #[arg(long)]
    out_data: PathBuf,
    /// Output ranking-profile JSON
    #[arg(long)]
    out_profile: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Feature schema inferred from a CSV header: every column except the label.
fn schema_from_csv(path: &Path, label: &str) -> CliResult<FeatureSchema> {
    let mut reader = csv::Reader::from_path(path).map_err(rankseed::Error::from)?;
    let headers = reader.headers().map_err(rankseed::Error::from)?;
    let features: Vec<String> = headers
        .iter()
        .filter(|h| *h != label)
        .map(String::from)
        .collect();
    Ok(FeatureSchema::new(features, label)?)
}

fn load_dataset(path: &Path, label: &str) -> CliResult<Dataset> {
    let schema = schema_from_csv(path, label)?;
    Ok(load_csv(path, &schema)?)
}

fn run_elicit(args: ElicitArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let seed = pick(args.seed, &cfg, "seed", 0)?;
    let rows = pick(args.rows, &cfg, "rows", 20)?;
    let ds = load_dataset(&args.data, &args.label)?;

    let mut doc = if args.profile.exists() {
        ProfileDocument::load(&args.profile)?
    } else {
        ProfileDocument {
            features: ds.schema().feature_names().to_vec(),
            users: Vec::new(),
        }
    };
    if doc.features != ds.schema().feature_names() {
        return Err(CliError::Domain(rankseed::Error::InvalidSchema(format!(
            "profile features {:?} do not match dataset columns {:?}",
            doc.features,
            ds.schema().feature_names()
        ))));
    }

    let shown = rows.min(ds.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, ds.len(), shown);
    println!(
        "{} sample rows (features: {}):",
        shown,
        doc.features.join(", ")
    );
    for i in picks.iter() {
        let (x, y) = &ds.rows()[i];
        let cells: Vec<String> = x.iter().map(|v| format!("{v:.4}")).collect();
        println!("  [{}] {} -> {}", i, cells.join(", "), y);
    }

    let entry = match (&args.ranking, &args.directions) {
        (Some(ranking), Some(directions)) => ProfileEntry {
            user_id: args.user.clone(),
            ranking: ranking.split(',').map(|s| s.trim().to_string()).collect(),
            directions: parse_direction_flags(directions)?,
        },
        (Some(_), None) | (None, Some(_)) => {
            return Err(usage("--ranking and --directions must be given together"))
        }
        (None, None) => {
            if !std::io::stdin().is_terminal() {
                return Err(usage("stdin is not a terminal; pass --ranking and --directions"));
            }
            prompt_entry(&doc, &args.user)?
        }
    };
    doc.push_entry(entry)?;
    doc.save(&args.profile)?;
    println!(
        "recorded ranking for {:?}; profile now holds {} user(s)",
        args.user,
        doc.users.len()
    );
    Ok(())
}

fn parse_direction_flags(raw: &str) -> CliResult<BTreeMap<String, i8>> {
    let mut out = BTreeMap::new();
    for token in raw.split(',') {
        let token = token.trim();
        let (name, sign) = token
            .split_once('=')
            .ok_or_else(|| usage(format!("direction flag {token:?} is not name=+1/-1")))?;
        let sign = match sign.trim() {
            "+1" | "+" | "1" => 1,
            "-1" | "-" => -1,
            other => return Err(usage(format!("direction {other:?} is not +1 or -1"))),
        };
        out.insert(name.trim().to_string(), sign);
    }
    Ok(out)
}

/// Interactive prompts with re-prompting on invalid input.
fn prompt_entry(doc: &ProfileDocument, user: &str) -> CliResult<ProfileEntry> {
    let stdin = std::io::stdin();
    let read_line = |prompt: &str| -> CliResult<String> {
        print!("{prompt}");
        std::io::stdout().flush().map_err(rankseed::Error::from)?;
        let mut line = String::new();
        let n = stdin
            .lock()
            .read_line(&mut line)
            .map_err(rankseed::Error::from)?;
        if n == 0 {
            return Err(usage("unexpected end of input"));
        }
        Ok(line.trim().to_string())
    };

    let ranking = loop {
        let line = read_line("ranking (comma-separated, most important first): ")?;
        let ranking: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
        let candidate = ProfileEntry {
            user_id: user.to_string(),
            ranking: ranking.clone(),
            directions: doc.features.iter().map(|f| (f.clone(), 1)).collect(),
        };
        match doc.validate_entry(&candidate) {
            Ok(()) => break ranking,
            Err(e) => println!("invalid ranking: {e}"),
        }
    };
    let mut directions = BTreeMap::new();
    for name in &doc.features {
        loop {
            let line = read_line(&format!("direction for {name} [+/-]: "))?;
            match line.as_str() {
                "+" | "+1" | "1" => {
                    directions.insert(name.clone(), 1);
                    break;
                }
                "-" | "-1" => {
                    directions.insert(name.clone(), -1);
                    break;
                }
                other => println!("enter + or -, got {other:?}"),
            }
        }
    }
    Ok(ProfileEntry {
        user_id: user.to_string(),
        ranking,
        directions,
    })
}

fn run_aggregate(args: AggregateArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let method = pick(args.method, &cfg, "method", AggregationMethod::KemenyYoung)?;
    let doc = ProfileDocument::load(&args.profile)?;
    let (profile, signs) = doc.to_profile(None)?;
    let agg = aggregate(&profile, method)?;
    let votes = rankseed::seed::DirectionVotes::from_user_signs(&signs)?;
    let directions = resolve_directions(&votes)?;
    let sw = seed_from_aggregate(&agg, &directions, &doc.features)?;
    seed_to_file(&sw, &args.out)?;

    let names: Vec<&str> = agg
        .ranking
        .order()
        .iter()
        .map(|&i| doc.features[i].as_str())
        .collect();
    println!("method: {}", method.name());
    println!("aggregate ranking: {}", names.join(" > "));
    if let Some(cost) = agg.cost {
        println!("kendall-tau cost: {cost}");
    }
    for (name, v) in sw.feature_names.iter().zip(&sw.values) {
        println!("  {name}: {v}");
    }
    if sw.degenerate {
        println!("warning: degenerate seed (all signed scores equal); weights are zero");
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_seed(args: SeedArgs) -> CliResult<()> {
    let _cfg = FileConfig::load(args.config.as_ref())?;
    let expected: Option<Vec<String>> = args
        .features
        .map(|raw| raw.split(',').map(|s| s.trim().to_string()).collect());
    let sw = seed_from_file(&args.file, expected.as_deref())?;
    println!("seed file: {}", args.file.display());
    println!("provenance: {}", sw.provenance.name());
    println!("degenerate: {}", sw.degenerate);
    for (name, v) in sw.feature_names.iter().zip(&sw.values) {
        println!("  {name}: {v}");
    }
    Ok(())
}

fn build_train_config(
    cfg: &FileConfig,
    init: &str,
    weights: Option<&PathBuf>,
    features: &[String],
    epochs: Option<usize>,
    learning_rate: Option<f64>,
    batch_size: Option<usize>,
    l2: Option<f64>,
    seed_jitter: Option<f64>,
    seed: u64,
) -> CliResult<TrainConfig> {
    let init = match init {
        "random" => {
            if weights.is_some() {
                return Err(usage("--weights is only valid with --init seeded"));
            }
            InitMode::Random
        }
        "seeded" => {
            let path = weights
                .ok_or_else(|| usage("--init seeded requires --weights"))?;
            InitMode::Seeded(seed_from_file(path, Some(features))?)
        }
        other => return Err(usage(format!("unknown init mode {other:?}"))),
    };
    let defaults = TrainConfig::default();
    Ok(TrainConfig {
        epochs: pick(epochs, cfg, "epochs", defaults.epochs)?,
        learning_rate: pick(learning_rate, cfg, "learning-rate", defaults.learning_rate)?,
        batch_size: pick(batch_size, cfg, "batch-size", defaults.batch_size)?,
        l2: pick(l2, cfg, "l2", defaults.l2)?,
        rng_seed: seed,
        init,
        seed_jitter: pick(seed_jitter, cfg, "seed-jitter", defaults.seed_jitter)?,
    })
}

fn run_train(args: TrainArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let seed = pick(args.seed, &cfg, "seed", 0)?;
    let model = pick(args.model, &cfg, "model", ModelKind::Mlp)?;
    let ds = load_dataset(&args.data, &args.label)?;
    let (train, _scaler) = standardize(&ds)?;
    let train_cfg = build_train_config(
        &cfg,
        &args.init,
        args.weights.as_ref(),
        ds.schema().feature_names(),
        args.epochs,
        args.learning_rate,
        args.batch_size,
        args.l2,
        args.seed_jitter,
        seed,
    )?;
    let (checkpoint, metrics) = match model {
        ModelKind::Svm => {
            let m = svm_train(&train, &train_cfg)?;
            let metrics = evaluate(&m, &train)?;
            (
                Checkpoint::Svm {
                    svm: m,
                    config: train_cfg,
                },
                metrics,
            )
        }
        ModelKind::Mlp => {
            let m = mlp_train(&train, &train_cfg)?;
            let metrics = evaluate(&m, &train)?;
            (
                Checkpoint::Mlp {
                    mlp: m,
                    config: train_cfg,
                },
                metrics,
            )
        }
    };
    checkpoint.save(&args.out)?;
    println!(
        "trained {} on {} rows: accuracy {:.4}, f1 {:.4} (tp {} fp {} fn {} tn {})",
        model.name(),
        train.len(),
        metrics.accuracy(),
        metrics.f1(),
        metrics.tp,
        metrics.fp,
        metrics.fn_,
        metrics.tn
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_explain(args: ExplainArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let layer = pick(args.layer, &cfg, "layer", 0)?;
    let steps = pick(args.steps, &cfg, "steps", 50)?;
    let mlp = match Checkpoint::load(&args.checkpoint)? {
        Checkpoint::Mlp { mlp, .. } => mlp,
        Checkpoint::Svm { .. } => {
            return Err(CliError::Domain(rankseed::Error::InvalidArgument(
                "explain requires an mlp checkpoint; svm importance is its weight vector".into(),
            )))
        }
    };
    let ds = load_dataset(&args.data, &args.label)?;
    let (scaled, _) = standardize(&ds)?;
    let attr_cfg = AttributionConfig {
        baseline: None,
        steps,
    };
    let result = match args.row {
        Some(i) => {
            let (x, _) = scaled.rows().get(i).ok_or_else(|| {
                rankseed::Error::InvalidArgument(format!(
                    "row {i} out of range (dataset has {} rows)",
                    scaled.len()
                ))
            })?;
            attribute(&mlp, layer, x, &attr_cfg)?
        }
        None => dataset_average_attributions(&mlp, &scaled, layer, &attr_cfg)?,
    };
    write_attribution_csv(&result, ds.schema(), &args.out)?;
    println!(
        "attributions over layer {} at {} steps (completeness gap {:.3e})",
        result.layer, result.steps, result.completeness_gap
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run_grid_cmd(args: GridArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let defaults = GridConfig::default();
    let sizes = match pick(args.sizes, &cfg, "sizes", String::new())? {
        s if s.is_empty() => defaults.sample_sizes.clone(),
        s => parse_list(&s, "size")?,
    };
    let rates = match pick(args.rates, &cfg, "rates", String::new())? {
        s if s.is_empty() => defaults.tp_rates.clone(),
        s => parse_list(&s, "rate")?,
    };
    let epochs = match pick(args.epochs, &cfg, "epochs", String::new())? {
        s if s.is_empty() => defaults.epoch_settings.clone(),
        s => parse_list(&s, "epoch")?,
    };
    let modes: Vec<GridInitMode> = match pick(args.modes, &cfg, "modes", String::new())? {
        s if s.is_empty() => defaults.init_modes.clone(),
        s => s
            .split(',')
            .map(|tok| tok.trim().parse().map_err(|e| usage(format!("bad mode: {e}"))))
            .collect::<CliResult<_>>()?,
    };
    let grid_cfg = GridConfig {
        sample_sizes: sizes,
        tp_rates: rates,
        epoch_settings: epochs,
        init_modes: modes,
        repetitions: pick(args.reps, &cfg, "reps", defaults.repetitions)?,
        base_seed: pick(args.seed, &cfg, "seed", 0)?,
        model: pick(args.model, &cfg, "model", defaults.model)?,
        record_timings: args.timings,
        ..defaults
    };

    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| usage(format!("--jobs: {e}")))?;
    }

    let ds = load_dataset(&args.data, &args.label)?;
    let profile_parts = match &args.profile {
        Some(path) => {
            let doc = ProfileDocument::load(path)?;
            Some(doc.to_profile(Some(ds.schema()))?)
        }
        None => None,
    };
    let grid = run_grid(
        &grid_cfg,
        &ds,
        profile_parts.as_ref().map(|(p, s)| (p, s.as_slice())),
    )?;
    write_results_csv(&grid, &args.out)?;
    println!(
        "grid complete: {} records ({} skipped)",
        grid.records.len(),
        grid.skipped()
    );
    println!("wrote {}", args.out.display());
    if let Some(report_path) = &args.report {
        let rows = seeded_vs_random_report(&grid)?;
        write_report_csv(&rows, report_path)?;
        println!("wrote {}", report_path.display());
    }
    Ok(())
}

fn run_synth(args: SynthArgs) -> CliResult<()> {
    let cfg = FileConfig::load(args.config.as_ref())?;
    let seed = pick(args.seed, &cfg, "seed", 0)?;
    let weights = match pick(args.weights, &cfg, "weights", String::new())? {
        s if s.is_empty() => {
            let f = pick(args.features, &cfg, "features", 12)?;
            SyntheticSpec::default_weights(f)
        }
        s => parse_list(&s, "weight")?,
    };
    let spec = SyntheticSpec {
        weights,
        rows: pick(args.rows, &cfg, "rows", 6400)?,
        noise_scale: pick(args.noise, &cfg, "noise", 0.25)?,
        users: pick(args.users, &cfg, "users", 5)?,
        perturbation: pick(args.perturbation, &cfg, "perturbation", 0.1)?,
    };
    let (ds, doc) = generate_synthetic(&spec, seed)?;
    write_csv(&ds, &args.out_data)?;
    doc.save(&args.out_profile)?;
    println!(
        "generated {} rows over {} features ({} positive) and {} simulated users",
        ds.len(),
        ds.schema().feature_count(),
        ds.positives(),
        doc.users.len()
    );
    println!("wrote {}", args.out_data.display());
    println!("wrote {}", args.out_profile.display());
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Elicit(args) => run_elicit(args),
        Command::Aggregate(args) => run_aggregate(args),
        Command::Seed(args) => run_seed(args),
        Command::Train(args) => run_train(args),
        Command::Explain(args) => run_explain(args),
        Command::Grid(args) => run_grid_cmd(args),
        Command::Synth(args) => run_synth(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
