//! The `skelgest` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or format error,
//! 3 computation error. Data goes to stdout only when no output file is
//! named; diagnostics always go to stderr. The default seed is read from
//! the `SKELGEST_SEED` environment variable.
//!
//! Labels travel in a headerless `filename,label` manifest whose file
//! names point at feature CSVs (as written by `extract-features`), so the
//! feature files stay plain matrices.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::classifiers::{
    flatten_sequence, load_model, save_model, ClassifierError, ClassifierKind, LabeledDataset,
};
use crate::evaluation::{confusion, friedman, rank_algorithms, read_score_grid, EvalError, MetricsReport};
use crate::features::{FeatureError, FeatureKind, FeatureMatrix};
use crate::harness::{
    export_dataset, featurize_corpus, generate_corpus, read_manifest, write_manifest,
    ClassifierConfig, ExperimentConfig, HarnessError, BENCHMARK_GESTURES, CONFIG_VERSION,
    DEFAULT_NOISE_STD,
};
use crate::skeleton::{
    parse_skeleton_stream, read_skeleton_csv, serialize_skeleton_stream, SkeletonError,
    SkeletonSequence,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "SKELGEST_SEED";

/// Name of the feature manifest `gen-synth --extract` writes.
pub const FEATURE_MANIFEST_NAME: &str = "features.csv";

#[derive(Debug, Parser)]
#[command(name = "skelgest", version, about = "Skeleton-based gesture recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-frame features of one skeleton file, as CSV
    ExtractFeatures(ExtractArgs),
    /// Train a classifier on labelled feature files
    Train(TrainArgs),
    /// Label feature files with a trained model
    Predict(PredictArgs),
    /// Score a model on labelled feature files
    Evaluate(EvaluateArgs),
    /// Friedman rank test over an algorithms x datasets score grid
    Friedman(FriedmanArgs),
    /// Generate a synthetic labelled skeleton corpus
    GenSynth(GenSynthArgs),
    /// Check that a skeleton file survives parse, serialize, parse unchanged
    RoundTripCheck(RoundTripArgs),
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Skeleton file: flat-float text, or CSV when the name ends in `.csv`
    #[arg(long)]
    input: PathBuf,
    /// `single` or `two-person`
    #[arg(long)]
    mode: FeatureKind,
    /// Mirror in x first (for the left-hand person of a pair)
    #[arg(long)]
    mirror: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Manifest of `feature_csv,label` lines
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    model: ClassifierKind,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// SVM kernel width
    #[arg(long)]
    sigma: Option<f64>,
    /// SVM soft-margin penalty
    #[arg(long)]
    c: Option<f64>,
    /// Ensemble size
    #[arg(long)]
    trees: Option<usize>,
    /// Bootstrap size as a fraction of the training set
    #[arg(long)]
    bootstrap_fraction: Option<f64>,
    /// Neighbours for kNN (odd)
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Feature CSV to label; may be repeated
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    model: PathBuf,
    /// Manifest of `feature_csv,label` lines
    #[arg(long)]
    features: PathBuf,
    /// Per-class metrics CSV
    #[arg(long)]
    report: Option<PathBuf>,
    /// Confusion matrix CSV
    #[arg(long)]
    confusion: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FriedmanArgs {
    /// One row per algorithm: name followed by one score per dataset
    #[arg(long)]
    scores: PathBuf,
}

#[derive(Debug, Args)]
struct GenSynthArgs {
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Experiment config (TOML); replaces the generation flags below
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated class names (default: the eight-class benchmark)
    #[arg(long, value_delimiter = ',')]
    classes: Vec<String>,
    #[arg(long, default_value = "single")]
    mode: FeatureKind,
    #[arg(long, default_value_t = 30)]
    samples_per_class: usize,
    #[arg(long, default_value_t = 90)]
    frames: usize,
    #[arg(long, default_value_t = DEFAULT_NOISE_STD)]
    noise_std: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Also write per-sequence feature CSVs and a feature manifest
    #[arg(long)]
    extract: bool,
}

#[derive(Debug, Args)]
struct RoundTripArgs {
    #[arg(long)]
    input: PathBuf,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(m: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: m.into() }
    }

    fn compute(m: impl Into<String>) -> Self {
        CliError { code: EXIT_COMPUTE, message: m.into() }
    }
}

impl From<SkeletonError> for CliError {
    fn from(e: SkeletonError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        match e {
            ClassifierError::ModelFormat(_) | ClassifierError::Io(_) => CliError::input(e.to_string()),
            _ => CliError::compute(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::UnsupportedDegreesOfFreedom(_) | EvalError::InvalidRanks(_) => {
                CliError::compute(e.to_string())
            }
            _ => CliError::input(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Skeleton(e) => e.into(),
            HarnessError::Feature(e) => e.into(),
            HarnessError::Classifier(e) => e.into(),
            HarnessError::Eval(e) => e.into(),
            HarnessError::ConfigParse(_)
            | HarnessError::InvalidConfig(_)
            | HarnessError::UnknownTemplate(_)
            | HarnessError::Manifest(_)
            | HarnessError::Csv(_)
            | HarnessError::Io(_) => CliError::input(e.to_string()),
            _ => CliError::compute(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

fn with_path<E: Into<CliError>>(path: &Path) -> impl FnOnce(E) -> CliError + '_ {
    move |e| {
        let mut c = e.into();
        c.message = format!("{}: {}", path.display(), c.message);
        c
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::ExtractFeatures(a) => extract_features(a, stdout),
        Command::Train(a) => train(a, stderr),
        Command::Predict(a) => predict(a, stdout),
        Command::Evaluate(a) => evaluate(a, stdout, stderr),
        Command::Friedman(a) => friedman_cmd(a, stdout),
        Command::GenSynth(a) => gen_synth(a, stderr),
        Command::RoundTripCheck(a) => round_trip(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

/// Runs `f` against the named file, or stdout when `out` is `None`.
fn emit<F>(out: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(with_path(p))?);
            f(&mut w)?;
            w.flush().map_err(with_path(p))?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn read_sequence(path: &Path) -> Result<SkeletonSequence, CliError> {
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let seq = if is_csv {
        read_skeleton_csv(File::open(path).map_err(with_path(path))?)
    } else {
        parse_skeleton_stream(&std::fs::read_to_string(path).map_err(with_path(path))?)
    };
    seq.map_err(with_path(path))
}

fn extract_features(a: ExtractArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut seq = read_sequence(&a.input)?;
    if a.mirror {
        seq = seq.mirrored_x();
    }
    let m = a.mode.extract(&seq).map_err(with_path(&a.input))?;
    emit(a.out.as_deref(), stdout, |w| {
        Ok(m.write_csv(w, &a.mode.header(), true)?)
    })
}

fn read_features(path: &Path) -> Result<Vec<f64>, CliError> {
    let f = File::open(path).map_err(with_path(path))?;
    let m = FeatureMatrix::read_csv(f).map_err(with_path(path))?;
    Ok(flatten_sequence(&m))
}

fn read_labelled(manifest: &Path) -> Result<LabeledDataset, CliError> {
    let rows = read_manifest(manifest).map_err(with_path(manifest))?;
    let samples = rows
        .into_iter()
        .map(|(p, l)| Ok((read_features(&p)?, l)))
        .collect::<Result<Vec<_>, CliError>>()?;
    LabeledDataset::new(samples).map_err(with_path(manifest))
}

fn train(a: TrainArgs, stderr: &mut dyn Write) -> Result<(), CliError> {
    let data = read_labelled(&a.features)?;
    let spec = ClassifierConfig {
        kind: a.model,
        sigma: a.sigma,
        c: a.c,
        trees: a.trees,
        bootstrap_fraction: a.bootstrap_fraction,
        seed: Some(a.seed),
        k: a.k,
    }
    .to_spec(a.seed);
    let model = spec.train(&data)?;
    let acc = model.accuracy_on(&data)?;
    save_model(&model, &a.out).map_err(with_path(&a.out))?;
    writeln!(
        stderr,
        "trained {} on {} samples ({} classes); training accuracy {acc:.6}",
        a.model,
        data.len(),
        data.n_classes()
    )?;
    Ok(())
}

fn predict(a: PredictArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&a.model).map_err(with_path(&a.model))?;
    let mut rows = Vec::with_capacity(a.input.len());
    for p in &a.input {
        let x = read_features(p)?;
        let pred = model.predict(&x).map_err(with_path(p))?;
        rows.push((p.display().to_string(), pred.label));
    }
    emit(a.out.as_deref(), stdout, |w| {
        let mut cw = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        for (f, l) in &rows {
            cw.write_record([f, l]).map_err(|e| CliError::input(e.to_string()))?;
        }
        cw.flush()?;
        Ok(())
    })
}

fn evaluate(a: EvaluateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&a.model).map_err(with_path(&a.model))?;
    let data = read_labelled(&a.features)?;
    let predicted = model.predict_many(data.vectors())?;
    let truth: Vec<&str> = (0..data.len()).map(|i| data.label_of(i)).collect();
    let pred: Vec<&str> = predicted.iter().map(|&p| model.labels()[p].as_str()).collect();
    // Score against every label either side knows about.
    let mut labels: Vec<String> = model.labels().to_vec();
    labels.extend(data.labels().iter().cloned());
    labels.sort();
    labels.dedup();
    let cm = confusion(&labels, &truth, &pred)?;
    let report = MetricsReport::from_confusion(&cm)?;
    emit(a.report.as_deref(), stdout, |w| Ok(report.write_csv(w)?))?;
    if let Some(p) = &a.confusion {
        let f = File::create(p).map_err(with_path(p))?;
        cm.write_csv(f)?;
    }
    writeln!(
        stderr,
        "{} samples; accuracy {:.6}; macro accuracy {:.6}; macro f1 {:.6}",
        data.len(),
        report.overall_accuracy,
        report.macro_avg.accuracy,
        report.macro_avg.f1
    )?;
    Ok(())
}

fn friedman_cmd(a: FriedmanArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let f = File::open(&a.scores).map_err(with_path(&a.scores))?;
    let grid = read_score_grid(f).map_err(with_path(&a.scores))?;
    let ranks = rank_algorithms(&grid.scores)?;
    let result = friedman(&ranks)?;
    write!(stdout, "{}", result.render(&grid.algorithms))?;
    Ok(())
}

fn gen_synth(a: GenSynthArgs, stderr: &mut dyn Write) -> Result<(), CliError> {
    let config = match &a.config {
        Some(p) => ExperimentConfig::load(p).map_err(with_path(p))?,
        None => {
            let classes = if a.classes.is_empty() {
                BENCHMARK_GESTURES.iter().map(|s| s.to_string()).collect()
            } else {
                a.classes.clone()
            };
            ExperimentConfig {
                version: CONFIG_VERSION,
                features: a.mode,
                classes,
                samples_per_class: a.samples_per_class,
                frames: a.frames,
                seed: a.seed,
                noise_std: a.noise_std,
                ..ExperimentConfig::default()
            }
        }
    };
    config.validate()?;
    let templates = config.templates(config.features)?;
    let corpus = generate_corpus(&templates, config.samples_per_class, config.frames, config.seed)?;
    let manifest = export_dataset(&a.out, &corpus)?;
    if a.extract {
        let labels = templates.iter().map(|t| t.name.clone()).collect();
        // Featurize first so a degenerate sequence aborts before any file is written.
        let data = featurize_corpus(&corpus, labels, config.features)?;
        let mut rows = Vec::with_capacity(corpus.len());
        for (i, s) in corpus.iter().enumerate() {
            let name = format!("{i:05}_{}.features.csv", s.label);
            let m = config.features.extract(&s.sequence)?;
            let f = File::create(a.out.join(&name))?;
            m.write_csv(BufWriter::new(f), &config.features.header(), true)?;
            rows.push((name, s.label.clone()));
        }
        write_manifest(a.out.join(FEATURE_MANIFEST_NAME), &rows)?;
        writeln!(stderr, "features: {} vectors of length {}", data.len(), data.dim())?;
    }
    writeln!(
        stderr,
        "wrote {} sequences ({} classes) and {}",
        corpus.len(),
        templates.len(),
        manifest.display()
    )?;
    Ok(())
}

fn round_trip(a: RoundTripArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let seq = read_sequence(&a.input)?;
    let text = serialize_skeleton_stream(&seq)?;
    let back = parse_skeleton_stream(&text)?;
    if back.frames() != seq.frames() {
        let frame = seq
            .frames()
            .iter()
            .zip(back.frames())
            .position(|(x, y)| x != y)
            .map_or(back.len().min(seq.len()) + 1, |i| i + 1);
        return Err(CliError::compute(format!(
            "round trip changed the stream at frame {frame}"
        )));
    }
    if serialize_skeleton_stream(&back)? != text {
        return Err(CliError::compute("re-serialization is not stable"));
    }
    writeln!(stdout, "ok: {} frames round-trip exactly", seq.len())?;
    Ok(())
}
