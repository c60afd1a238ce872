//! Synthetic data and end-to-end experiments.
//!
//! Recorded gesture data is not bundled, so this module generates it:
//! keyframed [`GestureTemplate`]s are sampled at `T` uniform times and
//! jittered with seeded Gaussian noise. Datasets, stratified splits and
//! whole experiments built on top are pure functions of their config and
//! seed. Sample `i` of a dataset always draws from RNG stream `i`, so
//! parallel generation gives the same bytes as sequential.

mod dataset;
mod experiment;
mod generate;
mod templates;

use thiserror::Error;

use crate::classifiers::ClassifierError;
use crate::evaluation::EvalError;
use crate::features::FeatureError;
use crate::skeleton::{Joint, SkeletonError};

pub use dataset::{
    build_dataset, build_dataset_from_templates, export_dataset, featurize_corpus,
    generate_corpus, read_manifest, split, split_indices, write_manifest, LabeledSequence,
    MANIFEST_NAME,
};
pub use experiment::{
    run_experiment, ClassifierConfig, EvaluationReport, ExperimentConfig, Timings,
    CONFIG_VERSION,
};
pub use generate::{
    classify_interaction, generate_interaction, generate_sequence, generate_sequence_stream,
    Interaction,
};
pub use templates::{
    interaction_template, single_person_template, standing_template, GestureTemplate, JointPath,
    BENCHMARK_GESTURES, DEFAULT_NOISE_STD, INTERACTION_ACTIONS, INTERACTION_PRESETS, MAX_DEPTH,
    MIN_DEPTH, RIGHT_PERSON_X, RIGHT_PERSON_Z, SINGLE_PERSON_GESTURES,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("no built-in template named {0:?}")]
    UnknownTemplate(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("frame {frame}, joint {joint:?}: depth {depth:.4} m outside the sensor range")]
    DepthRangeViolation { frame: usize, joint: Joint, depth: f64 },
    #[error("class {label:?} has {count} sample(s); a stratified split needs at least 2")]
    StratifyError { label: String, count: usize },
    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),
    #[error("config write error: {0}")]
    ConfigWrite(#[from] toml::ser::Error),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
