use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::dataset::{build_dataset, split};
use super::templates::{
    interaction_template, single_person_template, GestureTemplate, BENCHMARK_GESTURES,
    DEFAULT_NOISE_STD,
};
use super::HarnessError;
use crate::classifiers::{ClassifierKind, ClassifierSpec, EdtParams, SvmParams};
use crate::evaluation::{confusion, ConfusionMatrix, MetricsReport};
use crate::features::FeatureKind;

pub const CONFIG_VERSION: u32 = 1;

/// Classifier choice with optional hyperparameter overrides.
///
/// Unset fields take the learner's defaults. An unset ensemble seed takes
/// the experiment seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl ClassifierConfig {
    pub fn new(kind: ClassifierKind) -> Self {
        ClassifierConfig {
            kind,
            sigma: None,
            c: None,
            trees: None,
            bootstrap_fraction: None,
            seed: None,
            k: None,
        }
    }

    pub fn to_spec(&self, default_seed: u64) -> ClassifierSpec {
        match self.kind {
            ClassifierKind::Svm => {
                let d = SvmParams::default();
                ClassifierSpec::Svm(SvmParams {
                    sigma: self.sigma.unwrap_or(d.sigma),
                    c: self.c.unwrap_or(d.c),
                    ..d
                })
            }
            ClassifierKind::Edt => {
                let d = EdtParams::default();
                ClassifierSpec::Edt(EdtParams {
                    trees: self.trees.unwrap_or(d.trees),
                    bootstrap_fraction: self.bootstrap_fraction.unwrap_or(d.bootstrap_fraction),
                    seed: self.seed.unwrap_or(default_seed),
                    ..d
                })
            }
            ClassifierKind::Knn => ClassifierSpec::Knn { k: self.k.unwrap_or(1) },
        }
    }
}

/// Everything an experiment depends on. Stored as TOML:
///
/// ```toml
/// version = 1
/// features = "single"          # or "two-person"
/// classes = ["waving", "clap"]
/// samples_per_class = 30
/// frames = 90                  # optional, default 90
/// seed = 7
/// noise_std = 0.01             # optional, meters
/// split_fraction = 0.8         # optional, training share
///
/// [classifier]
/// kind = "svm"                 # svm | edt | knn
/// sigma = 1.0                  # svm, optional
/// c = 10.0                     # svm, optional
/// trees = 100                  # edt, optional
/// bootstrap_fraction = 0.3     # edt, optional
/// seed = 7                     # edt, optional
/// k = 1                        # knn, optional
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    #[serde(default = "default_features")]
    pub features: FeatureKind,
    pub classes: Vec<String>,
    pub samples_per_class: usize,
    #[serde(default = "default_frames")]
    pub frames: usize,
    pub seed: u64,
    #[serde(default = "default_noise")]
    pub noise_std: f64,
    #[serde(default = "default_split")]
    pub split_fraction: f64,
    pub classifier: ClassifierConfig,
}

fn default_features() -> FeatureKind {
    FeatureKind::Single
}

fn default_frames() -> usize {
    90
}

fn default_noise() -> f64 {
    DEFAULT_NOISE_STD
}

fn default_split() -> f64 {
    0.8
}

impl Default for ExperimentConfig {
    /// The eight-class single-person benchmark: 30 sequences per class,
    /// seed 7, SVM.
    fn default() -> Self {
        ExperimentConfig {
            version: CONFIG_VERSION,
            features: FeatureKind::Single,
            classes: BENCHMARK_GESTURES.iter().map(|s| s.to_string()).collect(),
            samples_per_class: 30,
            frames: default_frames(),
            seed: 7,
            noise_std: DEFAULT_NOISE_STD,
            split_fraction: default_split(),
            classifier: ClassifierConfig::new(ClassifierKind::Svm),
        }
    }
}

impl ExperimentConfig {
    pub fn with_classifier(mut self, kind: ClassifierKind) -> Self {
        self.classifier = ClassifierConfig::new(kind);
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::InvalidConfig(m));
        if self.version != CONFIG_VERSION {
            return bad(format!("unsupported config version {}", self.version));
        }
        if self.classes.is_empty() {
            return bad("no classes listed".into());
        }
        if self.samples_per_class == 0 {
            return bad("samples_per_class must be at least 1".into());
        }
        if self.frames == 0 {
            return bad("frames must be at least 1".into());
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return bad(format!("split_fraction must lie in (0, 1), got {}", self.split_fraction));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return bad(format!("noise_std must be non-negative, got {}", self.noise_std));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.classes {
            if !seen.insert(c) {
                return bad(format!("class {c:?} listed twice"));
            }
        }
        Ok(())
    }

    /// Built-in templates for the listed classes, with this config's noise.
    pub fn templates(&self, kind: FeatureKind) -> Result<Vec<GestureTemplate>, HarnessError> {
        self.classes
            .iter()
            .map(|n| {
                let t = match kind {
                    FeatureKind::Single => single_person_template(n),
                    FeatureKind::TwoPerson => interaction_template(n),
                };
                t.map(|t| t.with_noise(self.noise_std))
                    .ok_or_else(|| HarnessError::UnknownTemplate(n.clone()))
            })
            .collect()
    }

    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let c: ExperimentConfig = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml_string(&self) -> Result<String, HarnessError> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    pub dataset: f64,
    pub train: f64,
    pub predict: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.dataset + self.train + self.predict
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub config: ExperimentConfig,
    pub train_size: usize,
    pub test_size: usize,
    pub training_accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
    pub timings: Timings,
}

impl EvaluationReport {
    /// Mean of the per-class one-vs-rest accuracies.
    pub fn macro_accuracy(&self) -> f64 {
        self.metrics.macro_avg.accuracy
    }

    /// Share of test samples labelled correctly.
    pub fn overall_accuracy(&self) -> f64 {
        self.metrics.overall_accuracy
    }

    /// Deterministic text rendering. Timings are left out so the same
    /// config always renders the same bytes; see [`Self::render_timings`].
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "features: {}\nclassifier: {}\nclasses: {}\nsamples per class: {}\nframes: {}\nseed: {}\nnoise std: {}\nsplit fraction: {}\n",
            c.features,
            c.classifier.kind,
            c.classes.join(", "),
            c.samples_per_class,
            c.frames,
            c.seed,
            c.noise_std,
            c.split_fraction
        );
        out.push_str(&format!(
            "train / test samples: {} / {}\ntraining accuracy: {:.6}\ntest accuracy: {:.6}\nmacro accuracy: {:.6}\nmacro f1: {:.6}\n\n",
            self.train_size,
            self.test_size,
            self.training_accuracy,
            self.overall_accuracy(),
            self.macro_accuracy(),
            self.metrics.macro_avg.f1
        ));
        out.push_str("confusion (rows true, columns predicted):\n");
        out.push_str(&self.confusion.render());
        out.push_str("\nper-class metrics:\n");
        let mut buf = Vec::new();
        self.metrics
            .write_csv(&mut buf)
            .expect("writing to memory cannot fail");
        out.push_str(&String::from_utf8(buf).expect("csv output is utf-8"));
        out
    }

    pub fn render_timings(&self) -> String {
        let t = &self.timings;
        format!(
            "dataset {:.3}s, train {:.3}s, predict {:.3}s, total {:.3}s\n",
            t.dataset,
            t.train,
            t.predict,
            t.total()
        )
    }
}

/// Generate, featurize, split, train, predict and evaluate.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EvaluationReport, HarnessError> {
    config.validate()?;
    let t0 = Instant::now();
    let data = build_dataset(config, config.features)?;
    let (train, test) = split(&data, config.split_fraction, config.seed)?;
    let t1 = Instant::now();
    let model = config.classifier.to_spec(config.seed).train(&train)?;
    let training_accuracy = model.accuracy_on(&train)?;
    let t2 = Instant::now();
    let predicted = model.predict_many(test.vectors())?;
    let t3 = Instant::now();
    let labels = data.labels();
    let truth: Vec<&str> = test.targets().iter().map(|&t| labels[t].as_str()).collect();
    let pred: Vec<&str> = predicted.iter().map(|&p| model.labels()[p].as_str()).collect();
    let cm = confusion(labels, &truth, &pred)?;
    let metrics = MetricsReport::from_confusion(&cm)?;
    Ok(EvaluationReport {
        config: config.clone(),
        train_size: train.len(),
        test_size: test.len(),
        training_accuracy,
        confusion: cm,
        metrics,
        timings: Timings {
            dataset: (t1 - t0).as_secs_f64(),
            train: (t2 - t1).as_secs_f64(),
            predict: (t3 - t2).as_secs_f64(),
        },
    })
}
