//! Classifiers over flattened per-sequence feature vectors.
//!
//! Three learners share [`LabeledDataset`] as input: a one-vs-all Gaussian
//! kernel SVM ([`svm`]), a bagged ensemble of Gini decision trees
//! ([`ensemble`]) and a k-nearest-neighbour memory ([`knn`]). Class labels
//! are kept in ascending order everywhere and every tie resolves to the
//! lowest label.

pub mod ensemble;
pub mod knn;
pub mod persist;
pub mod svm;
pub mod tree;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureMatrix;

pub use ensemble::{edt_predict, edt_train, BootstrapMode, EdtParams, EnsembleModel};
pub use knn::{knn_predict, knn_train, KnnModel};
pub use persist::{load_model, save_model};
pub use svm::{gaussian_kernel, svm_predict, svm_train, SvmModel, SvmParams};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("training needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {0:?} has no training samples")]
    EmptyClass(String),
    #[error("label {0:?} is not in the declared label set")]
    UnknownLabel(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate training data: all samples identical but labels differ")]
    TrainingDegenerate,
    #[error("invalid bootstrap: {0}")]
    InvalidBootstrap(String),
    #[error("solver did not converge within {0} iterations")]
    ConvergenceFailure(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("model format error: {0}")]
    ModelFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Row-major concatenation of a `T x cols` feature matrix.
pub fn flatten_sequence(m: &FeatureMatrix) -> Vec<f64> {
    m.as_slice().to_vec()
}

/// Fixed-length feature vectors with class labels.
///
/// The label set is sorted ascending; sample targets are indices into it.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    labels: Vec<String>,
    vectors: Vec<Vec<f64>>,
    targets: Vec<usize>,
    dim: usize,
}

impl LabeledDataset {
    /// Builds a dataset whose label set is the distinct labels of `samples`.
    pub fn new(samples: Vec<(Vec<f64>, String)>) -> Result<Self, ClassifierError> {
        let set: BTreeSet<String> = samples.iter().map(|(_, l)| l.clone()).collect();
        Self::with_labels(set.into_iter().collect(), samples)
    }

    /// Builds a dataset against a declared label set, which may contain
    /// classes without samples.
    pub fn with_labels(
        labels: Vec<String>,
        samples: Vec<(Vec<f64>, String)>,
    ) -> Result<Self, ClassifierError> {
        let labels: Vec<String> = labels
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let dim = samples
            .first()
            .map(|(v, _)| v.len())
            .ok_or(ClassifierError::EmptyDataset)?;
        let mut vectors = Vec::with_capacity(samples.len());
        let mut targets = Vec::with_capacity(samples.len());
        for (v, l) in samples {
            if v.len() != dim {
                return Err(ClassifierError::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ClassifierError::InvalidParameter(
                    "feature vector contains a non-finite value".into(),
                ));
            }
            let t = labels
                .binary_search(&l)
                .map_err(|_| ClassifierError::UnknownLabel(l.clone()))?;
            vectors.push(v);
            targets.push(t);
        }
        Ok(LabeledDataset {
            labels,
            vectors,
            targets,
            dim,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn label_of(&self, i: usize) -> &str {
        &self.labels[self.targets[i]]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    /// Total number of stored scalars (`samples x dim`).
    pub fn scalar_count(&self) -> usize {
        self.len() * self.dim
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.labels.len()];
        for &t in &self.targets {
            c[t] += 1;
        }
        c
    }

    /// Samples at `indices`, keeping the full label set.
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            labels: self.labels.clone(),
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            dim: self.dim,
        }
    }

    /// Checks the training preconditions: two or more classes, each with
    /// at least one sample.
    pub fn check_trainable(&self) -> Result<(), ClassifierError> {
        if self.is_empty() {
            return Err(ClassifierError::EmptyDataset);
        }
        if self.labels.len() < 2 {
            return Err(ClassifierError::TooFewClasses(self.labels.len()));
        }
        if let Some(k) = self.class_counts().iter().position(|&c| c == 0) {
            return Err(ClassifierError::EmptyClass(self.labels[k].clone()));
        }
        Ok(())
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<(), ClassifierError> {
    if x.len() != expected {
        return Err(ClassifierError::DimensionMismatch {
            expected,
            got: x.len(),
        });
    }
    Ok(())
}

/// Index of the largest value; ties go to the lowest index.
pub(crate) fn argmax_first<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Which learner to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Svm,
    Edt,
    Knn,
}

impl std::str::FromStr for ClassifierKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svm" => Ok(ClassifierKind::Svm),
            "edt" => Ok(ClassifierKind::Edt),
            "knn" => Ok(ClassifierKind::Knn),
            other => Err(format!("unknown classifier {other:?}")),
        }
    }
}

impl std::fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassifierKind::Svm => "svm",
            ClassifierKind::Edt => "edt",
            ClassifierKind::Knn => "knn",
        })
    }
}

/// Hyperparameters for any of the three learners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassifierSpec {
    Svm(SvmParams),
    Edt(EdtParams),
    Knn { k: usize },
}

impl ClassifierSpec {
    pub fn default_for(kind: ClassifierKind) -> Self {
        match kind {
            ClassifierKind::Svm => ClassifierSpec::Svm(SvmParams::default()),
            ClassifierKind::Edt => ClassifierSpec::Edt(EdtParams::default()),
            ClassifierKind::Knn => ClassifierSpec::Knn { k: 1 },
        }
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            ClassifierSpec::Svm(_) => ClassifierKind::Svm,
            ClassifierSpec::Edt(_) => ClassifierKind::Edt,
            ClassifierSpec::Knn { .. } => ClassifierKind::Knn,
        }
    }

    pub fn train(&self, data: &LabeledDataset) -> Result<TrainedModel, ClassifierError> {
        Ok(match self {
            ClassifierSpec::Svm(p) => TrainedModel::Svm(svm_train(data, p)?),
            ClassifierSpec::Edt(p) => TrainedModel::Edt(edt_train(data, p)?),
            ClassifierSpec::Knn { k } => TrainedModel::Knn(knn_train(data, *k)?),
        })
    }
}

/// Any trained classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrainedModel {
    Svm(SvmModel),
    Edt(EnsembleModel),
    Knn(KnnModel),
}

/// A prediction with its per-class scores (SVM decision values, tree vote
/// counts, or neighbour counts).
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub index: usize,
    pub label: String,
    pub scores: Vec<f64>,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self {
            TrainedModel::Svm(_) => ClassifierKind::Svm,
            TrainedModel::Edt(_) => ClassifierKind::Edt,
            TrainedModel::Knn(_) => ClassifierKind::Knn,
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            TrainedModel::Svm(m) => &m.labels,
            TrainedModel::Edt(m) => &m.labels,
            TrainedModel::Knn(m) => &m.labels,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            TrainedModel::Svm(m) => m.dim,
            TrainedModel::Edt(m) => m.dim,
            TrainedModel::Knn(m) => m.dim,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction, ClassifierError> {
        let (index, scores) = match self {
            TrainedModel::Svm(m) => {
                let (i, s) = m.predict(x)?;
                (i, s)
            }
            TrainedModel::Edt(m) => {
                let (i, votes) = m.predict(x)?;
                (i, votes.into_iter().map(|v| v as f64).collect())
            }
            TrainedModel::Knn(m) => {
                let (i, counts) = m.predict_with_counts(x)?;
                (i, counts.into_iter().map(|v| v as f64).collect())
            }
        };
        Ok(Prediction {
            index,
            label: self.labels()[index].clone(),
            scores,
        })
    }

    pub fn predict_many(&self, xs: &[Vec<f64>]) -> Result<Vec<usize>, ClassifierError> {
        xs.iter().map(|x| self.predict(x).map(|p| p.index)).collect()
    }

    /// Fraction of `data` classified correctly. Labels are matched by name.
    pub fn accuracy_on(&self, data: &LabeledDataset) -> Result<f64, ClassifierError> {
        if data.is_empty() {
            return Err(ClassifierError::EmptyDataset);
        }
        let mut correct = 0usize;
        for (i, x) in data.vectors().iter().enumerate() {
            if self.predict(x)?.label == data.label_of(i) {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(rows: &[(&[f64], &str)]) -> Result<LabeledDataset, ClassifierError> {
        LabeledDataset::new(rows.iter().map(|(v, l)| (v.to_vec(), l.to_string())).collect())
    }

    #[test]
    fn labels_sorted_and_targets_indexed() {
        let d = ds(&[(&[1.0], "b"), (&[2.0], "a"), (&[3.0], "b")]).unwrap();
        assert_eq!(d.labels(), ["a", "b"]);
        assert_eq!(d.targets(), [1, 0, 1]);
        assert_eq!(d.class_counts(), [1, 2]);
        assert_eq!(d.scalar_count(), 3);
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            ds(&[(&[1.0, 2.0], "a"), (&[1.0], "b")]),
            Err(ClassifierError::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(matches!(ds(&[]), Err(ClassifierError::EmptyDataset)));
        let r = LabeledDataset::with_labels(vec!["a".into()], vec![(vec![1.0], "z".into())]);
        assert!(matches!(r, Err(ClassifierError::UnknownLabel(l)) if l == "z"));
    }

    #[test]
    fn trainability() {
        let one = ds(&[(&[1.0], "a"), (&[2.0], "a")]).unwrap();
        assert!(matches!(
            one.check_trainable(),
            Err(ClassifierError::TooFewClasses(1))
        ));
        let declared = LabeledDataset::with_labels(
            vec!["a".into(), "b".into(), "c".into()],
            vec![(vec![1.0], "a".into()), (vec![2.0], "b".into())],
        )
        .unwrap();
        assert!(matches!(
            declared.check_trainable(),
            Err(ClassifierError::EmptyClass(l)) if l == "c"
        ));
    }

    #[test]
    fn flatten_is_row_major() {
        let m = FeatureMatrix::from_rows(2, &[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(flatten_sequence(&m), [1.0, 2.0, 3.0, 4.0]);
        let one = FeatureMatrix::from_rows(6, &[[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(flatten_sequence(&one), one.row(0));
    }

    #[test]
    fn argmax_ties_go_low() {
        assert_eq!(argmax_first(&[1, 3, 3, 2]), 1);
        assert_eq!(argmax_first(&[0.5]), 0);
    }
}
