//! Bagged decision-tree ensemble.
//!
//! Every tree is grown on its own bootstrap resample (drawn with
//! replacement) and the ensemble predicts by majority vote. Tree `i` draws
//! its resample from ChaCha8 seeded with the ensemble seed on stream `i`,
//! so training is reproducible bit for bit and independent of how many
//! threads grow the trees.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::DecisionTree;
use super::{argmax_first, check_dim, ClassifierError, LabeledDataset};

/// How each tree's training sample is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapMode {
    /// Sample `ceil(fraction * n)` indices with replacement.
    #[default]
    Resample,
    /// Use the first `ceil(fraction * n)` samples in order, no randomness.
    /// Meant for tests that need a tree on a known sample.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdtParams {
    pub trees: usize,
    pub bootstrap_fraction: f64,
    pub seed: u64,
    #[serde(default)]
    pub bootstrap: BootstrapMode,
}

impl Default for EdtParams {
    fn default() -> Self {
        EdtParams {
            trees: 100,
            bootstrap_fraction: 0.30,
            seed: 0,
            bootstrap: BootstrapMode::Resample,
        }
    }
}

impl EdtParams {
    pub fn with_seed(seed: u64) -> Self {
        EdtParams {
            seed,
            ..EdtParams::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    pub labels: Vec<String>,
    pub dim: usize,
    pub bootstrap_fraction: f64,
    pub seed: u64,
    pub trees: Vec<DecisionTree>,
}

impl EnsembleModel {
    /// Per-class vote counts; they sum to the number of trees.
    pub fn votes(&self, x: &[f64]) -> Result<Vec<usize>, ClassifierError> {
        check_dim(self.dim, x)?;
        let mut v = vec![0usize; self.labels.len()];
        for t in &self.trees {
            v[t.predict(x)] += 1;
        }
        Ok(v)
    }

    pub fn predict(&self, x: &[f64]) -> Result<(usize, Vec<usize>), ClassifierError> {
        let v = self.votes(x)?;
        Ok((argmax_first(&v), v))
    }
}

/// Number of samples per bootstrap, `ceil(fraction * n)`.
///
/// Products within 1e-9 of an integer are taken as that integer so that
/// e.g. `0.3 * 240` gives 72 rather than 73.
pub fn bootstrap_size(fraction: f64, n: usize) -> Result<usize, ClassifierError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(ClassifierError::InvalidBootstrap(format!(
            "fraction {fraction} is outside (0, 1]"
        )));
    }
    let raw = fraction * n as f64;
    if raw < 1.0 - 1e-9 {
        return Err(ClassifierError::InvalidBootstrap(format!(
            "{fraction} of {n} samples is less than one sample"
        )));
    }
    let size = if (raw - raw.round()).abs() < 1e-9 {
        raw.round()
    } else {
        raw.ceil()
    };
    Ok((size as usize).clamp(1, n))
}

/// Indices of tree `tree`'s bootstrap sample.
pub fn bootstrap_indices(
    seed: u64,
    tree: usize,
    n: usize,
    size: usize,
    mode: BootstrapMode,
) -> Vec<usize> {
    match mode {
        BootstrapMode::Identity => (0..size).collect(),
        BootstrapMode::Resample => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(tree as u64);
            (0..size)
                .map(|_| rng.random_range(0..n as u64) as usize)
                .collect()
        }
    }
}

pub fn edt_train(data: &LabeledDataset, params: &EdtParams) -> Result<EnsembleModel, ClassifierError> {
    data.check_trainable()?;
    if params.trees == 0 {
        return Err(ClassifierError::InvalidParameter(
            "ensemble needs at least one tree".into(),
        ));
    }
    let n = data.len();
    let size = bootstrap_size(params.bootstrap_fraction, n)?;
    let trees = (0..params.trees)
        .into_par_iter()
        .map(|t| {
            let idx = bootstrap_indices(params.seed, t, n, size, params.bootstrap);
            DecisionTree::fit(data.vectors(), data.targets(), data.n_classes(), &idx)
        })
        .collect();
    Ok(EnsembleModel {
        labels: data.labels().to_vec(),
        dim: data.dim(),
        bootstrap_fraction: params.bootstrap_fraction,
        seed: params.seed,
        trees,
    })
}

/// `(label, per-class vote counts)`.
pub fn edt_predict(
    model: &EnsembleModel,
    x: &[f64],
) -> Result<(String, Vec<usize>), ClassifierError> {
    let (i, v) = model.predict(x)?;
    Ok((model.labels[i].clone(), v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::tree::Node;

    fn line_data() -> LabeledDataset {
        LabeledDataset::new(
            (0..40)
                .map(|i| {
                    let x = i as f64;
                    let l = if i < 20 { "lo" } else { "hi" };
                    (vec![x, (x * 0.37).sin()], l.to_string())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bootstrap_sizes() {
        assert_eq!(bootstrap_size(0.3, 240).unwrap(), 72);
        assert_eq!(bootstrap_size(0.3, 100).unwrap(), 30);
        assert_eq!(bootstrap_size(0.3, 10).unwrap(), 3);
        assert_eq!(bootstrap_size(0.3, 11).unwrap(), 4);
        assert_eq!(bootstrap_size(1.0, 7).unwrap(), 7);
        assert!(matches!(
            bootstrap_size(0.3, 3),
            Err(ClassifierError::InvalidBootstrap(_))
        ));
        assert!(bootstrap_size(0.0, 10).is_err());
        assert!(bootstrap_size(1.5, 10).is_err());
    }

    #[test]
    fn streams_differ_per_tree_and_repeat_per_seed() {
        let a = bootstrap_indices(42, 0, 100, 30, BootstrapMode::Resample);
        let b = bootstrap_indices(42, 1, 100, 30, BootstrapMode::Resample);
        assert_ne!(a, b);
        assert_eq!(a, bootstrap_indices(42, 0, 100, 30, BootstrapMode::Resample));
        assert!(a.iter().all(|&i| i < 100));
    }

    #[test]
    fn exact_tree_count_and_vote_sum() {
        let data = line_data();
        let m = edt_train(&data, &EdtParams::with_seed(3)).unwrap();
        assert_eq!(m.trees.len(), 100);
        let (_, v) = edt_predict(&m, &[5.0, 0.0]).unwrap();
        assert_eq!(v.iter().sum::<usize>(), 100);
    }

    #[test]
    fn same_seed_same_model() {
        let data = line_data();
        let a = edt_train(&data, &EdtParams::with_seed(42)).unwrap();
        let b = edt_train(&data, &EdtParams::with_seed(42)).unwrap();
        assert_eq!(a, b);
        for q in [[3.0, 0.1], [19.5, -0.5], [25.0, 0.9]] {
            assert_eq!(edt_predict(&a, &q).unwrap(), edt_predict(&b, &q).unwrap());
        }
    }

    #[test]
    fn single_identity_tree_matches_its_tree() {
        let data = line_data();
        let params = EdtParams {
            trees: 1,
            bootstrap_fraction: 1.0,
            seed: 0,
            bootstrap: BootstrapMode::Identity,
        };
        let m = edt_train(&data, &params).unwrap();
        let tree_acc = data
            .vectors()
            .iter()
            .zip(data.targets())
            .filter(|(x, &t)| m.trees[0].predict(x) == t)
            .count();
        let ens_acc = data
            .vectors()
            .iter()
            .zip(data.targets())
            .filter(|(x, &t)| m.predict(x).unwrap().0 == t)
            .count();
        assert_eq!(tree_acc, ens_acc);
        assert_eq!(ens_acc, data.len());
    }

    #[test]
    fn unanimous_trees() {
        let m = EnsembleModel {
            labels: vec!["A".into(), "B".into()],
            dim: 1,
            bootstrap_fraction: 0.3,
            seed: 0,
            trees: vec![
                DecisionTree {
                    nodes: vec![Node::Leaf { class: 0 }]
                };
                7
            ],
        };
        assert_eq!(edt_predict(&m, &[9.0]).unwrap(), ("A".to_string(), vec![7, 0]));
    }

    #[test]
    fn vote_tie_goes_to_lower_label() {
        let m = EnsembleModel {
            labels: vec!["A".into(), "B".into()],
            dim: 1,
            bootstrap_fraction: 0.3,
            seed: 0,
            trees: vec![
                DecisionTree {
                    nodes: vec![Node::Leaf { class: 1 }],
                },
                DecisionTree {
                    nodes: vec![Node::Leaf { class: 0 }],
                },
            ],
        };
        assert_eq!(edt_predict(&m, &[0.0]).unwrap().0, "A");
    }

    #[test]
    fn too_small_bootstrap() {
        let data = LabeledDataset::new(vec![
            (vec![0.0], "a".into()),
            (vec![1.0], "b".into()),
        ])
        .unwrap();
        assert!(matches!(
            edt_train(&data, &EdtParams::with_seed(1)),
            Err(ClassifierError::InvalidBootstrap(_))
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let m = edt_train(&line_data(), &EdtParams::with_seed(1)).unwrap();
        assert!(matches!(
            edt_predict(&m, &[1.0, 2.0, 3.0]),
            Err(ClassifierError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }
}
