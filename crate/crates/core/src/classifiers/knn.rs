//! k-nearest-neighbour classifier (Euclidean metric).
//!
//! The `k` closest training vectors vote. Vote ties are broken by the
//! smaller summed distance of the tied classes, then by label order.
//! Equidistant neighbours are ordered by training index.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::svm::squared_distance;
use super::{check_dim, ClassifierError, LabeledDataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub labels: Vec<String>,
    pub dim: usize,
    pub k: usize,
    pub vectors: Vec<Vec<f64>>,
    pub targets: Vec<usize>,
}

pub fn knn_train(data: &LabeledDataset, k: usize) -> Result<KnnModel, ClassifierError> {
    data.check_trainable()?;
    if k == 0 || k.is_multiple_of(2) {
        return Err(ClassifierError::InvalidParameter(format!(
            "k must be a positive odd integer, got {k}"
        )));
    }
    if k > data.len() {
        return Err(ClassifierError::InvalidParameter(format!(
            "k = {k} exceeds the {} training samples",
            data.len()
        )));
    }
    Ok(KnnModel {
        labels: data.labels().to_vec(),
        dim: data.dim(),
        k,
        vectors: data.vectors().to_vec(),
        targets: data.targets().to_vec(),
    })
}

/// Heap entry ordered by `(squared distance, index)`.
#[derive(PartialEq)]
struct Candidate(f64, usize);

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl KnnModel {
    /// Training indices of the `k` nearest vectors, closest first.
    pub fn neighbours(&self, x: &[f64]) -> Result<Vec<(usize, f64)>, ClassifierError> {
        check_dim(self.dim, x)?;
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(self.k + 1);
        for (i, v) in self.vectors.iter().enumerate() {
            let c = Candidate(squared_distance(v, x), i);
            if heap.len() < self.k {
                heap.push(c);
            } else if heap.peek().is_some_and(|worst| c < *worst) {
                heap.pop();
                heap.push(c);
            }
        }
        Ok(heap
            .into_sorted_vec()
            .into_iter()
            .map(|Candidate(d2, i)| (i, d2.sqrt()))
            .collect())
    }

    /// `(label index, neighbour count per class)`.
    pub fn predict_with_counts(&self, x: &[f64]) -> Result<(usize, Vec<usize>), ClassifierError> {
        let nb = self.neighbours(x)?;
        let mut counts = vec![0usize; self.labels.len()];
        let mut dist = vec![0.0f64; self.labels.len()];
        for (i, d) in nb {
            counts[self.targets[i]] += 1;
            dist[self.targets[i]] += d;
        }
        let mut best = 0;
        for c in 1..counts.len() {
            let better = counts[c] > counts[best] || (counts[c] == counts[best] && dist[c] < dist[best]);
            if better {
                best = c;
            }
        }
        Ok((best, counts))
    }
}

pub fn knn_predict(model: &KnnModel, x: &[f64]) -> Result<String, ClassifierError> {
    let (i, _) = model.predict_with_counts(x)?;
    Ok(model.labels[i].clone())
}
