//! Unpruned binary decision tree with axis-aligned Gini splits.
//!
//! Nodes split on `x[feature] <= threshold` (left) until they are pure or
//! hold fewer than two samples. Candidate thresholds are midpoints between
//! consecutive distinct feature values; among equally good splits the
//! lowest feature index, then the lowest threshold, wins.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Node {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Nodes stored in a flat arena; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    /// Grows a tree on `samples` (indices into `xs`, repeats allowed).
    pub fn fit(xs: &[Vec<f64>], targets: &[usize], n_classes: usize, samples: &[usize]) -> Self {
        assert!(!samples.is_empty(), "cannot grow a tree on zero samples");
        let mut nodes = Vec::new();
        // (node slot, samples reaching it)
        let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
        nodes.push(Node::Leaf { class: 0 });
        stack.push((0, samples.to_vec()));
        while let Some((slot, idx)) = stack.pop() {
            let counts = class_counts(targets, n_classes, &idx);
            let majority = super::argmax_first(&counts);
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            if pure || idx.len() < 2 {
                nodes[slot] = Node::Leaf { class: majority };
                continue;
            }
            match best_split(xs, targets, n_classes, &idx) {
                None => nodes[slot] = Node::Leaf { class: majority },
                Some((feature, threshold)) => {
                    let (l, r): (Vec<usize>, Vec<usize>) =
                        idx.iter().partition(|&&i| xs[i][feature] <= threshold);
                    let left = nodes.len();
                    nodes.push(Node::Leaf { class: 0 });
                    let right = nodes.len();
                    nodes.push(Node::Leaf { class: 0 });
                    nodes[slot] = Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    };
                    stack.push((right, r));
                    stack.push((left, l));
                }
            }
        }
        DecisionTree { nodes }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &DecisionTree, at: usize) -> usize {
            match t.nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    /// Structural check used when loading a stored tree: child links point
    /// forward inside the arena and leaf classes are in range.
    pub fn validate(&self, n_classes: usize, dim: usize) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("tree has no nodes".into());
        }
        for (i, n) in self.nodes.iter().enumerate() {
            match *n {
                Node::Leaf { class } if class >= n_classes => {
                    return Err(format!("node {i}: class {class} out of range"))
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    if feature >= dim || !threshold.is_finite() {
                        return Err(format!("node {i}: bad split"));
                    }
                    if left <= i || right <= i || left >= self.nodes.len() || right >= self.nodes.len()
                    {
                        return Err(format!("node {i}: bad child link"));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn class_counts(targets: &[usize], n_classes: usize, idx: &[usize]) -> Vec<usize> {
    let mut c = vec![0; n_classes];
    for &i in idx {
        c[targets[i]] += 1;
    }
    c
}

/// Sum of squared class counts over size; larger means purer.
/// Weighted Gini `n_l G_l + n_r G_r = n - (score_l + score_r)`.
fn purity(counts: &[usize], n: usize) -> f64 {
    let sq: usize = counts.iter().map(|c| c * c).sum();
    sq as f64 / n as f64
}

#[allow(clippy::needless_range_loop)]
fn best_split(
    xs: &[Vec<f64>],
    targets: &[usize],
    n_classes: usize,
    idx: &[usize],
) -> Option<(usize, f64)> {
    let n = idx.len();
    let dim = xs[idx[0]].len();
    let total = class_counts(targets, n_classes, idx);
    let mut best: Option<(f64, usize, f64)> = None;
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
    let mut left = vec![0usize; n_classes];
    let mut right = vec![0usize; n_classes];
    for f in 0..dim {
        order.clear();
        order.extend(idx.iter().map(|&i| (xs[i][f], targets[i])));
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        if order[0].0 == order[n - 1].0 {
            continue;
        }
        left.iter_mut().for_each(|c| *c = 0);
        right.copy_from_slice(&total);
        for k in 0..n - 1 {
            let (v, t) = order[k];
            left[t] += 1;
            right[t] -= 1;
            let next = order[k + 1].0;
            if v == next {
                continue;
            }
            let score = purity(&left, k + 1) + purity(&right, n - k - 1);
            if best.is_none_or(|(s, _, _)| score > s) {
                let mut thr = v + (next - v) / 2.0;
                if !(thr < next) {
                    thr = v;
                }
                best = Some((score, f, thr));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}
