//! One-vs-all soft-margin SVM with a Gaussian kernel.
//!
//! Each class gets a binary machine trained against all other classes. The
//! dual problem is solved by sequential minimal optimisation with
//! second-order working-set selection:
//!
//! ```text
//! min_a  1/2 a^T Q a - e^T a   s.t.  0 <= a_i <= C,  y^T a = 0,
//! Q_ij = y_i y_j K(x_i, x_j),  K(x, z) = exp(-|x - z|^2 / (2 sigma^2))
//! ```
//!
//! The decision value of a machine is `g(x) = sum_i a_i y_i K(x_i, x) + w0`;
//! prediction picks the class with the largest `g`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{argmax_first, check_dim, ClassifierError, LabeledDataset};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Gaussian kernel width.
    pub sigma: f64,
    /// Soft-margin penalty.
    pub c: f64,
    /// KKT violation tolerance of the solver's stopping rule.
    pub tolerance: f64,
    /// Iteration cap per training sample.
    pub max_iter_per_sample: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            sigma: 1.0,
            c: 10.0,
            tolerance: 1e-3,
            max_iter_per_sample: 10_000,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<(), ClassifierError> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(ClassifierError::InvalidParameter(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ClassifierError::InvalidParameter(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(ClassifierError::InvalidParameter(
                "solver tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `exp(-|x - z|^2 / (2 sigma^2))`.
pub fn gaussian_kernel(x: &[f64], z: &[f64], sigma: f64) -> f64 {
    (-squared_distance(x, z) / (2.0 * sigma * sigma)).exp()
}

pub(crate) fn squared_distance(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// A single class-versus-rest machine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryMachine {
    pub support_vectors: Vec<Vec<f64>>,
    /// `a_i * y_i` for each support vector.
    pub coefficients: Vec<f64>,
    /// Bias `w0`.
    pub bias: f64,
}

impl BinaryMachine {
    pub fn decision_value(&self, x: &[f64], sigma: f64) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, c)| c * gaussian_kernel(sv, x, sigma))
            .sum::<f64>()
            + self.bias
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub labels: Vec<String>,
    pub dim: usize,
    pub sigma: f64,
    pub c: f64,
    /// One machine per label, in label order.
    pub machines: Vec<BinaryMachine>,
}

impl SvmModel {
    /// Per-class decision values.
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>, ClassifierError> {
        check_dim(self.dim, x)?;
        Ok(self
            .machines
            .iter()
            .map(|m| m.decision_value(x, self.sigma))
            .collect())
    }

    /// `(label index, per-class decision values)`.
    pub fn predict(&self, x: &[f64]) -> Result<(usize, Vec<f64>), ClassifierError> {
        let s = self.scores(x)?;
        Ok((argmax_first(&s), s))
    }
}

pub fn svm_predict(model: &SvmModel, x: &[f64]) -> Result<(String, Vec<f64>), ClassifierError> {
    let (i, s) = model.predict(x)?;
    Ok((model.labels[i].clone(), s))
}

pub fn svm_train(data: &LabeledDataset, params: &SvmParams) -> Result<SvmModel, ClassifierError> {
    params.validate()?;
    data.check_trainable()?;
    let xs = data.vectors();
    if xs.iter().all(|x| x == &xs[0]) {
        // several classes are present, so identical inputs cannot be separated
        return Err(ClassifierError::TrainingDegenerate);
    }
    let n = xs.len();
    let gram = KernelMatrix::new(xs, params.sigma);
    let max_iter = params.max_iter_per_sample.saturating_mul(n).max(1);
    let machines = (0..data.n_classes())
        .into_par_iter()
        .map(|class| {
            let y: Vec<f64> = data
                .targets()
                .iter()
                .map(|&t| if t == class { 1.0 } else { -1.0 })
                .collect();
            let sol = solve_dual(&gram, &y, params.c, params.tolerance, max_iter)?;
            let mut support_vectors = Vec::new();
            let mut coefficients = Vec::new();
            for i in 0..n {
                if sol.alpha[i] > 0.0 {
                    support_vectors.push(xs[i].clone());
                    coefficients.push(sol.alpha[i] * y[i]);
                }
            }
            Ok(BinaryMachine {
                support_vectors,
                coefficients,
                bias: -sol.rho,
            })
        })
        .collect::<Result<Vec<_>, ClassifierError>>()?;
    Ok(SvmModel {
        labels: data.labels().to_vec(),
        dim: data.dim(),
        sigma: params.sigma,
        c: params.c,
        machines,
    })
}

/// Dense symmetric Gram matrix.
struct KernelMatrix {
    n: usize,
    values: Vec<f64>,
}

impl KernelMatrix {
    fn new(xs: &[Vec<f64>], sigma: f64) -> Self {
        let n = xs.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| gaussian_kernel(&xs[i], &xs[j], sigma)).collect())
            .collect();
        KernelMatrix {
            n,
            values: rows.concat(),
        }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    fn diag(&self, i: usize) -> f64 {
        self.values[i * self.n + i]
    }
}

struct DualSolution {
    alpha: Vec<f64>,
    rho: f64,
}

/// SMO with the maximal-gain second-order pair selection.
fn solve_dual(
    k: &KernelMatrix,
    y: &[f64],
    c: f64,
    eps: f64,
    max_iter: usize,
) -> Result<DualSolution, ClassifierError> {
    let n = y.len();
    let mut alpha = vec![0.0; n];
    // gradient of the dual objective: Q a - e
    let mut grad = vec![-1.0; n];
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iter = 0usize;
    loop {
        // i: most violating index in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if y[t] > 0.0 {
                if !upper(alpha[t]) && -grad[t] >= gmax {
                    gmax = -grad[t];
                    i_sel = Some(t);
                }
            } else if !lower(alpha[t]) && grad[t] >= gmax {
                gmax = grad[t];
                i_sel = Some(t);
            }
        }
        let Some(i) = i_sel else { break };
        let ki = k.row(i);

        // j: largest objective decrease among I_low
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j_sel = None;
        let mut best = f64::INFINITY;
        for t in 0..n {
            let (grad_diff, quad) = if y[t] > 0.0 {
                if lower(alpha[t]) {
                    continue;
                }
                gmax2 = gmax2.max(grad[t]);
                (gmax + grad[t], k.diag(i) + k.diag(t) - 2.0 * ki[t])
            } else {
                if upper(alpha[t]) {
                    continue;
                }
                gmax2 = gmax2.max(-grad[t]);
                (gmax - grad[t], k.diag(i) + k.diag(t) - 2.0 * ki[t])
            };
            if grad_diff > 0.0 {
                let q = if quad > 0.0 { quad } else { TAU };
                let obj = -(grad_diff * grad_diff) / q;
                if obj <= best {
                    best = obj;
                    j_sel = Some(t);
                }
            }
        }
        let Some(j) = j_sel else { break };
        if gmax + gmax2 < eps {
            break;
        }

        iter += 1;
        if iter > max_iter {
            return Err(ClassifierError::ConvergenceFailure(max_iter));
        }

        let kj = k.row(j);
        let qij = y[i] * y[j] * ki[j];
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = k.diag(i) + k.diag(j) + 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = k.diag(i) + k.diag(j) - 2.0 * qij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
        }
    }

    // offset from free vectors, or the midpoint of the feasible interval
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut sum_free = 0.0;
    let mut n_free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    Ok(DualSolution { alpha, rho })
}
