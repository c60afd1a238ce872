//! Confusion matrices, per-class and macro-averaged metrics, and the
//! Friedman rank test for comparing classifiers across datasets.

mod friedman;
mod metrics;

use std::io;

use thiserror::Error;

pub use friedman::{
    critical_value, friedman, rank_algorithms, read_score_grid, FriedmanResult, ScoreGrid,
    CRITICAL_VALUES_05,
};
pub use metrics::{binary_reduce, metrics, BinaryCounts, ClassMetrics, MetricsReport};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{truth} true labels but {predicted} predictions")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("label {0:?} is not in the label set")]
    UnknownLabel(String),
    #[error("class index {0} out of range")]
    InvalidClass(usize),
    #[error("need at least 2 algorithms and 1 dataset, got {algorithms} x {datasets}")]
    GridTooSmall { algorithms: usize, datasets: usize },
    #[error("score grid is ragged")]
    Ragged,
    #[error("no built-in critical value for {0} degrees of freedom (table covers 1..=10)")]
    UnsupportedDegreesOfFreedom(usize),
    #[error("invalid rank matrix: {0}")]
    InvalidRanks(String),
    #[error("malformed score csv: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// `counts[i][j]` = samples of true class `i` predicted as class `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    /// Tallies label-index pairs over `k` classes.
    pub fn from_indices(k: usize, truth: &[usize], predicted: &[usize]) -> Result<Self, EvalError> {
        let labels = (0..k).map(|i| i.to_string()).collect();
        Self::tally(labels, truth, predicted)
    }

    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<usize>>) -> Result<Self, EvalError> {
        if counts.len() != labels.len() || counts.iter().any(|r| r.len() != labels.len()) {
            return Err(EvalError::Ragged);
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    fn tally(labels: Vec<String>, truth: &[usize], predicted: &[usize]) -> Result<Self, EvalError> {
        if truth.len() != predicted.len() {
            return Err(EvalError::LengthMismatch {
                truth: truth.len(),
                predicted: predicted.len(),
            });
        }
        let k = labels.len();
        let mut counts = vec![vec![0usize; k]; k];
        for (&t, &p) in truth.iter().zip(predicted) {
            if t >= k {
                return Err(EvalError::InvalidClass(t));
            }
            if p >= k {
                return Err(EvalError::InvalidClass(p));
            }
            counts[t][p] += 1;
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn get(&self, truth: usize, predicted: usize) -> usize {
        self.counts[truth][predicted]
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Samples per true class (row sums).
    pub fn support(&self) -> Vec<usize> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn trace(&self) -> usize {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Fraction of all samples on the diagonal.
    pub fn overall_accuracy(&self) -> f64 {
        let n = self.total();
        if n == 0 {
            0.0
        } else {
            self.trace() as f64 / n as f64
        }
    }

    /// Plain-text grid, rows = true class, columns = predicted class.
    pub fn render(&self) -> String {
        let w = self
            .labels
            .iter()
            .map(String::len)
            .chain(self.counts.iter().flatten().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(4);
        let mut out = format!("{:>w$}", "true\\pred");
        for l in &self.labels {
            out.push_str(&format!(" {l:>w$}"));
        }
        out.push('\n');
        for (l, row) in self.labels.iter().zip(&self.counts) {
            out.push_str(&format!("{l:>w$}", w = w.max(9)));
            for c in row {
                out.push_str(&format!(" {c:>w$}"));
            }
            out.push('\n');
        }
        out
    }

    /// CSV with a `true\pred` corner cell and one row per true class.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), EvalError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut head = vec!["true\\pred".to_string()];
        head.extend(self.labels.iter().cloned());
        w.write_record(&head)?;
        for (l, row) in self.labels.iter().zip(&self.counts) {
            let mut rec = vec![l.clone()];
            rec.extend(row.iter().map(usize::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds the confusion matrix of string labels against a declared label set.
pub fn confusion<S: AsRef<str>>(
    labels: &[String],
    truth: &[S],
    predicted: &[S],
) -> Result<ConfusionMatrix, EvalError> {
    let lookup = |s: &S| {
        labels
            .iter()
            .position(|l| l == s.as_ref())
            .ok_or_else(|| EvalError::UnknownLabel(s.as_ref().to_string()))
    };
    if truth.len() != predicted.len() {
        return Err(EvalError::LengthMismatch {
            truth: truth.len(),
            predicted: predicted.len(),
        });
    }
    let t = truth.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
    let p = predicted.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
    ConfusionMatrix::tally(labels.to_vec(), &t, &p)
}
