use std::io;

use super::{ConfusionMatrix, EvalError};

/// One-vs-rest counts for a single class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryCounts {
    pub tp: usize,
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl BinaryCounts {
    pub fn new(tp: usize, fn_: usize, fp: usize, tn: usize) -> Self {
        BinaryCounts { tp, fn_, fp, tn }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }
}

pub fn binary_reduce(cm: &ConfusionMatrix, k: usize) -> Result<BinaryCounts, EvalError> {
    if k >= cm.n_classes() {
        return Err(EvalError::InvalidClass(k));
    }
    let tp = cm.get(k, k);
    let row: usize = cm.counts()[k].iter().sum();
    let col: usize = cm.counts().iter().map(|r| r[k]).sum();
    let fn_ = row - tp;
    let fp = col - tp;
    Ok(BinaryCounts {
        tp,
        fn_,
        fp,
        tn: cm.total() - tp - fn_ - fp,
    })
}

/// The seven per-class metrics. Any `0/0` ratio is reported as 0 and sets
/// `degenerate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub npv: f64,
    pub accuracy: f64,
    pub error_rate: f64,
    pub f1: f64,
    pub degenerate: bool,
}

impl ClassMetrics {
    /// Positive predictive value; the same quantity as precision.
    pub fn ppv(&self) -> f64 {
        self.precision
    }

    /// Sensitivity; the same quantity as recall.
    pub fn sensitivity(&self) -> f64 {
        self.recall
    }

    pub const COLUMNS: [&'static str; 7] = [
        "precision",
        "recall",
        "specificity",
        "npv",
        "accuracy",
        "error_rate",
        "f1",
    ];

    pub fn values(&self) -> [f64; 7] {
        [
            self.precision,
            self.recall,
            self.specificity,
            self.npv,
            self.accuracy,
            self.error_rate,
            self.f1,
        ]
    }
}

fn ratio(num: usize, den: usize, degenerate: &mut bool) -> f64 {
    if den == 0 {
        *degenerate = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn metrics(b: &BinaryCounts) -> ClassMetrics {
    let mut degenerate = false;
    let precision = ratio(b.tp, b.tp + b.fp, &mut degenerate);
    let recall = ratio(b.tp, b.tp + b.fn_, &mut degenerate);
    let specificity = ratio(b.tn, b.fp + b.tn, &mut degenerate);
    let npv = ratio(b.tn, b.tn + b.fn_, &mut degenerate);
    let accuracy = ratio(b.tp + b.tn, b.total(), &mut degenerate);
    let error_rate = ratio(b.fp + b.fn_, b.total(), &mut degenerate);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * (precision * recall) / (precision + recall)
    };
    ClassMetrics {
        precision,
        recall,
        specificity,
        npv,
        accuracy,
        error_rate,
        f1,
        degenerate,
    }
}

/// Per-class metrics plus their unweighted (macro) mean.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub labels: Vec<String>,
    pub support: Vec<usize>,
    pub per_class: Vec<ClassMetrics>,
    pub macro_avg: ClassMetrics,
    /// Diagonal share of the whole confusion matrix.
    pub overall_accuracy: f64,
}

impl MetricsReport {
    pub fn from_confusion(cm: &ConfusionMatrix) -> Result<Self, EvalError> {
        let per_class = (0..cm.n_classes())
            .map(|k| binary_reduce(cm, k).map(|b| metrics(&b)))
            .collect::<Result<Vec<_>, _>>()?;
        let k = per_class.len().max(1) as f64;
        let mean = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / k;
        let macro_avg = ClassMetrics {
            precision: mean(|m| m.precision),
            recall: mean(|m| m.recall),
            specificity: mean(|m| m.specificity),
            npv: mean(|m| m.npv),
            accuracy: mean(|m| m.accuracy),
            error_rate: mean(|m| m.error_rate),
            f1: mean(|m| m.f1),
            degenerate: per_class.iter().any(|m| m.degenerate),
        };
        Ok(MetricsReport {
            labels: cm.labels().to_vec(),
            support: cm.support(),
            per_class,
            macro_avg,
            overall_accuracy: cm.overall_accuracy(),
        })
    }

    /// `class,support,precision,...,f1,degenerate` rows followed by a
    /// `macro` row.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), EvalError> {
        let mut w = csv::Writer::from_writer(writer);
        let mut head = vec!["class", "support"];
        head.extend(ClassMetrics::COLUMNS);
        head.push("degenerate");
        w.write_record(&head)?;
        let row = |name: &str, support: usize, m: &ClassMetrics| {
            let mut r = vec![name.to_string(), support.to_string()];
            r.extend(m.values().iter().map(|v| format!("{v:.6}")));
            r.push(m.degenerate.to_string());
            r
        };
        for ((l, s), m) in self.labels.iter().zip(&self.support).zip(&self.per_class) {
            w.write_record(row(l, *s, m))?;
        }
        w.write_record(row("macro", self.support.iter().sum(), &self.macro_avg))?;
        w.flush()?;
        Ok(())
    }
}
