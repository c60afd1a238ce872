use std::fmt::Write as _;
use std::io;

use super::EvalError;

/// Upper 5% points of the chi-squared distribution for 1..=10 degrees of
/// freedom.
pub const CRITICAL_VALUES_05: [f64; 10] = [
    3.841, 5.991, 7.815, 9.488, 11.070, 12.592, 14.067, 15.507, 16.919, 18.307,
];

pub fn critical_value(df: usize) -> Result<f64, EvalError> {
    df.checked_sub(1)
        .and_then(|i| CRITICAL_VALUES_05.get(i).copied())
        .ok_or(EvalError::UnsupportedDegreesOfFreedom(df))
}

/// Ranks `C` algorithms on each of `D` datasets (`scores[c][d]`, higher is
/// better). The best algorithm on a dataset gets rank 1 and the worst rank
/// `C`; tied scores share the average of the ranks they span.
pub fn rank_algorithms(scores: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, EvalError> {
    let c = scores.len();
    let d = scores.first().map_or(0, Vec::len);
    if c < 2 || d < 1 {
        return Err(EvalError::GridTooSmall {
            algorithms: c,
            datasets: d,
        });
    }
    if scores.iter().any(|r| r.len() != d) {
        return Err(EvalError::Ragged);
    }
    if scores.iter().flatten().any(|v| !v.is_finite()) {
        return Err(EvalError::Format("non-finite score".into()));
    }
    let mut ranks = vec![vec![0.0; d]; c];
    for ds in 0..d {
        let mut order: Vec<usize> = (0..c).collect();
        order.sort_by(|&a, &b| scores[b][ds].total_cmp(&scores[a][ds]));
        let mut start = 0;
        while start < c {
            let mut end = start + 1;
            while end < c && scores[order[end]][ds] == scores[order[start]][ds] {
                end += 1;
            }
            // positions start..end hold ranks start+1..=end
            let avg = (start + 1 + end) as f64 / 2.0;
            for &alg in &order[start..end] {
                ranks[alg][ds] = avg;
            }
            start = end;
        }
    }
    Ok(ranks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanResult {
    pub algorithms: usize,
    pub datasets: usize,
    pub ranks: Vec<Vec<f64>>,
    /// Mean rank of each algorithm over all datasets.
    pub avg_ranks: Vec<f64>,
    pub chi_squared: f64,
    pub degrees_of_freedom: usize,
    pub critical_value: f64,
    pub reject_null: bool,
}

/// Friedman statistic
/// `12 D / (C (C + 1)) * [sum_c R_c^2 - C (C + 1)^2 / 4]` against the 5%
/// critical value at `C - 1` degrees of freedom.
pub fn friedman(ranks: &[Vec<f64>]) -> Result<FriedmanResult, EvalError> {
    let c = ranks.len();
    let d = ranks.first().map_or(0, Vec::len);
    if c < 2 || d < 1 {
        return Err(EvalError::GridTooSmall {
            algorithms: c,
            datasets: d,
        });
    }
    if ranks.iter().any(|r| r.len() != d) {
        return Err(EvalError::Ragged);
    }
    let cf = c as f64;
    let expected_sum = cf * (cf + 1.0) / 2.0;
    for ds in 0..d {
        let col: f64 = ranks.iter().map(|r| r[ds]).sum();
        if (col - expected_sum).abs() > 1e-9 {
            return Err(EvalError::InvalidRanks(format!(
                "dataset {} ranks sum to {col}, expected {expected_sum}",
                ds + 1
            )));
        }
        if ranks.iter().any(|r| !(1.0..=cf).contains(&r[ds])) {
            return Err(EvalError::InvalidRanks(format!(
                "dataset {} has a rank outside 1..={c}",
                ds + 1
            )));
        }
    }
    let df = c - 1;
    let crit = critical_value(df)?;
    let avg_ranks: Vec<f64> = ranks
        .iter()
        .map(|r| r.iter().sum::<f64>() / d as f64)
        .collect();
    // With sum_c R_c = C(C+1)/2 the bracket equals sum_c (R_c - (C+1)/2)^2,
    // which is non-negative and exactly zero when all mean ranks agree.
    let centre = (cf + 1.0) / 2.0;
    let spread: f64 = avg_ranks.iter().map(|r| (r - centre) * (r - centre)).sum();
    let chi_squared = 12.0 * d as f64 / (cf * (cf + 1.0)) * spread;
    Ok(FriedmanResult {
        algorithms: c,
        datasets: d,
        ranks: ranks.to_vec(),
        avg_ranks,
        chi_squared,
        degrees_of_freedom: df,
        critical_value: crit,
        reject_null: chi_squared > crit,
    })
}

impl FriedmanResult {
    /// Table with one row per algorithm: per-dataset ranks, mean rank, and
    /// the statistic on the first row, followed by the decision.
    pub fn render(&self, algorithm_names: &[String]) -> String {
        let name_w = algorithm_names
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max("Algorithm".len());
        let mut out = String::new();
        write!(out, "{:<name_w$}", "Algorithm").unwrap();
        for ds in 1..=self.datasets {
            write!(out, "  {:>10}", format!("Dataset {ds}")).unwrap();
        }
        writeln!(out, "  {:>8}  {:>8}", "R_c", "chi^2").unwrap();
        for (i, row) in self.ranks.iter().enumerate() {
            let name = algorithm_names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("A{}", i + 1));
            write!(out, "{name:<name_w$}").unwrap();
            for r in row {
                write!(out, "  {:>10}", fmt_rank(*r)).unwrap();
            }
            write!(out, "  {:>8.4}", self.avg_ranks[i]).unwrap();
            if i == 0 {
                write!(out, "  {:>8.4}", self.chi_squared).unwrap();
            }
            out.push('\n');
        }
        let verdict = if self.reject_null {
            format!(
                "chi^2 = {:.4} > {:.3} (df = {}, alpha = 0.05): reject the null hypothesis",
                self.chi_squared, self.critical_value, self.degrees_of_freedom
            )
        } else {
            format!(
                "chi^2 = {:.4} <= {:.3} (df = {}, alpha = 0.05): fail to reject the null hypothesis",
                self.chi_squared, self.critical_value, self.degrees_of_freedom
            )
        };
        out.push_str(&verdict);
        out.push('\n');
        out
    }
}

fn fmt_rank(r: f64) -> String {
    if r.fract() == 0.0 {
        format!("{r:.0}")
    } else {
        format!("{r:.1}")
    }
}

/// Algorithms-by-datasets score table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreGrid {
    pub algorithms: Vec<String>,
    pub datasets: Vec<String>,
    pub scores: Vec<Vec<f64>>,
}

/// Reads a score CSV: one row per algorithm, first cell the algorithm name,
/// remaining cells one score per dataset. A header row is optional and is
/// detected by its non-numeric score cells.
pub fn read_score_grid<R: io::Read>(reader: R) -> Result<ScoreGrid, EvalError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(EvalError::Format("empty score file".into()));
    }
    let numeric = |cells: &[String]| cells.iter().all(|c| c.parse::<f64>().is_ok());
    let datasets = if !numeric(&rows[0][1..]) {
        let head = rows.remove(0);
        head[1..].to_vec()
    } else {
        (1..rows[0].len()).map(|i| format!("Dataset {i}")).collect()
    };
    let mut algorithms = Vec::new();
    let mut scores = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != datasets.len() + 1 {
            return Err(EvalError::Format(format!(
                "row {} has {} scores, expected {}",
                i + 1,
                row.len().saturating_sub(1),
                datasets.len()
            )));
        }
        let vals = row[1..]
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| EvalError::Format(format!("row {}: bad score {c:?}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        algorithms.push(row[0].clone());
        scores.push(vals);
    }
    if datasets.is_empty() || algorithms.len() < 2 {
        return Err(EvalError::GridTooSmall {
            algorithms: algorithms.len(),
            datasets: datasets.len(),
        });
    }
    Ok(ScoreGrid {
        algorithms,
        datasets,
        scores,
    })
}
