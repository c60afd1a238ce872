//! Per-frame feature extraction.
//!
//! Two schemes share the [`FeatureMatrix`] container: six centroid-to-spine
//! distances per frame for single-person gestures ([`single`]) and twelve
//! direction angles of weighted mean limb joints for each person of an
//! interaction ([`two_person`]).

pub mod single;
pub mod two_person;

use std::io;
use std::str::FromStr;

use thiserror::Error;

use crate::skeleton::SkeletonSequence;

pub use single::{
    frame_features_single, normalized_distance, sequence_features_single, triangle_centroid,
    TriangleSpec, TRIANGLES,
};
pub use two_person::{
    direction_angles, direction_cosines, frame_features_two_person, mean_joint,
    sequence_features_two_person, MeanJointKind, WeightTable, WEIGHTS,
};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("{}triangle {triangle}: mean depth {mean_depth} is not positive", frame_prefix(*.frame))]
    DegenerateDepth {
        frame: Option<usize>,
        triangle: usize,
        mean_depth: f64,
    },
    #[error("{}mean joint J{mean_joint} is the zero vector", frame_prefix(*.frame))]
    DegenerateDirection {
        frame: Option<usize>,
        mean_joint: usize,
    },
    #[error("zero-length vector has no direction")]
    ZeroVector,
    #[error("feature csv: {0}")]
    Format(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn frame_prefix(frame: Option<usize>) -> String {
    frame.map(|f| format!("frame {f}: ")).unwrap_or_default()
}

impl FeatureError {
    /// Attaches a 1-based frame number to a frame-level error.
    pub(crate) fn at_frame(self, f: usize) -> Self {
        match self {
            FeatureError::DegenerateDepth {
                triangle,
                mean_depth,
                ..
            } => FeatureError::DegenerateDepth {
                frame: Some(f),
                triangle,
                mean_depth,
            },
            FeatureError::DegenerateDirection { mean_joint, .. } => {
                FeatureError::DegenerateDirection {
                    frame: Some(f),
                    mean_joint,
                }
            }
            other => other,
        }
    }
}

/// Which feature family to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Single,
    TwoPerson,
}

impl FeatureKind {
    pub fn columns(self) -> usize {
        match self {
            FeatureKind::Single => single::FEATURES_PER_FRAME,
            FeatureKind::TwoPerson => two_person::FEATURES_PER_FRAME,
        }
    }

    /// CSV column names: `d1..d6` or `aJ1,bJ1,gJ1,...,gJ4`.
    pub fn header(self) -> Vec<String> {
        match self {
            FeatureKind::Single => (1..=6).map(|i| format!("d{i}")).collect(),
            FeatureKind::TwoPerson => (1..=4)
                .flat_map(|j| ["a", "b", "g"].map(move |a| format!("{a}J{j}")))
                .collect(),
        }
    }

    pub fn extract(self, seq: &SkeletonSequence) -> Result<FeatureMatrix, FeatureError> {
        match self {
            FeatureKind::Single => sequence_features_single(seq),
            FeatureKind::TwoPerson => sequence_features_two_person(seq),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Single => "single",
            FeatureKind::TwoPerson => "two-person",
        }
    }
}

impl FromStr for FeatureKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "single" => Ok(FeatureKind::Single),
            "two-person" | "two_person" => Ok(FeatureKind::TwoPerson),
            other => Err(format!("unknown feature mode {other:?}")),
        }
    }
}

impl std::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Row-major `frames x columns` matrix of per-frame features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn from_rows<R: AsRef<[f64]>>(cols: usize, rows: &[R]) -> Result<Self, FeatureError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(FeatureError::Format(format!(
                    "row {} has {} columns, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(FeatureMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    /// Writes the matrix as CSV with the given header, optionally prefixed
    /// by a 1-based `frame` column.
    pub fn write_csv<W: io::Write>(
        &self,
        writer: W,
        header: &[String],
        frame_column: bool,
    ) -> Result<(), FeatureError> {
        if header.len() != self.cols {
            return Err(FeatureError::Format(format!(
                "header has {} names for {} columns",
                header.len(),
                self.cols
            )));
        }
        let mut w = csv::Writer::from_writer(writer);
        let mut head: Vec<&str> = Vec::with_capacity(self.cols + 1);
        if frame_column {
            head.push("frame");
        }
        head.extend(header.iter().map(String::as_str));
        w.write_record(&head)?;
        for (i, row) in self.iter_rows().enumerate() {
            let mut rec: Vec<String> = Vec::with_capacity(self.cols + 1);
            if frame_column {
                rec.push((i + 1).to_string());
            }
            rec.extend(row.iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a feature CSV. A leading `frame` column is recognised and dropped.
    pub fn read_csv<R: io::Read>(reader: R) -> Result<FeatureMatrix, FeatureError> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let skip = usize::from(header.get(0) == Some("frame"));
        let cols = header.len() - skip;
        if cols == 0 {
            return Err(FeatureError::Format("no feature columns".into()));
        }
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .skip(skip)
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| {
                            FeatureError::Format(format!("row {}: bad value {s:?}", i + 1))
                        })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(FeatureError::Format("no rows".into()));
        }
        FeatureMatrix::from_rows(cols, &rows)
    }
}
