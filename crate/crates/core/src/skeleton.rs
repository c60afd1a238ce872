//! Typed joint model and the flat-float skeleton text format.
//!
//! A skeleton file is a whitespace-separated list of decimal floats. Tokens
//! are consumed frame-major, then joint-major (in [`Joint::ALL`] order), then
//! `x y z`, so every frame occupies exactly 60 tokens. Frame `f`, joint `j`,
//! axis `k` (all 1-based) lives at token `(f-1)*60 + (j-1)*3 + k`.

use std::fmt::Write as _;
use std::io;
use std::ops::{Add, Index, IndexMut, Mul, Sub};
use std::path::Path;

use thiserror::Error;

/// Number of tracked joints per skeleton.
pub const JOINT_COUNT: usize = 20;
/// Floats per serialized frame (20 joints x 3 axes).
pub const TOKENS_PER_FRAME: usize = JOINT_COUNT * 3;
/// Default capture rate of the depth sensor.
pub const DEFAULT_FRAME_RATE: f64 = 30.0;

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("malformed stream: {0} tokens is not a multiple of {TOKENS_PER_FRAME}")]
    MalformedStream(usize),
    #[error("bad token {token:?} at position {position}")]
    BadToken { position: usize, token: String },
    #[error("empty skeleton stream")]
    EmptyStream,
    #[error("frame {frame}, joint {joint:?}: non-finite coordinate")]
    NonFinite { frame: usize, joint: Joint },
    #[error("csv header mismatch: {0}")]
    CsvHeader(String),
    #[error("csv row {row}: {message}")]
    CsvRow { row: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The twenty Kinect joints, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Joint {
    HipCenter,
    Spine,
    ShoulderCenter,
    Head,
    ShoulderLeft,
    ElbowLeft,
    WristLeft,
    HandLeft,
    ShoulderRight,
    ElbowRight,
    WristRight,
    HandRight,
    HipLeft,
    KneeLeft,
    AnkleLeft,
    FootLeft,
    HipRight,
    KneeRight,
    AnkleRight,
    FootRight,
}

impl Joint {
    pub const ALL: [Joint; JOINT_COUNT] = [
        Joint::HipCenter,
        Joint::Spine,
        Joint::ShoulderCenter,
        Joint::Head,
        Joint::ShoulderLeft,
        Joint::ElbowLeft,
        Joint::WristLeft,
        Joint::HandLeft,
        Joint::ShoulderRight,
        Joint::ElbowRight,
        Joint::WristRight,
        Joint::HandRight,
        Joint::HipLeft,
        Joint::KneeLeft,
        Joint::AnkleLeft,
        Joint::FootLeft,
        Joint::HipRight,
        Joint::KneeRight,
        Joint::AnkleRight,
        Joint::FootRight,
    ];

    /// Zero-based position in the file layout.
    pub fn index(self) -> usize {
        self as usize
    }

    /// One-based joint number as used in the sensor SDK listing.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<Joint> {
        n.checked_sub(1).and_then(|i| Joint::ALL.get(i).copied())
    }

    /// Joint with left and right swapped; central joints map to themselves.
    pub fn mirror(self) -> Joint {
        use Joint::*;
        match self {
            ShoulderLeft => ShoulderRight,
            ElbowLeft => ElbowRight,
            WristLeft => WristRight,
            HandLeft => HandRight,
            HipLeft => HipRight,
            KneeLeft => KneeRight,
            AnkleLeft => AnkleRight,
            FootLeft => FootRight,
            ShoulderRight => ShoulderLeft,
            ElbowRight => ElbowLeft,
            WristRight => WristLeft,
            HandRight => HandLeft,
            HipRight => HipLeft,
            KneeRight => KneeLeft,
            AnkleRight => AnkleLeft,
            FootRight => FootLeft,
            other => other,
        }
    }
}

/// A point in sensor space, meters. `z` is the depth from the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

/// One skeleton sample: exactly twenty joint positions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Frame {
    joints: [Vec3; JOINT_COUNT],
}

impl Frame {
    pub fn new(joints: [Vec3; JOINT_COUNT]) -> Self {
        Frame { joints }
    }

    /// Frame with every joint at the same point.
    pub fn uniform(p: Vec3) -> Self {
        Frame { joints: [p; JOINT_COUNT] }
    }

    pub fn joint(&self, j: Joint) -> Vec3 {
        self.joints[j.index()]
    }

    pub fn set(&mut self, j: Joint, p: Vec3) {
        self.joints[j.index()] = p;
    }

    pub fn joints(&self) -> &[Vec3; JOINT_COUNT] {
        &self.joints
    }

    pub fn map(&self, f: impl FnMut(Vec3) -> Vec3) -> Frame {
        Frame { joints: self.joints.map(f) }
    }

    /// Reflects the skeleton through the `x = 0` plane and swaps left/right
    /// joint identities, so a left-side person looks like a right-side one.
    pub fn mirrored_x(&self) -> Frame {
        let mut out = Frame::default();
        for j in Joint::ALL {
            let p = self.joint(j);
            out.set(j.mirror(), Vec3::new(-p.x, p.y, p.z));
        }
        out
    }

    fn check_finite(&self, frame: usize) -> Result<(), SkeletonError> {
        for j in Joint::ALL {
            if !self.joint(j).is_finite() {
                return Err(SkeletonError::NonFinite { frame, joint: j });
            }
        }
        Ok(())
    }
}

impl Index<Joint> for Frame {
    type Output = Vec3;
    fn index(&self, j: Joint) -> &Vec3 {
        &self.joints[j.index()]
    }
}

impl IndexMut<Joint> for Frame {
    fn index_mut(&mut self, j: Joint) -> &mut Vec3 {
        &mut self.joints[j.index()]
    }
}

/// Convenience accessor mirroring the operation name used across the pipeline.
pub fn joint_position(frame: &Frame, j: Joint) -> Vec3 {
    frame.joint(j)
}

/// An ordered, non-empty run of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonSequence {
    frames: Vec<Frame>,
    pub frame_rate: f64,
    pub source_label: Option<String>,
}

impl SkeletonSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self, SkeletonError> {
        if frames.is_empty() {
            return Err(SkeletonError::EmptyStream);
        }
        for (i, f) in frames.iter().enumerate() {
            f.check_finite(i + 1)?;
        }
        Ok(SkeletonSequence {
            frames,
            frame_rate: DEFAULT_FRAME_RATE,
            source_label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = Some(label.into());
        self
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Duration in seconds at the recorded frame rate.
    pub fn duration(&self) -> f64 {
        self.frames.len() as f64 / self.frame_rate
    }

    pub fn mirrored_x(&self) -> SkeletonSequence {
        SkeletonSequence {
            frames: self.frames.iter().map(Frame::mirrored_x).collect(),
            frame_rate: self.frame_rate,
            source_label: self.source_label.clone(),
        }
    }
}

/// Parses the flat-float skeleton text format.
///
/// Any run of ASCII whitespace separates tokens. Token positions in errors
/// are 1-based.
pub fn parse_skeleton_stream(text: &str) -> Result<SkeletonSequence, SkeletonError> {
    let mut values = Vec::new();
    for (i, tok) in text.split_ascii_whitespace().enumerate() {
        let v: f64 = tok.parse().map_err(|_| SkeletonError::BadToken {
            position: i + 1,
            token: tok.to_string(),
        })?;
        // NaN and infinities would poison every depth/norm division downstream.
        if !v.is_finite() {
            return Err(SkeletonError::BadToken {
                position: i + 1,
                token: tok.to_string(),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(SkeletonError::EmptyStream);
    }
    if values.len() % TOKENS_PER_FRAME != 0 {
        return Err(SkeletonError::MalformedStream(values.len()));
    }
    let frames = values
        .chunks_exact(TOKENS_PER_FRAME)
        .map(|chunk| {
            let mut joints = [Vec3::ZERO; JOINT_COUNT];
            for (j, xyz) in chunk.chunks_exact(3).enumerate() {
                joints[j] = Vec3::new(xyz[0], xyz[1], xyz[2]);
            }
            Frame::new(joints)
        })
        .collect();
    SkeletonSequence::new(frames)
}

/// Renders a sequence in the flat-float format, one frame per line.
///
/// Values use the shortest representation that parses back to the identical
/// `f64`, so `parse(serialize(s)) == s` holds bit for bit.
pub fn serialize_skeleton_stream(seq: &SkeletonSequence) -> Result<String, SkeletonError> {
    if seq.frames.is_empty() {
        return Err(SkeletonError::EmptyStream);
    }
    let mut out = String::with_capacity(seq.frames.len() * TOKENS_PER_FRAME * 10);
    for frame in &seq.frames {
        let mut first = true;
        for p in frame.joints() {
            for v in p.to_array() {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").expect("writing to a String cannot fail");
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn read_skeleton_file(path: impl AsRef<Path>) -> Result<SkeletonSequence, SkeletonError> {
    let text = std::fs::read_to_string(path)?;
    parse_skeleton_stream(&text)
}

pub fn write_skeleton_file(
    path: impl AsRef<Path>,
    seq: &SkeletonSequence,
) -> Result<(), SkeletonError> {
    std::fs::write(path, serialize_skeleton_stream(seq)?)?;
    Ok(())
}

/// Column names of the per-frame CSV export: `j01_x,j01_y,...,j20_z`.
pub fn csv_header() -> Vec<String> {
    (1..=JOINT_COUNT)
        .flat_map(|j| ["x", "y", "z"].map(move |a| format!("j{j:02}_{a}")))
        .collect()
}

/// Writes one CSV row per frame with 60 coordinate columns.
pub fn write_skeleton_csv<W: io::Write>(
    writer: W,
    seq: &SkeletonSequence,
) -> Result<(), SkeletonError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(csv_header())?;
    for frame in &seq.frames {
        w.write_record(
            frame
                .joints()
                .iter()
                .flat_map(|p| p.to_array())
                .map(|v| v.to_string()),
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the CSV produced by [`write_skeleton_csv`].
pub fn read_skeleton_csv<R: io::Read>(reader: R) -> Result<SkeletonSequence, SkeletonError> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != csv_header() {
        return Err(SkeletonError::CsvHeader(header.join(",")));
    }
    let mut frames = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| SkeletonError::CsvRow {
                row: row + 1,
                message: e.to_string(),
            })?;
        let mut joints = [Vec3::ZERO; JOINT_COUNT];
        for (j, xyz) in vals.chunks_exact(3).enumerate() {
            joints[j] = Vec3::new(xyz[0], xyz[1], xyz[2]);
        }
        frames.push(Frame::new(joints));
    }
    SkeletonSequence::new(frames)
}
