#![allow(dead_code)]

use std::path::PathBuf;

use skelgest::skeleton::{read_skeleton_file, Frame, SkeletonSequence};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

/// The reference right-hand subject at frame 48; only the sixteen limb
/// joints are measured, the four torso joints are filler.
pub fn reference_frame() -> Frame {
    let seq = read_skeleton_file(fixture("right_subject_frame48.txt")).unwrap();
    seq.frames()[0]
}

pub fn reference_sequence() -> SkeletonSequence {
    read_skeleton_file(fixture("right_subject_90.txt")).unwrap()
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (tolerance {tol}, off by {})",
        (got - want).abs()
    );
}
