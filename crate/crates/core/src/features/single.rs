//! Centroid-distance features for single-person hand gestures.
//!
//! Six triangles are built over the arm joints. For each frame the centroid
//! of every triangle is measured against the spine joint, and the Euclidean
//! distance is divided by the mean depth of the two points so that a subject
//! standing further from the sensor produces the same feature values.

use super::{FeatureError, FeatureMatrix};
use crate::skeleton::{Frame, Joint, SkeletonSequence, Vec3};

pub const FEATURES_PER_FRAME: usize = 6;

/// Three joints whose centroid yields one feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleSpec {
    pub vertices: [Joint; 3],
}

/// Feature column order: left before right within each arm level, moving
/// from the shoulder girdle out to the hands.
pub const TRIANGLES: [TriangleSpec; FEATURES_PER_FRAME] = {
    use Joint::*;
    [
        TriangleSpec { vertices: [ShoulderCenter, ShoulderLeft, ElbowLeft] },
        TriangleSpec { vertices: [ShoulderCenter, ShoulderRight, ElbowRight] },
        TriangleSpec { vertices: [ShoulderLeft, ElbowLeft, WristLeft] },
        TriangleSpec { vertices: [ShoulderRight, ElbowRight, WristRight] },
        TriangleSpec { vertices: [ElbowLeft, WristLeft, HandLeft] },
        TriangleSpec { vertices: [ElbowRight, WristRight, HandRight] },
    ]
};

/// Joints read by the single-person scheme (spine plus the nine arm joints).
pub const USED_JOINTS: [Joint; 10] = {
    use Joint::*;
    [
        Spine,
        ShoulderCenter,
        ShoulderLeft,
        ShoulderRight,
        ElbowLeft,
        ElbowRight,
        WristLeft,
        WristRight,
        HandLeft,
        HandRight,
    ]
};

impl TriangleSpec {
    pub fn centroid(&self, frame: &Frame) -> Vec3 {
        let [a, b, c] = self.vertices;
        triangle_centroid(frame[a], frame[b], frame[c])
    }
}

pub fn triangle_centroid(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    Vec3::new(
        (a.x + b.x + c.x) / 3.0,
        (a.y + b.y + c.y) / 3.0,
        (a.z + b.z + c.z) / 3.0,
    )
}

/// `2 * |c - s| / (c.z + s.z)`: distance over the mean depth of both points.
///
/// Errors with `DegenerateDepth` (triangle 0, no frame) when the mean depth
/// is not positive; callers re-tag the error with their own indices.
pub fn normalized_distance(c: Vec3, s: Vec3) -> Result<f64, FeatureError> {
    let depth_sum = c.z + s.z;
    if !(depth_sum > 0.0) {
        return Err(FeatureError::DegenerateDepth {
            frame: None,
            triangle: 0,
            mean_depth: depth_sum / 2.0,
        });
    }
    Ok(2.0 * c.distance(s) / depth_sum)
}

pub fn frame_features_single(frame: &Frame) -> Result<[f64; FEATURES_PER_FRAME], FeatureError> {
    let spine = frame[Joint::Spine];
    let mut out = [0.0; FEATURES_PER_FRAME];
    for (i, tri) in TRIANGLES.iter().enumerate() {
        out[i] = normalized_distance(tri.centroid(frame), spine).map_err(|e| match e {
            FeatureError::DegenerateDepth { mean_depth, .. } => FeatureError::DegenerateDepth {
                frame: None,
                triangle: i + 1,
                mean_depth,
            },
            other => other,
        })?;
    }
    Ok(out)
}

/// `T x 6` matrix; row `t` holds the features of frame `t`.
pub fn sequence_features_single(seq: &SkeletonSequence) -> Result<FeatureMatrix, FeatureError> {
    let rows = seq
        .frames()
        .iter()
        .enumerate()
        .map(|(t, f)| frame_features_single(f).map_err(|e| e.at_frame(t + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    FeatureMatrix::from_rows(FEATURES_PER_FRAME, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centroid_of_right_triangle() {
        let c = triangle_centroid(
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(3.0, 0.0, 0.0),
            Vec3::new(0.0, 3.0, 0.0),
        );
        assert_eq!(c, Vec3::new(1.0, 1.0, 0.0));
    }

    #[test]
    fn centroid_of_coincident_points() {
        let p = Vec3::new(0.25, -1.5, 2.75);
        assert_eq!(triangle_centroid(p, p, p), p);
    }

    #[test]
    fn normalized_distance_worked_values() {
        // distance 0.1850 at mean depth 2.2069
        let s = Vec3::new(0.0, 0.0, 2.2069);
        let c = Vec3::new(0.1850, 0.0, 2.2069);
        assert!((normalized_distance(c, s).unwrap() - 0.0838).abs() <= 5e-5);
        let s = Vec3::new(0.0, 0.0, 2.1282);
        let c = Vec3::new(0.0, -0.6035, 2.1282);
        assert!((normalized_distance(c, s).unwrap() - 0.2836).abs() <= 5e-5);
    }

    #[test]
    fn normalized_distance_zero_when_coincident() {
        let p = Vec3::new(0.3, 0.2, 2.0);
        assert_eq!(normalized_distance(p, p).unwrap(), 0.0);
    }

    #[test]
    fn non_positive_depth_is_an_error() {
        let c = Vec3::new(1.0, 0.0, 0.0);
        let s = Vec3::new(0.0, 0.0, 0.0);
        assert!(matches!(
            normalized_distance(c, s),
            Err(FeatureError::DegenerateDepth { .. })
        ));
        let s = Vec3::new(0.0, 0.0, -0.5);
        assert!(normalized_distance(Vec3::new(0.0, 0.0, 0.2), s).is_err());
    }

    #[test]
    fn coincident_joints_give_zero_features() {
        let f = Frame::uniform(Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(frame_features_single(&f).unwrap(), [0.0; 6]);
    }

    #[test]
    fn degenerate_depth_names_triangle_and_frame() {
        let mut f = Frame::uniform(Vec3::new(0.0, 0.0, 2.0));
        for j in [Joint::ElbowRight, Joint::WristRight, Joint::HandRight] {
            f[j] = Vec3::new(0.1, 0.1, -3.0);
        }
        match frame_features_single(&f) {
            Err(FeatureError::DegenerateDepth { triangle, .. }) => assert_eq!(triangle, 6),
            other => panic!("unexpected {other:?}"),
        }
        let seq = SkeletonSequence::new(vec![Frame::uniform(Vec3::new(0.0, 0.0, 2.0)), f]).unwrap();
        let err = sequence_features_single(&seq).unwrap_err();
        assert!(matches!(
            err,
            FeatureError::DegenerateDepth { frame: Some(2), triangle: 6, .. }
        ));
        assert!(err.to_string().contains("frame 2"));
    }

    #[test]
    fn sequence_shapes() {
        let f = Frame::uniform(Vec3::new(0.1, 0.2, 2.0));
        let seq = SkeletonSequence::new(vec![f; 90]).unwrap();
        let m = sequence_features_single(&seq).unwrap();
        assert_eq!((m.rows(), m.cols()), (90, 6));
        assert_eq!(m.clone().into_flat().len(), 540);
        let one = SkeletonSequence::new(vec![f]).unwrap();
        assert_eq!(sequence_features_single(&one).unwrap().rows(), 1);
    }

    #[test]
    fn identical_frames_give_identical_rows() {
        let mut f = Frame::uniform(Vec3::new(0.0, 0.0, 2.5));
        f[Joint::HandLeft] = Vec3::new(-0.4, 0.3, 2.3);
        f[Joint::ElbowRight] = Vec3::new(0.3, -0.1, 2.6);
        let seq = SkeletonSequence::new(vec![f; 3]).unwrap();
        let m = sequence_features_single(&seq).unwrap();
        assert_eq!(m.row(0), m.row(1));
        assert_eq!(m.row(1), m.row(2));
    }
}
