//! Direction-angle features for one person of a two-person interaction.
//!
//! Each limb (two arms, two legs) is collapsed into a single weighted mean
//! joint. The angles that mean joint's position vector makes with the +x,
//! +y and +z sensor axes give three features per limb, twelve per frame.

use super::{FeatureError, FeatureMatrix};
use crate::skeleton::{Frame, Joint, SkeletonSequence, Vec3};

pub const FEATURES_PER_FRAME: usize = 12;

/// Anthropometric joint weights; each limb group sums to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightTable {
    pub shoulder: f64,
    pub elbow: f64,
    pub wrist: f64,
    pub hand: f64,
    pub hip: f64,
    pub knee: f64,
    pub ankle: f64,
    pub foot: f64,
}

/// Left and right sides share the same weights.
pub const WEIGHTS: WeightTable = WeightTable {
    shoulder: 0.271,
    elbow: 0.449,
    wrist: 0.149,
    hand: 0.131,
    hip: 0.348,
    knee: 0.437,
    ankle: 0.119,
    foot: 0.096,
};

impl WeightTable {
    pub fn arm(&self) -> [f64; 4] {
        [self.shoulder, self.elbow, self.wrist, self.hand]
    }

    pub fn leg(&self) -> [f64; 4] {
        [self.hip, self.knee, self.ankle, self.foot]
    }
}

/// The four mean joints: J1 left arm, J2 right arm, J3 left leg, J4 right leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanJointKind {
    LeftArm,
    RightArm,
    LeftLeg,
    RightLeg,
}

impl MeanJointKind {
    pub const ALL: [MeanJointKind; 4] = [
        MeanJointKind::LeftArm,
        MeanJointKind::RightArm,
        MeanJointKind::LeftLeg,
        MeanJointKind::RightLeg,
    ];

    /// 1-based index (the `i` of `J_i`).
    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn joints(self) -> [Joint; 4] {
        use Joint::*;
        match self {
            MeanJointKind::LeftArm => [ShoulderLeft, ElbowLeft, WristLeft, HandLeft],
            MeanJointKind::RightArm => [ShoulderRight, ElbowRight, WristRight, HandRight],
            MeanJointKind::LeftLeg => [HipLeft, KneeLeft, AnkleLeft, FootLeft],
            MeanJointKind::RightLeg => [HipRight, KneeRight, AnkleRight, FootRight],
        }
    }

    pub fn weights(self, table: &WeightTable) -> [f64; 4] {
        match self {
            MeanJointKind::LeftArm | MeanJointKind::RightArm => table.arm(),
            MeanJointKind::LeftLeg | MeanJointKind::RightLeg => table.leg(),
        }
    }

    pub fn position(self, frame: &Frame) -> Vec3 {
        let pts = self.joints().map(|j| frame[j]);
        mean_joint(pts, self.weights(&WEIGHTS))
    }
}

/// Weighted sum of four joints divided by four.
///
/// The division does not change any direction angle; it is kept so the
/// mean-joint coordinates themselves match published worked examples.
pub fn mean_joint(points: [Vec3; 4], weights: [f64; 4]) -> Vec3 {
    let s = points
        .iter()
        .zip(weights)
        .fold(Vec3::ZERO, |acc, (&p, w)| acc + p * w);
    s * 0.25
}

/// `(cos a, cos b, cos g)` of `v` against the +x, +y, +z axes.
pub fn direction_cosines(v: Vec3) -> Result<[f64; 3], FeatureError> {
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(FeatureError::ZeroVector);
    }
    Ok([v.x / n, v.y / n, v.z / n])
}

/// Direction angles in degrees, each in `[0, 180]`.
pub fn direction_angles(v: Vec3) -> Result<[f64; 3], FeatureError> {
    // rounding can push |cos| a hair past 1
    Ok(direction_cosines(v)?.map(|c| c.clamp(-1.0, 1.0).acos().to_degrees()))
}

/// Twelve angles ordered `(aJ1, bJ1, gJ1, aJ2, ..., gJ4)`.
pub fn frame_features_two_person(
    frame: &Frame,
) -> Result<[f64; FEATURES_PER_FRAME], FeatureError> {
    let mut out = [0.0; FEATURES_PER_FRAME];
    for (i, kind) in MeanJointKind::ALL.iter().enumerate() {
        let angles = direction_angles(kind.position(frame)).map_err(|_| {
            FeatureError::DegenerateDirection {
                frame: None,
                mean_joint: kind.number(),
            }
        })?;
        out[i * 3..i * 3 + 3].copy_from_slice(&angles);
    }
    Ok(out)
}

pub fn sequence_features_two_person(
    seq: &SkeletonSequence,
) -> Result<FeatureMatrix, FeatureError> {
    let rows = seq
        .frames()
        .iter()
        .enumerate()
        .map(|(t, f)| frame_features_two_person(f).map_err(|e| e.at_frame(t + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    FeatureMatrix::from_rows(FEATURES_PER_FRAME, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn weight_groups_sum_to_one() {
        assert!((WEIGHTS.arm().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        assert!((WEIGHTS.leg().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn left_arm_mean_joint_worked_example() {
        let pts = [
            Vec3::new(-0.423, 0.440, 3.048),
            Vec3::new(-0.468, 0.199, 2.933),
            Vec3::new(-0.411, -0.009, 2.878),
            Vec3::new(-0.388, -0.086, 2.858),
        ];
        let j = mean_joint(pts, WEIGHTS.arm());
        // exact value of the weighted sum / 4
        assert!(close(j.x, -0.109208, 1e-12));
        assert!(close(j.y, 0.048996, 1e-12));
        assert!(close(j.z, 0.73653625, 1e-12));
        assert!(close(j.x, -0.109, 5e-4) && close(j.y, 0.049, 5e-4));
    }

    #[test]
    fn left_leg_mean_joint_worked_example() {
        let pts = [
            Vec3::new(-0.336, 0.050, 3.039),
            Vec3::new(-0.379, -0.451, 2.980),
            Vec3::new(-0.407, -0.808, 2.865),
            Vec3::new(-0.355, -0.876, 2.840),
        ];
        let j = mean_joint(pts, WEIGHTS.leg());
        for (got, want) in j.to_array().iter().zip([-0.091, -0.090, 0.743]) {
            assert!(close(*got, want, 5e-4), "{got} vs {want}");
        }
    }

    #[test]
    fn mean_joint_at_origin() {
        assert_eq!(mean_joint([Vec3::ZERO; 4], WEIGHTS.arm()), Vec3::ZERO);
    }

    #[test]
    fn cosines_worked_examples() {
        let c = direction_cosines(Vec3::new(-0.109, 0.049, 0.736)).unwrap();
        for (got, want) in c.iter().zip([-0.146, 0.066, 0.986]) {
            assert!(close(*got, want, 1.5e-3), "{got} vs {want}");
        }
        let c = direction_cosines(Vec3::new(-0.072, -0.094, 0.783)).unwrap();
        for (got, want) in c.iter().zip([-0.091, -0.119, 0.989]) {
            assert!(close(*got, want, 1.5e-3), "{got} vs {want}");
        }
        assert_eq!(direction_cosines(Vec3::new(1.0, 0.0, 0.0)).unwrap(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_vector_has_no_direction() {
        assert!(matches!(
            direction_cosines(Vec3::ZERO),
            Err(FeatureError::ZeroVector)
        ));
        assert!(direction_angles(Vec3::ZERO).is_err());
    }

    #[test]
    fn angles_of_axes() {
        assert_eq!(direction_angles(Vec3::new(1.0, 0.0, 0.0)).unwrap(), [0.0, 90.0, 90.0]);
        assert_eq!(direction_angles(Vec3::new(0.0, 0.0, 1.0)).unwrap(), [90.0, 90.0, 0.0]);
    }

    #[test]
    fn angles_of_worked_mean_joint() {
        // arccos of the normalised vector, evaluated independently at 50 digits
        let a = direction_angles(Vec3::new(-0.109, 0.049, 0.736)).unwrap();
        let want = [98.4058061653, 86.2320685789, 9.2228569601];
        for (got, w) in a.iter().zip(want) {
            assert!(close(*got, w, 1e-6), "{got} vs {w}");
        }
    }

    #[test]
    fn upright_frame_angles() {
        let f = Frame::uniform(Vec3::new(0.0, 0.0, 1.0));
        let row = frame_features_two_person(&f).unwrap();
        for j in 0..4 {
            assert_eq!(row[j * 3..j * 3 + 3], [90.0, 90.0, 0.0]);
        }
    }

    #[test]
    fn zero_mean_joint_is_reported_with_index() {
        let mut f = Frame::uniform(Vec3::new(0.0, 0.0, 2.0));
        for j in MeanJointKind::LeftLeg.joints() {
            f[j] = Vec3::ZERO;
        }
        assert!(matches!(
            frame_features_two_person(&f),
            Err(FeatureError::DegenerateDirection { mean_joint: 3, .. })
        ));
        let seq = SkeletonSequence::new(vec![Frame::uniform(Vec3::new(0.0, 0.0, 2.0)), f]).unwrap();
        assert!(matches!(
            sequence_features_two_person(&seq),
            Err(FeatureError::DegenerateDirection { frame: Some(2), mean_joint: 3 })
        ));
    }

    #[test]
    fn sequence_shapes() {
        let f = Frame::uniform(Vec3::new(0.1, -0.2, 2.4));
        let seq = SkeletonSequence::new(vec![f; 90]).unwrap();
        let m = sequence_features_two_person(&seq).unwrap();
        assert_eq!((m.rows(), m.cols()), (90, 12));
        assert_eq!(m.into_flat().len(), 1080);
        let two = SkeletonSequence::new(vec![f; 2]).unwrap();
        let m = sequence_features_two_person(&two).unwrap();
        assert_eq!(m.row(0), m.row(1));
    }
}
