use rand::Rng;
use rand_distr::Normal;

use super::templates::{interaction_template, GestureTemplate, MAX_DEPTH, MIN_DEPTH};
use super::HarnessError;
use crate::classifiers::{flatten_sequence, TrainedModel};
use crate::features::FeatureKind;
use crate::skeleton::{Frame, Joint, SkeletonSequence};

/// Samples `frames` poses at uniform `t` and adds per-coordinate jitter,
/// drawing from RNG stream 0 of `seed`.
pub fn generate_sequence(
    template: &GestureTemplate,
    frames: usize,
    seed: u64,
) -> Result<SkeletonSequence, HarnessError> {
    generate_sequence_stream(template, frames, seed, 0)
}

/// [`generate_sequence`] on an explicit RNG stream.
///
/// The depth range is checked on the noise-free path, so a valid template
/// never fails because of an unlucky draw.
pub fn generate_sequence_stream(
    template: &GestureTemplate,
    frames: usize,
    seed: u64,
    stream: u64,
) -> Result<SkeletonSequence, HarnessError> {
    if frames == 0 {
        return Err(HarnessError::InvalidConfig("frame count must be at least 1".into()));
    }
    let std = template.noise_std;
    if !(std >= 0.0 && std.is_finite()) {
        return Err(HarnessError::InvalidConfig(format!(
            "template {:?}: noise_std must be finite and non-negative, got {std}",
            template.name
        )));
    }
    let normal = Normal::new(0.0, std).expect("checked above");
    let mut rng = crate::rng(seed, stream);
    let mut out = Vec::with_capacity(frames);
    for i in 0..frames {
        let t = if frames == 1 {
            0.0
        } else {
            i as f64 / (frames - 1) as f64
        };
        let clean = template.pose_at(t);
        check_depth(&clean, i + 1)?;
        let noisy = if std == 0.0 {
            clean
        } else {
            clean.map(|p| {
                let mut q = p;
                q.x += rng.sample(normal);
                q.y += rng.sample(normal);
                q.z += rng.sample(normal);
                q
            })
        };
        out.push(noisy);
    }
    Ok(SkeletonSequence::new(out)?.with_label(template.name.clone()))
}

fn check_depth(f: &Frame, frame: usize) -> Result<(), HarnessError> {
    for joint in Joint::ALL {
        let depth = f[joint].z;
        if !(MIN_DEPTH..=MAX_DEPTH).contains(&depth) {
            return Err(HarnessError::DepthRangeViolation { frame, joint, depth });
        }
    }
    Ok(())
}

/// Two people recorded together, one sequence each.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub left: SkeletonSequence,
    pub right: SkeletonSequence,
}

/// Generates an interaction from two per-person actions.
///
/// The right person performs `right_action` on stream 1. The left person's
/// action is generated for the canonical right-hand position on stream 0
/// and then mirrored in x so the two face each other across the sensor
/// axis.
pub fn generate_interaction(
    left_action: &str,
    right_action: &str,
    frames: usize,
    seed: u64,
) -> Result<Interaction, HarnessError> {
    let lookup = |n: &str| {
        interaction_template(n).ok_or_else(|| HarnessError::UnknownTemplate(n.to_string()))
    };
    let (lt, rt) = (lookup(left_action)?, lookup(right_action)?);
    let left = generate_sequence_stream(&lt, frames, seed, 0)?.mirrored_x();
    let right = generate_sequence_stream(&rt, frames, seed, 1)?;
    Ok(Interaction { left, right })
}

/// Labels both people of an interaction with a per-person model trained on
/// right-hand (canonical) sequences. Returns `(left, right)` labels.
pub fn classify_interaction(
    model: &TrainedModel,
    interaction: &Interaction,
) -> Result<(String, String), HarnessError> {
    let label = |seq: &SkeletonSequence| -> Result<String, HarnessError> {
        let m = FeatureKind::TwoPerson.extract(seq)?;
        Ok(model.predict(&flatten_sequence(&m))?.label)
    };
    Ok((label(&interaction.left.mirrored_x())?, label(&interaction.right)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{single_person_template, standing_template};
    use crate::skeleton::Vec3;

    #[test]
    fn static_noise_free_template_repeats_one_frame() {
        let t = standing_template("still").with_noise(0.0);
        let s = generate_sequence(&t, 12, 3).unwrap();
        assert_eq!(s.len(), 12);
        assert!(s.frames().iter().all(|f| *f == s.frames()[0]));
        assert_eq!(s.source_label.as_deref(), Some("still"));
    }

    #[test]
    fn same_seed_same_sequence_other_seed_differs() {
        let t = single_person_template("clap").unwrap();
        let a = generate_sequence(&t, 30, 5).unwrap();
        assert_eq!(a, generate_sequence(&t, 30, 5).unwrap());
        assert_ne!(a, generate_sequence(&t, 30, 6).unwrap());
        assert_ne!(a, generate_sequence_stream(&t, 30, 5, 1).unwrap());
    }

    #[test]
    fn single_frame_samples_the_start() {
        let t = single_person_template("zoom-in").unwrap().with_noise(0.0);
        let s = generate_sequence(&t, 1, 0).unwrap();
        assert_eq!(s.frames()[0], t.pose_at(0.0));
        assert!(generate_sequence(&t, 0, 0).is_err());
    }

    #[test]
    fn out_of_range_depth_is_reported() {
        let mut t = standing_template("far").with_noise(0.0);
        t.base_pose = t.base_pose.map(|p| p + Vec3::new(0.0, 0.0, 2.0));
        assert!(matches!(
            generate_sequence(&t, 3, 0),
            Err(HarnessError::DepthRangeViolation { frame: 1, .. })
        ));
    }

    #[test]
    fn negative_noise_is_rejected() {
        let t = standing_template("x").with_noise(-1.0);
        assert!(matches!(generate_sequence(&t, 3, 0), Err(HarnessError::InvalidConfig(_))));
    }

    #[test]
    fn interaction_people_stand_on_opposite_sides() {
        let i = generate_interaction("approaching", "kicking", 20, 1).unwrap();
        let hip = |s: &SkeletonSequence| s.frames()[0][Joint::HipCenter].x;
        assert!(hip(&i.left) < 0.0 && hip(&i.right) > 0.0);
        assert!(matches!(
            generate_interaction("waltz", "kicking", 20, 1),
            Err(HarnessError::UnknownTemplate(_))
        ));
    }
}
