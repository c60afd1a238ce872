//! Built-in synthetic gesture templates.
//!
//! These are invented kinematics: a standing skeleton whose arms (and for
//! some interactions, legs and root) move through a few keyframed limb
//! configurations. They stand in for recorded data and make no claim to
//! match real human motion. Names follow the gesture vocabularies the
//! pipeline was designed around.

use crate::skeleton::{Frame, Joint, Vec3, JOINT_COUNT};

/// Default per-coordinate jitter, meters.
pub const DEFAULT_NOISE_STD: f64 = 0.01;

/// Sensor depth range, meters.
pub const MIN_DEPTH: f64 = 1.2;
pub const MAX_DEPTH: f64 = 3.5;

/// Piecewise-linear offset path of one joint over `t` in `[0, 1]`.
///
/// Keys are `(t, offset)` with strictly increasing `t`. An empty path means
/// the joint stays at its base position.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JointPath {
    keys: Vec<(f64, Vec3)>,
}

impl JointPath {
    pub fn new(mut keys: Vec<(f64, Vec3)>) -> Self {
        keys.sort_by(|a, b| a.0.total_cmp(&b.0));
        keys.dedup_by(|a, b| a.0 == b.0);
        JointPath { keys }
    }

    pub fn keys(&self) -> &[(f64, Vec3)] {
        &self.keys
    }

    pub fn at(&self, t: f64) -> Vec3 {
        match self.keys.as_slice() {
            [] => Vec3::ZERO,
            [(_, only)] => *only,
            keys => {
                if t <= keys[0].0 {
                    return keys[0].1;
                }
                for w in keys.windows(2) {
                    let ((t0, a), (t1, b)) = (w[0], w[1]);
                    if t <= t1 {
                        let u = (t - t0) / (t1 - t0);
                        return a + (b - a) * u;
                    }
                }
                keys[keys.len() - 1].1
            }
        }
    }
}

/// A named gesture: base pose, per-joint offset paths, and jitter level.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureTemplate {
    pub name: String,
    pub base_pose: Frame,
    pub paths: Vec<JointPath>,
    pub noise_std: f64,
}

impl GestureTemplate {
    /// Template holding `base_pose` still.
    pub fn stationary(name: impl Into<String>, base_pose: Frame) -> Self {
        GestureTemplate {
            name: name.into(),
            base_pose,
            paths: vec![JointPath::default(); JOINT_COUNT],
            noise_std: DEFAULT_NOISE_STD,
        }
    }

    /// Template moving through full-body keyframe poses.
    pub fn from_keyframes(name: impl Into<String>, base_pose: Frame, poses: &[(f64, Frame)]) -> Self {
        let paths = Joint::ALL
            .iter()
            .map(|&j| {
                JointPath::new(
                    poses
                        .iter()
                        .map(|(t, f)| (*t, f[j] - base_pose[j]))
                        .collect(),
                )
            })
            .collect();
        GestureTemplate {
            name: name.into(),
            base_pose,
            paths,
            noise_std: DEFAULT_NOISE_STD,
        }
    }

    pub fn with_noise(mut self, std: f64) -> Self {
        self.noise_std = std;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Noise-free pose at `t` in `[0, 1]`.
    pub fn pose_at(&self, t: f64) -> Frame {
        let mut f = self.base_pose;
        for j in Joint::ALL {
            f[j] = f[j] + self.paths[j.index()].at(t);
        }
        f
    }

    pub fn is_static(&self) -> bool {
        self.paths.iter().all(|p| p.keys().iter().all(|(_, o)| *o == Vec3::ZERO))
    }
}

// ---------------------------------------------------------------------------
// Body model

const UPPER_ARM: f64 = 0.28;
const FOREARM: f64 = 0.25;
const HAND: f64 = 0.08;
const THIGH: f64 = 0.42;
const SHIN: f64 = 0.40;
const FOOT: f64 = 0.10;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Side {
    /// Sign of the outward x direction; the subject's left is at smaller x.
    fn out(self) -> f64 {
        match self {
            Side::Left => -1.0,
            Side::Right => 1.0,
        }
    }
}

/// Limb segment directions in the body frame `(outward, up, toward sensor)`.
#[derive(Clone, Copy)]
struct Limb {
    upper: [f64; 3],
    lower: [f64; 3],
}

const fn limb(upper: [f64; 3], lower: [f64; 3]) -> Limb {
    Limb { upper, lower }
}

fn body_dir(side: Side, d: [f64; 3]) -> Vec3 {
    let v = Vec3::new(side.out() * d[0], d[1], -d[2]);
    v * (1.0 / v.norm())
}

/// Standing pose with the hip centre at `(x, 0, z)`.
fn standing(x: f64, z: f64) -> Frame {
    let mut f = Frame::uniform(Vec3::new(x, 0.0, z));
    let p = |dx: f64, y: f64, dz: f64| Vec3::new(x + dx, y, z + dz);
    f[Joint::HipCenter] = p(0.0, 0.0, 0.0);
    f[Joint::Spine] = p(0.0, 0.12, -0.02);
    f[Joint::ShoulderCenter] = p(0.0, 0.46, -0.03);
    f[Joint::Head] = p(0.0, 0.64, -0.03);
    f[Joint::ShoulderLeft] = p(-0.18, 0.41, 0.0);
    f[Joint::ShoulderRight] = p(0.18, 0.41, 0.0);
    f[Joint::HipLeft] = p(-0.09, -0.06, 0.0);
    f[Joint::HipRight] = p(0.09, -0.06, 0.0);
    set_arm(&mut f, Side::Left, REST);
    set_arm(&mut f, Side::Right, REST);
    set_leg(&mut f, Side::Left, STAND);
    set_leg(&mut f, Side::Right, STAND);
    f
}

fn set_arm(f: &mut Frame, side: Side, l: Limb) {
    let (s, e, w, h) = match side {
        Side::Left => (Joint::ShoulderLeft, Joint::ElbowLeft, Joint::WristLeft, Joint::HandLeft),
        Side::Right => (
            Joint::ShoulderRight,
            Joint::ElbowRight,
            Joint::WristRight,
            Joint::HandRight,
        ),
    };
    let up = body_dir(side, l.upper);
    let lo = body_dir(side, l.lower);
    f[e] = f[s] + up * UPPER_ARM;
    f[w] = f[e] + lo * FOREARM;
    f[h] = f[w] + lo * HAND;
}

fn set_leg(f: &mut Frame, side: Side, l: Limb) {
    let (hip, k, a, ft) = match side {
        Side::Left => (Joint::HipLeft, Joint::KneeLeft, Joint::AnkleLeft, Joint::FootLeft),
        Side::Right => (Joint::HipRight, Joint::KneeRight, Joint::AnkleRight, Joint::FootRight),
    };
    let th = body_dir(side, l.upper);
    let sh = body_dir(side, l.lower);
    f[k] = f[hip] + th * THIGH;
    f[a] = f[k] + sh * SHIN;
    f[ft] = f[a] + body_dir(side, [0.0, -0.3, 1.0]) * FOOT;
}

fn translated(f: &Frame, d: Vec3) -> Frame {
    f.map(|p| p + d)
}

// arm configurations
const REST: Limb = limb([0.15, -1.0, 0.0], [0.1, -1.0, 0.05]);
const FORWARD: Limb = limb([0.0, 0.0, 1.0], [0.0, 0.0, 1.0]);
const FORWARD_HIGH: Limb = limb([0.0, 0.5, 1.0], [0.0, 0.8, 1.0]);
const FORWARD_LOW: Limb = limb([0.0, -0.6, 1.0], [0.0, -0.4, 1.0]);
const RAISED: Limb = limb([0.1, 1.0, 0.2], [0.0, 1.0, 0.1]);
const SIDEWAYS: Limb = limb([1.0, 0.0, 0.2], [1.0, 0.1, 0.2]);
const ACROSS: Limb = limb([-0.4, 0.0, 1.0], [-1.0, 0.0, 0.5]);
const CHEST: Limb = limb([0.3, -0.7, 0.6], [-1.0, 0.3, 0.5]);
const WAVE_OUT: Limb = limb([1.0, 0.0, 0.2], [0.6, 1.0, 0.0]);
const WAVE_IN: Limb = limb([1.0, 0.0, 0.2], [-0.6, 1.0, 0.0]);
const EAR: Limb = limb([0.4, -0.3, 0.5], [-0.3, 1.0, -0.3]);
const STOP: Limb = limb([0.0, 0.1, 1.0], [0.0, 1.0, 0.3]);
const PICK: Limb = limb([0.1, -1.0, 0.8], [0.0, -1.0, 0.4]);
const TOGETHER: Limb = limb([0.0, -0.2, 1.0], [-0.8, 0.0, 1.0]);
const APART: Limb = limb([0.6, -0.1, 1.0], [1.0, 0.1, 0.6]);
const PALMS: Limb = limb([0.3, -0.7, 0.6], [-0.9, 0.9, 0.4]);
const PLEASE: Limb = limb([0.2, -0.8, 0.6], [0.1, 0.1, 1.0]);
const FACE: Limb = limb([0.3, -0.2, 0.8], [-0.5, 1.0, 0.2]);

// leg configurations
const STAND: Limb = limb([0.0, -1.0, 0.0], [0.0, -1.0, 0.0]);
const STRIDE_FWD: Limb = limb([0.0, -1.0, 0.35], [0.0, -1.0, -0.1]);
const STRIDE_BACK: Limb = limb([0.0, -1.0, -0.3], [0.0, -1.0, -0.4]);

fn pose(x: f64, z: f64, left: Limb, right: Limb) -> Frame {
    let mut f = standing(x, z);
    set_arm(&mut f, Side::Left, left);
    set_arm(&mut f, Side::Right, right);
    f
}

fn keyed(name: &str, base: Frame, keys: &[(f64, Frame)]) -> GestureTemplate {
    GestureTemplate::from_keyframes(name, base, keys)
}

// ---------------------------------------------------------------------------
// Single-person library

const SX: f64 = 0.0;
const SZ: f64 = 2.4;

/// One-arm gesture performed with the right arm, left arm at rest.
fn right_arm(name: &str, keys: &[(f64, Limb)]) -> GestureTemplate {
    let base = standing(SX, SZ);
    let poses: Vec<(f64, Frame)> = keys.iter().map(|&(t, l)| (t, pose(SX, SZ, REST, l))).collect();
    keyed(name, base, &poses)
}

fn both_arms(name: &str, keys: &[(f64, Limb)]) -> GestureTemplate {
    let base = standing(SX, SZ);
    let poses: Vec<(f64, Frame)> = keys.iter().map(|&(t, l)| (t, pose(SX, SZ, l, l))).collect();
    keyed(name, base, &poses)
}

/// Names of the single-person templates, one-hand gestures first.
pub const SINGLE_PERSON_GESTURES: [&str; 20] = [
    "waving",
    "answering-call",
    "stop",
    "slide",
    "punching",
    "picking-up",
    "move-up",
    "move-down",
    "move-left",
    "move-right",
    "disgust",
    "clap",
    "greeting",
    "please",
    "push",
    "grab",
    "zoom-in",
    "zoom-out",
    "move-front",
    "move-back",
];

/// The eight-class synthetic benchmark.
pub const BENCHMARK_GESTURES: [&str; 8] = [
    "waving",
    "punching",
    "push",
    "clap",
    "zoom-in",
    "zoom-out",
    "move-left",
    "move-right",
];

pub fn single_person_template(name: &str) -> Option<GestureTemplate> {
    let t = match name {
        "waving" => right_arm(
            name,
            &[
                (0.0, REST),
                (0.2, WAVE_OUT),
                (0.35, WAVE_IN),
                (0.5, WAVE_OUT),
                (0.65, WAVE_IN),
                (0.8, WAVE_OUT),
                (1.0, REST),
            ],
        ),
        "answering-call" => right_arm(name, &[(0.0, REST), (0.4, EAR), (1.0, EAR)]),
        "stop" => right_arm(name, &[(0.0, REST), (0.35, STOP), (1.0, STOP)]),
        "slide" => right_arm(
            name,
            &[
                (0.0, limb([0.7, 0.0, 1.0], [0.7, 0.0, 1.0])),
                (1.0, limb([-0.5, 0.0, 1.0], [-0.5, 0.0, 1.0])),
            ],
        ),
        "punching" => right_arm(
            name,
            &[
                (0.0, CHEST),
                (0.25, FORWARD),
                (0.5, CHEST),
                (0.75, FORWARD),
                (1.0, CHEST),
            ],
        ),
        "picking-up" => right_arm(name, &[(0.0, REST), (0.5, PICK), (1.0, REST)]),
        "move-up" => right_arm(name, &[(0.0, FORWARD), (1.0, RAISED)]),
        "move-down" => right_arm(name, &[(0.0, RAISED), (1.0, FORWARD_LOW)]),
        "move-left" => right_arm(name, &[(0.0, FORWARD), (1.0, ACROSS)]),
        "move-right" => right_arm(name, &[(0.0, FORWARD), (1.0, SIDEWAYS)]),
        "disgust" => both_arms(name, &[(0.0, FACE), (0.5, FORWARD_HIGH), (1.0, FORWARD_HIGH)]),
        "clap" => both_arms(
            name,
            &[
                (0.0, APART),
                (0.2, TOGETHER),
                (0.4, APART),
                (0.6, TOGETHER),
                (0.8, APART),
                (1.0, TOGETHER),
            ],
        ),
        "greeting" => both_arms(name, &[(0.0, REST), (0.4, PALMS), (1.0, PALMS)]),
        "please" => both_arms(name, &[(0.0, REST), (0.5, PLEASE), (1.0, PLEASE)]),
        "push" => both_arms(name, &[(0.0, CHEST), (0.6, FORWARD), (1.0, FORWARD)]),
        "grab" => both_arms(name, &[(0.0, FORWARD_HIGH), (0.6, CHEST), (1.0, CHEST)]),
        "zoom-in" => both_arms(name, &[(0.0, TOGETHER), (1.0, APART)]),
        "zoom-out" => both_arms(name, &[(0.0, APART), (1.0, TOGETHER)]),
        "move-front" => both_arms(name, &[(0.0, REST), (1.0, FORWARD_LOW)]),
        "move-back" => both_arms(name, &[(0.0, FORWARD), (0.5, RAISED), (1.0, RAISED)]),
        _ => return None,
    };
    Some(t)
}

// ---------------------------------------------------------------------------
// Two-person library (one person; the right-hand subject is canonical)

/// Where the canonical right-hand subject stands.
pub const RIGHT_PERSON_X: f64 = 0.45;
pub const RIGHT_PERSON_Z: f64 = 2.8;

pub const INTERACTION_ACTIONS: [&str; 8] = [
    "approaching",
    "departing",
    "exchanging",
    "hugging",
    "shaking-hands",
    "punching",
    "pushing",
    "kicking",
];

/// Preset left/right action pairs.
pub const INTERACTION_PRESETS: [(&str, &str); 10] = [
    ("approaching", "departing"),
    ("exchanging", "shaking-hands"),
    ("approaching", "hugging"),
    ("punching", "departing"),
    ("shaking-hands", "pushing"),
    ("pushing", "kicking"),
    ("approaching", "shaking-hands"),
    ("kicking", "departing"),
    ("punching", "kicking"),
    ("exchanging", "departing"),
];

// Toward the partner (at smaller x for the right-hand subject): the left
// arm's outward direction points at the partner, the right arm's away.
const R_REACH: Limb = limb([-0.6, -0.2, 0.5], [-1.0, 0.0, 0.3]);
const R_SHAKE_HI: Limb = limb([-0.3, -0.6, 0.6], [-0.8, 0.1, 0.4]);
const R_SHAKE_LO: Limb = limb([-0.3, -0.6, 0.6], [-0.8, -0.25, 0.4]);
const R_PUNCH: Limb = limb([-0.8, 0.3, 0.4], [-1.0, 0.2, 0.2]);
const R_GUARD: Limb = limb([0.2, -0.8, 0.5], [-0.6, 0.9, 0.3]);
const L_HUG: Limb = limb([0.8, 0.3, 0.6], [0.6, 0.1, 0.8]);
const R_HUG: Limb = limb([-0.5, 0.3, 0.6], [-1.0, 0.1, 0.5]);
const L_PUSH: Limb = limb([0.8, 0.0, 0.4], [1.0, 0.1, 0.1]);
const R_PUSH: Limb = limb([-0.6, 0.0, 0.4], [-1.0, 0.1, 0.1]);
const L_PUSH_LOAD: Limb = limb([0.3, -0.5, 0.6], [0.5, 0.8, 0.2]);
const R_PUSH_LOAD: Limb = limb([-0.2, -0.6, 0.6], [-0.5, 0.8, 0.2]);
const R_KICK: Limb = limb([-0.6, -0.6, 0.5], [-1.0, -0.3, 0.4]);
const R_KICK_CHAMBER: Limb = limb([-0.3, -0.3, 0.8], [0.0, -1.0, 0.0]);

fn person(dx: f64, left: Limb, right: Limb, left_leg: Limb, right_leg: Limb) -> Frame {
    let mut f = standing(RIGHT_PERSON_X, RIGHT_PERSON_Z);
    set_arm(&mut f, Side::Left, left);
    set_arm(&mut f, Side::Right, right);
    set_leg(&mut f, Side::Left, left_leg);
    set_leg(&mut f, Side::Right, right_leg);
    translated(&f, Vec3::new(dx, 0.0, 0.0))
}

fn walking(name: &str, dx_total: f64) -> GestureTemplate {
    let base = standing(RIGHT_PERSON_X, RIGHT_PERSON_Z);
    let steps = 6;
    let keys: Vec<(f64, Frame)> = (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            let (l, r) = if i % 2 == 0 {
                (STRIDE_FWD, STRIDE_BACK)
            } else {
                (STRIDE_BACK, STRIDE_FWD)
            };
            let (la, ra) = if i % 2 == 0 {
                (limb([0.1, -1.0, -0.2], [0.1, -1.0, -0.1]), limb([0.1, -1.0, 0.3], [0.1, -1.0, 0.3]))
            } else {
                (limb([0.1, -1.0, 0.3], [0.1, -1.0, 0.3]), limb([0.1, -1.0, -0.2], [0.1, -1.0, -0.1]))
            };
            (t, person(dx_total * t, la, ra, l, r))
        })
        .collect();
    keyed(name, base, &keys)
}

pub fn interaction_template(name: &str) -> Option<GestureTemplate> {
    let base = standing(RIGHT_PERSON_X, RIGHT_PERSON_Z);
    let t = match name {
        "approaching" => walking(name, -0.35),
        "departing" => walking(name, 0.35),
        "exchanging" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, REST, REST, STAND, STAND)),
                (0.5, person(0.0, REST, R_REACH, STAND, STAND)),
                (0.7, person(0.0, REST, R_REACH, STAND, STAND)),
                (1.0, person(0.0, REST, CHEST, STAND, STAND)),
            ],
        ),
        "hugging" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, REST, REST, STAND, STAND)),
                (0.5, person(-0.1, L_HUG, R_HUG, STAND, STAND)),
                (1.0, person(-0.1, L_HUG, R_HUG, STAND, STAND)),
            ],
        ),
        "shaking-hands" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, REST, REST, STAND, STAND)),
                (0.3, person(0.0, REST, R_SHAKE_HI, STAND, STAND)),
                (0.45, person(0.0, REST, R_SHAKE_LO, STAND, STAND)),
                (0.6, person(0.0, REST, R_SHAKE_HI, STAND, STAND)),
                (0.75, person(0.0, REST, R_SHAKE_LO, STAND, STAND)),
                (1.0, person(0.0, REST, R_SHAKE_HI, STAND, STAND)),
            ],
        ),
        "punching" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, R_GUARD, R_GUARD, STAND, STAND)),
                (0.3, person(0.0, R_GUARD, R_PUNCH, STAND, STAND)),
                (0.5, person(0.0, R_GUARD, R_GUARD, STAND, STAND)),
                (0.8, person(0.0, R_GUARD, R_PUNCH, STAND, STAND)),
                (1.0, person(0.0, R_GUARD, R_GUARD, STAND, STAND)),
            ],
        ),
        "pushing" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, L_PUSH_LOAD, R_PUSH_LOAD, STAND, STAND)),
                (0.5, person(-0.05, L_PUSH, R_PUSH, STAND, STRIDE_BACK)),
                (1.0, person(-0.05, L_PUSH, R_PUSH, STAND, STRIDE_BACK)),
            ],
        ),
        "kicking" => keyed(
            name,
            base,
            &[
                (0.0, person(0.0, REST, REST, STAND, STAND)),
                (0.3, person(0.0, SIDEWAYS, SIDEWAYS, STAND, R_KICK_CHAMBER)),
                (0.5, person(0.0, SIDEWAYS, SIDEWAYS, STAND, R_KICK)),
                (0.7, person(0.0, SIDEWAYS, SIDEWAYS, STAND, R_KICK_CHAMBER)),
                (1.0, person(0.0, REST, REST, STAND, STAND)),
            ],
        ),
        _ => return None,
    };
    Some(t)
}

/// Static standing template of the single-person library.
pub fn standing_template(name: &str) -> GestureTemplate {
    GestureTemplate::stationary(name, standing(SX, SZ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_interpolates_linearly_and_clamps() {
        let p = JointPath::new(vec![
            (0.0, Vec3::ZERO),
            (0.5, Vec3::new(1.0, 0.0, 0.0)),
            (1.0, Vec3::new(1.0, 2.0, 0.0)),
        ]);
        assert_eq!(p.at(0.25), Vec3::new(0.5, 0.0, 0.0));
        assert_eq!(p.at(0.75), Vec3::new(1.0, 1.0, 0.0));
        assert_eq!(p.at(-1.0), Vec3::ZERO);
        assert_eq!(p.at(2.0), Vec3::new(1.0, 2.0, 0.0));
        assert_eq!(JointPath::default().at(0.3), Vec3::ZERO);
    }

    #[test]
    fn every_named_template_exists() {
        for n in SINGLE_PERSON_GESTURES {
            let t = single_person_template(n).unwrap_or_else(|| panic!("{n}"));
            assert_eq!(t.name, n);
            assert!(!t.is_static(), "{n} should move");
        }
        for n in INTERACTION_ACTIONS {
            assert!(interaction_template(n).is_some(), "{n}");
        }
        for (l, r) in INTERACTION_PRESETS {
            assert!(INTERACTION_ACTIONS.contains(&l) && INTERACTION_ACTIONS.contains(&r));
        }
        assert!(single_person_template("moonwalk").is_none());
    }

    #[test]
    fn templates_stay_inside_sensor_range() {
        let all = SINGLE_PERSON_GESTURES
            .iter()
            .map(|n| single_person_template(n).unwrap())
            .chain(INTERACTION_ACTIONS.iter().map(|n| interaction_template(n).unwrap()));
        for t in all {
            for i in 0..=50 {
                let f = t.pose_at(i as f64 / 50.0);
                for j in Joint::ALL {
                    let z = f[j].z;
                    assert!((MIN_DEPTH..=MAX_DEPTH).contains(&z), "{} {j:?} z={z}", t.name);
                }
            }
        }
    }

    #[test]
    fn limb_segments_keep_their_length_at_keyframes() {
        let t = single_person_template("waving").unwrap();
        for &(k, _) in t.paths[Joint::ElbowRight.index()].keys() {
            let f = t.pose_at(k);
            let d = f[Joint::ShoulderRight].distance(f[Joint::ElbowRight]);
            assert!((d - UPPER_ARM).abs() < 1e-9, "{d}");
            let d = f[Joint::ElbowRight].distance(f[Joint::WristRight]);
            assert!((d - FOREARM).abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn keyframes_are_hit_exactly() {
        let t = single_person_template("zoom-in").unwrap();
        let start = pose(SX, SZ, TOGETHER, TOGETHER);
        let f = t.pose_at(0.0);
        for j in Joint::ALL {
            assert!(f[j].distance(start[j]) < 1e-12);
        }
    }
}
