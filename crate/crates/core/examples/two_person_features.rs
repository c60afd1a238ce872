//! Computes the weighted mean joints of a frame and their direction angles.
//!
//! cargo run --example two_person_features

use skelgest::features::{direction_cosines, frame_features_two_person, MeanJointKind};
use skelgest::harness::{generate_interaction, INTERACTION_PRESETS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (left, right) = INTERACTION_PRESETS[1];
    let pair = generate_interaction(left, right, 60, 5)?;
    let frame = &pair.right.frames()[30];

    for kind in MeanJointKind::ALL {
        let p = kind.position(frame);
        let [a, b, g] = direction_cosines(p)?;
        println!(
            "{kind:?}: ({:.3}, {:.3}, {:.3})  cos = ({a:.3}, {b:.3}, {g:.3})",
            p.x, p.y, p.z
        );
    }
    let angles = frame_features_two_person(frame)?;
    let shown: Vec<String> = angles.iter().map(|a| format!("{a:.2}")).collect();
    println!("angles (deg): {}", shown.join(", "));
    Ok(())
}
