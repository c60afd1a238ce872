//! Extracts the six per-frame distance features from a single person.
//!
//! cargo run --example single_features [gesture]

use skelgest::features::{sequence_features_single, FeatureKind};
use skelgest::harness::{generate_sequence, single_person_template, SINGLE_PERSON_GESTURES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "clap".into());
    let Some(template) = single_person_template(&name) else {
        return Err(format!("unknown gesture {name:?}; try one of {SINGLE_PERSON_GESTURES:?}").into());
    };
    let seq = generate_sequence(&template, 90, 3)?;
    let m = sequence_features_single(&seq)?;

    println!("{}", FeatureKind::Single.header().join("  "));
    for t in (0..m.rows()).step_by(15) {
        let row: Vec<String> = m.row(t).iter().map(|v| format!("{v:.4}")).collect();
        println!("{}", row.join(" "));
    }
    println!("{} frames x {} features = {} values", m.rows(), m.cols(), m.as_slice().len());
    Ok(())
}
