//! Trains a per-person model on interaction actions and labels both people
//! of each preset pair.
//!
//! cargo run --release --example interactions

use skelgest::classifiers::ClassifierKind;
use skelgest::features::FeatureKind;
use skelgest::harness::{
    build_dataset, classify_interaction, generate_interaction, ClassifierConfig, ExperimentConfig,
    INTERACTION_ACTIONS, INTERACTION_PRESETS,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig {
        features: FeatureKind::TwoPerson,
        classes: INTERACTION_ACTIONS.map(String::from).to_vec(),
        samples_per_class: 8,
        frames: 60,
        ..ExperimentConfig::default()
    };
    let data = build_dataset(&config, FeatureKind::TwoPerson)?;
    let model = ClassifierConfig::new(ClassifierKind::Svm)
        .to_spec(config.seed)
        .train(&data)?;

    let mut correct = 0;
    for (i, (left, right)) in INTERACTION_PRESETS.iter().enumerate() {
        let pair = generate_interaction(left, right, config.frames, 100 + i as u64)?;
        let (l, r) = classify_interaction(&model, &pair)?;
        correct += (l == *left) as usize + (r == *right) as usize;
        println!("{left:>14} / {right:<14} -> {l} / {r}");
    }
    println!("{correct}/{} people labelled correctly", 2 * INTERACTION_PRESETS.len());
    Ok(())
}
