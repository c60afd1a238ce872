//! Trains each classifier on a small synthetic dataset, saves the model,
//! reloads it and checks the predictions agree.
//!
//! cargo run --release --example classifiers

use skelgest::classifiers::{load_model, save_model, ClassifierKind};
use skelgest::features::FeatureKind;
use skelgest::harness::{build_dataset, split, ClassifierConfig, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig {
        samples_per_class: 10,
        frames: 45,
        ..ExperimentConfig::default()
    };
    let data = build_dataset(&config, FeatureKind::Single)?;
    let (train, test) = split(&data, config.split_fraction, config.seed)?;
    let dir = std::env::temp_dir().join("skelgest-classifiers-example");
    std::fs::create_dir_all(&dir)?;

    for kind in [ClassifierKind::Svm, ClassifierKind::Edt, ClassifierKind::Knn] {
        let spec = ClassifierConfig::new(kind).to_spec(config.seed);
        let model = spec.train(&train)?;
        let path = dir.join(format!("{kind}.json"));
        save_model(&model, &path)?;
        let reloaded = load_model(&path)?;
        assert_eq!(reloaded.predict_many(test.vectors())?, model.predict_many(test.vectors())?);
        println!(
            "{kind}: train {:.3}, test {:.3}, model {} bytes",
            model.accuracy_on(&train)?,
            model.accuracy_on(&test)?,
            std::fs::metadata(&path)?.len()
        );
    }
    Ok(())
}
