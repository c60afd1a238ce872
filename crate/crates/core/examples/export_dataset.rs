//! Saves an experiment config, generates its corpus into a directory with a
//! label manifest, and reads the manifest back.
//!
//! cargo run --example export_dataset [dir]

use skelgest::harness::{export_dataset, generate_corpus, read_manifest, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("skelgest-export-example"));
    std::fs::create_dir_all(&dir)?;

    let config = ExperimentConfig {
        samples_per_class: 3,
        frames: 30,
        ..ExperimentConfig::default()
    };
    config.save(dir.join("experiment.toml"))?;
    let reloaded = ExperimentConfig::load(dir.join("experiment.toml"))?;
    assert_eq!(reloaded, config);

    let templates = config.templates(config.features)?;
    let corpus = generate_corpus(&templates, config.samples_per_class, config.frames, config.seed)?;
    let manifest = export_dataset(&dir, &corpus)?;
    let rows = read_manifest(&manifest)?;
    println!("wrote {} sequences to {}", rows.len(), dir.display());
    for (path, label) in rows.iter().take(4) {
        println!("  {} -> {label}", path.display());
    }
    Ok(())
}
