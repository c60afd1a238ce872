//! Runs the eight-class synthetic benchmark with each classifier.
//!
//! cargo run --release --example benchmark [seed]

use skelgest::classifiers::ClassifierKind;
use skelgest::harness::{run_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    for kind in [ClassifierKind::Svm, ClassifierKind::Edt, ClassifierKind::Knn] {
        let config = ExperimentConfig {
            seed,
            ..ExperimentConfig::default()
        }
        .with_classifier(kind);
        let report = run_experiment(&config)?;
        println!(
            "{kind}: test accuracy {:.4}, macro accuracy {:.4}, macro f1 {:.4} ({})",
            report.overall_accuracy(),
            report.macro_accuracy(),
            report.metrics.macro_avg.f1,
            report.render_timings().trim_end()
        );
    }
    Ok(())
}
