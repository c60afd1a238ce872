//! Per-class and macro metrics from a confusion matrix.
//!
//! cargo run --example metrics

use skelgest::evaluation::{confusion, MetricsReport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let labels: Vec<String> = ["clap", "push", "wave"].map(String::from).to_vec();
    let truth = ["clap", "clap", "clap", "push", "push", "push", "wave", "wave", "wave", "wave"];
    let pred = ["clap", "clap", "push", "push", "push", "push", "wave", "wave", "clap", "wave"];

    let cm = confusion(&labels, &truth, &pred)?;
    print!("{}", cm.render());
    let report = MetricsReport::from_confusion(&cm)?;
    report.write_csv(std::io::stdout())?;
    println!("overall accuracy {:.4}", report.overall_accuracy);
    Ok(())
}
