//! Ranks four algorithms over three datasets and runs the Friedman test.
//!
//! cargo run --example friedman

use skelgest::evaluation::{friedman, rank_algorithms};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let names: Vec<String> = ["SVM", "kNN", "EDT", "LMA-NN"].map(String::from).to_vec();
    let scores = vec![
        vec![0.89, 0.88, 0.90],
        vec![0.71, 0.70, 0.69],
        vec![0.85, 0.84, 0.80],
        vec![0.80, 0.83, 0.82],
    ];
    let ranks = rank_algorithms(&scores)?;
    let result = friedman(&ranks)?;
    print!("{}", result.render(&names));
    Ok(())
}
