//! Versioned model files.
//!
//! A model file is a JSON document:
//!
//! ```text
//! {
//!   "format": "skelgest-model",
//!   "version": 1,
//!   "model": { "kind": "svm" | "edt" | "knn", ... }
//! }
//! ```
//!
//! Floats are written in shortest round-trip form and read back exactly,
//! so a reloaded model reproduces every score bit for bit. Loading checks
//! the header and the internal consistency of the model.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClassifierError, TrainedModel};

pub const FORMAT_NAME: &str = "skelgest-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<M> {
    format: String,
    version: u32,
    model: M,
}

pub fn model_to_string(model: &TrainedModel) -> Result<String, ClassifierError> {
    let env = Envelope {
        format: FORMAT_NAME.to_string(),
        version: FORMAT_VERSION,
        model,
    };
    serde_json::to_string_pretty(&env).map_err(|e| ClassifierError::ModelFormat(e.to_string()))
}

pub fn model_from_str(text: &str) -> Result<TrainedModel, ClassifierError> {
    let env: Envelope<TrainedModel> =
        serde_json::from_str(text).map_err(|e| ClassifierError::ModelFormat(e.to_string()))?;
    if env.format != FORMAT_NAME {
        return Err(ClassifierError::ModelFormat(format!(
            "unexpected format {:?}",
            env.format
        )));
    }
    if env.version != FORMAT_VERSION {
        return Err(ClassifierError::ModelFormat(format!(
            "unsupported version {}",
            env.version
        )));
    }
    validate(&env.model).map_err(ClassifierError::ModelFormat)?;
    Ok(env.model)
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<(), ClassifierError> {
    std::fs::write(path, model_to_string(model)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel, ClassifierError> {
    let text = std::fs::read_to_string(path)?;
    model_from_str(&text)
}

fn validate(model: &TrainedModel) -> Result<(), String> {
    let labels = model.labels();
    if labels.len() < 2 {
        return Err("model needs at least two labels".into());
    }
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err("labels must be strictly ascending".into());
    }
    let dim = model.dim();
    match model {
        TrainedModel::Svm(m) => {
            if m.machines.len() != labels.len() {
                return Err("one machine per label required".into());
            }
            if !(m.sigma > 0.0) {
                return Err("sigma must be positive".into());
            }
            for (i, mac) in m.machines.iter().enumerate() {
                if mac.support_vectors.len() != mac.coefficients.len() {
                    return Err(format!("machine {i}: coefficient count mismatch"));
                }
                if mac.support_vectors.iter().any(|v| v.len() != dim) {
                    return Err(format!("machine {i}: support vector length mismatch"));
                }
            }
        }
        TrainedModel::Edt(m) => {
            if m.trees.is_empty() {
                return Err("ensemble has no trees".into());
            }
            for (i, t) in m.trees.iter().enumerate() {
                t.validate(labels.len(), dim)
                    .map_err(|e| format!("tree {i}: {e}"))?;
            }
        }
        TrainedModel::Knn(m) => {
            if m.k == 0 || m.k > m.vectors.len() {
                return Err("k out of range".into());
            }
            if m.vectors.len() != m.targets.len() {
                return Err("vector/target count mismatch".into());
            }
            if m.vectors.iter().any(|v| v.len() != dim) {
                return Err("stored vector length mismatch".into());
            }
            if m.targets.iter().any(|&t| t >= labels.len()) {
                return Err("target out of range".into());
            }
        }
    }
    Ok(())
}
