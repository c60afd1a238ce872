use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::experiment::ExperimentConfig;
use super::generate::generate_sequence_stream;
use super::templates::GestureTemplate;
use super::HarnessError;
use crate::classifiers::{flatten_sequence, LabeledDataset};
use crate::features::FeatureKind;
use crate::skeleton::{write_skeleton_file, SkeletonSequence};

/// File name of the labels manifest written by [`export_dataset`].
pub const MANIFEST_NAME: &str = "labels.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSequence {
    pub label: String,
    pub sequence: SkeletonSequence,
}

/// `samples_per_class` sequences of every template, class-major.
///
/// Sample `c * samples_per_class + s` uses RNG stream of the same index.
pub fn generate_corpus(
    templates: &[GestureTemplate],
    samples_per_class: usize,
    frames: usize,
    seed: u64,
) -> Result<Vec<LabeledSequence>, HarnessError> {
    let n = templates.len() * samples_per_class;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let t = &templates[i / samples_per_class];
            Ok(LabeledSequence {
                label: t.name.clone(),
                sequence: generate_sequence_stream(t, frames, seed, i as u64)?,
            })
        })
        .collect()
}

/// Featurizes and flattens every sequence. `labels` is the declared label
/// set and may name classes with no sequences.
pub fn featurize_corpus(
    corpus: &[LabeledSequence],
    labels: Vec<String>,
    kind: FeatureKind,
) -> Result<LabeledDataset, HarnessError> {
    let samples = corpus
        .par_iter()
        .map(|s| {
            let m = kind.extract(&s.sequence)?;
            Ok((flatten_sequence(&m), s.label.clone()))
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(LabeledDataset::with_labels(labels, samples)?)
}

pub fn build_dataset_from_templates(
    templates: &[GestureTemplate],
    samples_per_class: usize,
    frames: usize,
    seed: u64,
    kind: FeatureKind,
) -> Result<LabeledDataset, HarnessError> {
    if samples_per_class == 0 {
        return Err(HarnessError::InvalidConfig("samples_per_class must be at least 1".into()));
    }
    let corpus = generate_corpus(templates, samples_per_class, frames, seed)?;
    let labels = templates.iter().map(|t| t.name.clone()).collect();
    featurize_corpus(&corpus, labels, kind)
}

/// Generates and featurizes the dataset described by `config`, looking the
/// classes up in the built-in library for `kind`.
pub fn build_dataset(config: &ExperimentConfig, kind: FeatureKind) -> Result<LabeledDataset, HarnessError> {
    config.validate()?;
    let templates = config.templates(kind)?;
    build_dataset_from_templates(&templates, config.samples_per_class, config.frames, config.seed, kind)
}

/// Stratified split into `(train, test)` sample indices, both ascending.
///
/// Class `c` is shuffled on RNG stream `c`; its training share is
/// `round(fraction * n_c)` clamped so both sides get at least one sample.
pub fn split_indices(
    data: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>), HarnessError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(HarnessError::InvalidConfig(format!(
            "split fraction must lie in (0, 1), got {fraction}"
        )));
    }
    let mut by_class = vec![Vec::new(); data.n_classes()];
    for (i, &t) in data.targets().iter().enumerate() {
        by_class[t].push(i);
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (c, mut idx) in by_class.into_iter().enumerate() {
        let n = idx.len();
        if n < 2 {
            return Err(HarnessError::StratifyError {
                label: data.labels()[c].clone(),
                count: n,
            });
        }
        idx.shuffle(&mut crate::rng(seed, c as u64));
        let k = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn split(
    data: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset), HarnessError> {
    let (a, b) = split_indices(data, fraction, seed)?;
    Ok((data.subset(&a), data.subset(&b)))
}

/// Writes each sequence as `NNNNN_label.txt` in the skeleton text format
/// plus a [`MANIFEST_NAME`] of `filename,label` lines. Returns the manifest
/// path.
pub fn export_dataset(dir: impl AsRef<Path>, corpus: &[LabeledSequence]) -> Result<PathBuf, HarnessError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut rows = Vec::with_capacity(corpus.len());
    for (i, s) in corpus.iter().enumerate() {
        let name = format!("{i:05}_{}.txt", s.label);
        write_skeleton_file(dir.join(&name), &s.sequence)?;
        rows.push((name, s.label.clone()));
    }
    let path = dir.join(MANIFEST_NAME);
    write_manifest(&path, &rows)?;
    Ok(path)
}

/// Headerless `filename,label` CSV.
pub fn write_manifest(path: impl AsRef<Path>, rows: &[(String, String)]) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for (f, l) in rows {
        w.write_record([f, l])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a manifest, resolving relative file names against the manifest's
/// directory. A leading `filename,label` header row is skipped.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<(PathBuf, String)>, HarnessError> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new("."));
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(HarnessError::Manifest(format!(
                "line {}: expected `filename,label`, got {} field(s)",
                i + 1,
                rec.len()
            )));
        }
        if i == 0 && &rec[0] == "filename" && &rec[1] == "label" {
            continue;
        }
        if rec[0].is_empty() || rec[1].is_empty() {
            return Err(HarnessError::Manifest(format!("line {}: empty field", i + 1)));
        }
        out.push((base.join(&rec[0]), rec[1].to_string()));
    }
    if out.is_empty() {
        return Err(HarnessError::Manifest("manifest lists no files".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::single_person_template;
    use crate::skeleton::read_skeleton_file;
    use std::collections::BTreeSet;

    fn toy(counts: &[usize]) -> LabeledDataset {
        let mut s = Vec::new();
        for (c, &n) in counts.iter().enumerate() {
            for i in 0..n {
                s.push((vec![i as f64, c as f64], format!("k{c}")));
            }
        }
        LabeledDataset::new(s).unwrap()
    }

    #[test]
    fn split_is_stratified_disjoint_and_exhaustive() {
        let d = toy(&[50, 30, 20]);
        let (tr, te) = split_indices(&d, 0.8, 4).unwrap();
        assert_eq!((tr.len(), te.len()), (80, 20));
        let a: BTreeSet<_> = tr.iter().copied().collect();
        let b: BTreeSet<_> = te.iter().copied().collect();
        assert!(a.is_disjoint(&b));
        assert_eq!(a.union(&b).count(), 100);
        let (train, _) = split(&d, 0.8, 4).unwrap();
        assert_eq!(train.class_counts(), vec![40, 24, 16]);
        assert_eq!(split_indices(&d, 0.8, 4).unwrap(), (tr, te));
    }

    #[test]
    fn split_rejects_singletons_and_bad_fractions() {
        assert!(matches!(
            split(&toy(&[5, 1]), 0.5, 0),
            Err(HarnessError::StratifyError { count: 1, .. })
        ));
        for f in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(split(&toy(&[5, 5]), f, 0).is_err());
        }
    }

    #[test]
    fn two_samples_per_class_always_split_one_one() {
        let (a, b) = split(&toy(&[2, 2]), 0.99, 1).unwrap();
        assert_eq!((a.len(), b.len()), (2, 2));
    }

    #[test]
    fn corpus_is_class_major_and_parallel_safe() {
        let ts: Vec<_> = ["clap", "push"].iter().map(|n| single_person_template(n).unwrap()).collect();
        let c = generate_corpus(&ts, 3, 10, 2).unwrap();
        let labels: Vec<_> = c.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["clap", "clap", "clap", "push", "push", "push"]);
        let seq4 = generate_sequence_stream(&ts[1], 10, 2, 4).unwrap();
        assert_eq!(c[4].sequence, seq4);
    }

    #[test]
    fn one_class_builds_but_does_not_train() {
        let ts = vec![single_person_template("clap").unwrap()];
        let d = build_dataset_from_templates(&ts, 4, 10, 0, FeatureKind::Single).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.check_trainable().is_err());
    }

    #[test]
    fn export_and_manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let ts = vec![single_person_template("push").unwrap()];
        let c = generate_corpus(&ts, 2, 5, 0).unwrap();
        let m = export_dataset(dir.path(), &c).unwrap();
        let rows = read_manifest(&m).unwrap();
        assert_eq!(rows.len(), 2);
        for ((p, l), s) in rows.iter().zip(&c) {
            assert_eq!(l, "push");
            assert_eq!(read_skeleton_file(p).unwrap().frames(), s.sequence.frames());
        }
    }

    #[test]
    fn manifest_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.csv");
        std::fs::write(&p, "a.txt,x,extra\n").unwrap();
        assert!(matches!(read_manifest(&p), Err(HarnessError::Manifest(_))));
        std::fs::write(&p, "filename,label\n").unwrap();
        assert!(matches!(read_manifest(&p), Err(HarnessError::Manifest(_))));
        std::fs::write(&p, "filename,label\nf.csv,x\n").unwrap();
        assert_eq!(read_manifest(&p).unwrap()[0].1, "x");
    }
}
