mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use skelgest::harness::{generate_sequence, single_person_template};
use skelgest::skeleton::write_skeleton_file;

fn skelgest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skelgest"))
        .args(args)
        .env_remove("SKELGEST_SEED")
        .output()
        .unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Two well separated Gaussian blobs per class, one 1x4 feature CSV each.
fn blob_manifest(dir: &Path, classes: &[&str], per_class: usize, seed: u64) -> PathBuf {
    let mut rng = skelgest::rng(seed, 0);
    let mut lines = String::new();
    for (c, label) in classes.iter().enumerate() {
        for i in 0..per_class {
            let name = format!("{label}_{i}.csv");
            let row: Vec<String> = (0..4)
                .map(|d| {
                    let centre = if d == c % 4 { 3.0 } else { 0.0 };
                    (centre + rng.random_range(-0.5..0.5f64)).to_string()
                })
                .collect();
            fs::write(dir.join(&name), format!("f1,f2,f3,f4\n{}\n", row.join(","))).unwrap();
            lines.push_str(&format!("{name},{label}\n"));
        }
    }
    let m = dir.join("blobs.csv");
    fs::write(&m, lines).unwrap();
    m
}

#[test]
fn extract_single_features_from_90_frames() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("wave.txt");
    let seq = generate_sequence(&single_person_template("waving").unwrap(), 90, 1).unwrap();
    write_skeleton_file(&input, &seq).unwrap();
    let out = skelgest(&["extract-features", "--input", p(&input), "--mode", "single"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = text(&out.stdout);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "frame,d1,d2,d3,d4,d5,d6");
    assert_eq!(lines.len(), 91);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 7));
}

#[test]
fn extract_two_person_features_reproduces_reference_frame() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("f.csv");
    let input = common::fixture("right_subject_90.txt");
    let out = skelgest(&[
        "extract-features", "--input", p(&input), "--mode", "two-person", "--out", p(&out_csv),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(out.stdout.is_empty(), "data goes to the file when --out is given");
    let csv = fs::read_to_string(&out_csv).unwrap();
    let row48: Vec<f64> = csv
        .lines()
        .nth(48)
        .unwrap()
        .split(',')
        .skip(1)
        .map(|s| s.parse().unwrap())
        .collect();
    let printed = [
        -0.146, 0.066, 0.986, -0.072, 0.036, 0.996, -0.120, -0.120, 0.985, -0.091, -0.119, 0.989,
    ];
    for (a, want) in row48.iter().zip(printed) {
        common::assert_close(a.to_radians().cos(), want, 1.5e-3, "cosine");
    }
}

#[test]
fn malformed_skeleton_exits_2_with_token_position() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    let mut tokens = vec!["0.5"; 60];
    tokens[17] = "abc";
    fs::write(&input, tokens.join(" ")).unwrap();
    let out = skelgest(&["extract-features", "--input", p(&input), "--mode", "single"]);
    assert_eq!(out.status.code(), Some(2));
    let err = text(&out.stderr);
    assert!(err.contains("18") && err.contains("abc"), "{err}");

    fs::write(&input, vec!["0.5"; 61].join(" ")).unwrap();
    let out = skelgest(&["round-trip-check", "--input", p(&input)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_depth_names_the_frame() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("flat.txt");
    let mut frames = vec![vec!["0.1 0.2 2.0"; 20].join(" "); 3];
    frames[1] = vec!["0.1 0.2 0.0"; 20].join(" ");
    fs::write(&input, frames.join("\n")).unwrap();
    let out = skelgest(&["extract-features", "--input", p(&input), "--mode", "single"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("frame 2"), "{}", text(&out.stderr));
}

fn training_accuracy(stderr: &str) -> f64 {
    let tail = stderr.split("training accuracy ").nth(1).unwrap();
    tail.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn train_svm_on_blobs() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b", "c"], 20, 1);
    let model = dir.path().join("svm.json");
    let out = skelgest(&["train", "--features", p(&m), "--model", "svm", "--out", p(&model)]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(model.exists());
    assert!(training_accuracy(&text(&out.stderr)) >= 0.99);
}

#[test]
fn edt_training_is_reproducible_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b"], 15, 2);
    let (m1, m2, m3) = (
        dir.path().join("1.json"),
        dir.path().join("2.json"),
        dir.path().join("3.json"),
    );
    for (out, seed) in [(&m1, "9"), (&m2, "9"), (&m3, "10")] {
        let o = skelgest(&[
            "train", "--features", p(&m), "--model", "edt", "--out", p(out), "--seed", seed,
            "--trees", "15",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    }
    assert_eq!(fs::read(&m1).unwrap(), fs::read(&m2).unwrap());
    assert_ne!(fs::read(&m1).unwrap(), fs::read(&m3).unwrap());
}

#[test]
fn seed_defaults_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b"], 10, 3);
    let run = |out: &Path, env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_skelgest"));
        c.args(["train", "--features", p(&m), "--model", "edt", "--trees", "5", "--out", p(out)]);
        c.env_remove("SKELGEST_SEED");
        if let Some(s) = env {
            c.env("SKELGEST_SEED", s);
        }
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        assert!(c.status().unwrap().success());
        fs::read(out).unwrap()
    };
    let d = dir.path();
    assert_eq!(run(&d.join("e.json"), Some("21"), None), run(&d.join("f.json"), None, Some("21")));
}

#[test]
fn single_class_training_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["only"], 5, 4);
    let out = skelgest(&[
        "train", "--features", p(&m), "--model", "svm", "--out", p(&dir.path().join("m.json")),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", text(&out.stderr));
}

#[test]
fn evaluate_perfect_model_and_hand_tally() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b", "c"], 12, 5);
    let model = dir.path().join("knn.json");
    let out = skelgest(&["train", "--features", p(&m), "--model", "knn", "--out", p(&model)]);
    assert_eq!(out.status.code(), Some(0));
    let report = dir.path().join("report.csv");
    let confusion = dir.path().join("cm.csv");
    let out = skelgest(&[
        "evaluate", "--model", p(&model), "--features", p(&m), "--report", p(&report),
        "--confusion", p(&confusion),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("accuracy 1.000000"));
    let r = fs::read_to_string(&report).unwrap();
    let header: Vec<&str> = r.lines().next().unwrap().split(',').collect();
    for col in ["precision", "recall", "specificity", "npv", "accuracy", "error_rate", "f1"] {
        assert!(header.contains(&col), "{col}");
    }

    // recompute the macro row from the printed confusion matrix
    let cm: Vec<Vec<f64>> = fs::read_to_string(&confusion)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
        .collect();
    let k = cm.len();
    let total: f64 = cm.iter().flatten().sum();
    let (mut prec, mut rec, mut acc) = (0.0, 0.0, 0.0);
    for c in 0..k {
        let tp = cm[c][c];
        let row: f64 = cm[c].iter().sum();
        let col: f64 = cm.iter().map(|r| r[c]).sum();
        prec += tp / col;
        rec += tp / row;
        acc += (total - row - col + 2.0 * tp) / total;
    }
    let macro_row: Vec<&str> = r.lines().last().unwrap().split(',').collect();
    assert_eq!(macro_row[0], "macro");
    let col = |name: &str| macro_row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("precision"), format!("{:.6}", prec / k as f64));
    assert_eq!(col("recall"), format!("{:.6}", rec / k as f64));
    assert_eq!(col("accuracy"), format!("{:.6}", acc / k as f64));
}

#[test]
fn evaluate_dimension_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b"], 6, 6);
    let model = dir.path().join("m.json");
    assert!(skelgest(&["train", "--features", p(&m), "--model", "knn", "--out", p(&model)])
        .status
        .success());
    fs::write(dir.path().join("wide.csv"), "f1,f2\n1,2\n").unwrap();
    fs::write(dir.path().join("wide_manifest.csv"), "wide.csv,a\n").unwrap();
    let out = skelgest(&[
        "evaluate", "--model", p(&model), "--features",
        p(&dir.path().join("wide_manifest.csv")),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", text(&out.stderr));
}

#[test]
fn predict_labels_each_input() {
    let dir = tempfile::tempdir().unwrap();
    let m = blob_manifest(dir.path(), &["a", "b"], 8, 7);
    let model = dir.path().join("m.json");
    assert!(skelgest(&["train", "--features", p(&m), "--model", "svm", "--out", p(&model)])
        .status
        .success());
    let a0 = dir.path().join("a_0.csv");
    let b0 = dir.path().join("b_0.csv");
    let out = skelgest(&["predict", "--model", p(&model), "--input", p(&a0), "--input", p(&b0)]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<String> = text(&out.stdout).lines().map(str::to_string).collect();
    assert_eq!(lines, [format!("{},a", p(&a0)), format!("{},b", p(&b0))]);

    fs::write(dir.path().join("junk.json"), "{").unwrap();
    let out = skelgest(&["predict", "--model", p(&dir.path().join("junk.json")), "--input", p(&a0)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn friedman_on_reference_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("scores.csv");
    fs::write(
        &f,
        "algorithm,Dataset 1,Dataset 2,Dataset 3\nSVM,0.89,0.88,0.90\nkNN,0.71,0.70,0.69\nEDT,0.85,0.84,0.80\nLMA-NN,0.80,0.83,0.82\n",
    )
    .unwrap();
    let out = skelgest(&["friedman", "--scores", p(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let s = text(&out.stdout);
    assert!(s.contains("8.2000"), "{s}");
    assert!(s.contains("reject the null") && !s.contains("fail to reject"), "{s}");
    assert!(s.contains("2.3333") && s.contains("2.6667"), "{s}");

    fs::write(&f, "A,0.5,0.5\nB,0.5,0.5\nC,0.5,0.5\n").unwrap();
    let s = text(&skelgest(&["friedman", "--scores", p(&f)]).stdout);
    assert!(s.contains("0.0000") && s.contains("fail to reject"), "{s}");

    fs::write(&f, "A,0.9\nB,0.1\n").unwrap();
    let s = text(&skelgest(&["friedman", "--scores", p(&f)]).stdout);
    assert!(s.contains("3.841") && s.contains("df = 1"), "{s}");

    fs::write(&f, "A,0.9,x\nB,0.1,0.2\n").unwrap();
    assert_eq!(skelgest(&["friedman", "--scores", p(&f)]).status.code(), Some(2));
}

#[test]
fn gen_synth_then_train_and_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("synth");
    let out = skelgest(&[
        "gen-synth", "--out", p(&d), "--classes", "clap,push,zoom-in", "--samples-per-class", "6",
        "--frames", "30", "--seed", "3", "--extract",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let labels = fs::read_to_string(d.join("labels.csv")).unwrap();
    assert_eq!(labels.lines().count(), 18);
    assert!(labels.lines().next().unwrap().ends_with(",clap"));

    let first = d.join(labels.lines().next().unwrap().split(',').next().unwrap());
    let rt = skelgest(&["round-trip-check", "--input", p(&first)]);
    assert_eq!(rt.status.code(), Some(0));
    assert!(text(&rt.stdout).starts_with("ok: 30 frames"));

    let model = dir.path().join("m.json");
    let fm = d.join("features.csv");
    assert!(skelgest(&["train", "--features", p(&fm), "--model", "svm", "--out", p(&model)])
        .status
        .success());
    let out = skelgest(&["evaluate", "--model", p(&model), "--features", p(&fm)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).starts_with("class,support,"));

    let again = dir.path().join("again");
    skelgest(&[
        "gen-synth", "--out", p(&again), "--classes", "clap,push,zoom-in", "--samples-per-class", "6",
        "--frames", "30", "--seed", "3",
    ]);
    assert_eq!(fs::read(first).unwrap(), fs::read(again.join("00000_clap.txt")).unwrap());

    let bad = skelgest(&["gen-synth", "--out", p(&d), "--classes", "moonwalk"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gen_synth_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        "version = 1\nfeatures = \"two-person\"\nclasses = [\"kicking\", \"hugging\"]\nsamples_per_class = 2\nframes = 10\nseed = 1\n\n[classifier]\nkind = \"edt\"\n",
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let out = skelgest(&["gen-synth", "--out", p(&out_dir), "--config", p(&cfg), "--extract"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let f = fs::read_to_string(out_dir.join("00000_kicking.features.csv")).unwrap();
    assert!(f.starts_with("frame,aJ1,bJ1,gJ1,"));

    fs::write(&cfg, "version = 9\n").unwrap();
    let out = skelgest(&["gen-synth", "--out", p(&out_dir), "--config", p(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(skelgest(&[]).status.code(), Some(1));
    assert_eq!(skelgest(&["train", "--bogus"]).status.code(), Some(1));
    assert_eq!(skelgest(&["friedman"]).status.code(), Some(1));
    assert_eq!(skelgest(&["--help"]).status.code(), Some(0));
}
