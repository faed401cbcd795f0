use std::fs;
use std::path::Path;
use std::process::Command as Process;

use clap::Parser;
use mugev_cli::{execute, run, Cli};
use serde_json::Value;

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("mugev").chain(args.iter().copied())).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &Path, per_class: usize, seed: u64) {
    let seed = seed.to_string();
    let n = per_class.to_string();
    execute(&cli(&[
        "synth",
        "--per-class",
        &n,
        "--duration",
        "2",
        "--fs",
        "512",
        "--seed",
        &seed,
        "--out",
        p(dir),
    ]))
    .unwrap();
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn without_timestamp(mut v: Value) -> Value {
    v["provenance"].as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn synth_writes_files_and_balanced_manifest() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    synth(a.path(), 10, 1);
    synth(b.path(), 10, 1);
    let manifest = fs::read_to_string(a.path().join("manifest.csv")).unwrap();
    let rows: Vec<&str> = manifest.lines().skip(1).collect();
    assert_eq!(rows.len(), 30);
    for code in ["1", "0", "-1"] {
        assert_eq!(rows.iter().filter(|r| r.split(',').nth(1) == Some(code)).count(), 10);
    }
    let mut names: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(
        names.iter().filter(|n| n.to_str().unwrap().ends_with(".eegb")).count(),
        30
    );
    assert_eq!(names.len(), 31);
    for n in names {
        assert_eq!(
            fs::read(a.path().join(&n)).unwrap(),
            fs::read(b.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn fit_summarises_every_class_and_is_repeatable() {
    let data = tempfile::tempdir().unwrap();
    synth(data.path(), 10, 2);
    let input = data.path().join("manifest.csv");
    let run_fit = |out: &Path| {
        let o = execute(&cli(&["fit", "--input", p(&input), "--seed", "5", "--out", p(out)])).unwrap();
        assert!(o.errors.is_empty());
    };
    let (r1, r2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_fit(r1.path());
    run_fit(r2.path());

    let features = fs::read_to_string(r1.path().join("features.csv")).unwrap();
    assert_eq!(features.lines().count(), 31);
    let summary = json(&r1.path().join("param_summary.json"));
    let classes = summary["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 3);
    for c in classes {
        for k in ["location", "scale", "shape"] {
            let (lo, mean, hi) = (
                c[k]["ci"][0].as_f64().unwrap(),
                c[k]["mean"].as_f64().unwrap(),
                c[k]["ci"][1].as_f64().unwrap(),
            );
            assert!(lo <= mean && mean <= hi);
            assert!(c[k]["text"].as_str().unwrap().contains(&format!("[{lo:.2}, {hi:.2}]")));
        }
    }
    for class in ["imagery", "movement", "resting"] {
        let curve = fs::read_to_string(r1.path().join(format!("curve_{class}.csv"))).unwrap();
        assert!(curve.starts_with("x,pdf,cdf\n"));
    }
    let report = json(&r1.path().join("report.json"));
    assert_eq!(report["cv"]["status"], "skipped");
    assert_eq!(
        without_timestamp(report),
        without_timestamp(json(&r2.path().join("report.json")))
    );
    assert_eq!(
        fs::read(r1.path().join("param_summary.json")).unwrap(),
        fs::read(r2.path().join("param_summary.json")).unwrap()
    );
}

#[test]
fn classify_reference_features() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    execute(&cli(&[
        "synth-features",
        "--per-class",
        "100",
        "--spread",
        "0.25",
        "--seed",
        "3",
        "--out",
        d,
    ]))
    .unwrap();
    let input = dir.path().join("features.csv");
    let out = dir.path().join("cv");
    let o = execute(&cli(&[
        "classify",
        "--input",
        p(&input),
        "--seed",
        "9",
        "--out",
        p(&out),
    ]))
    .unwrap();
    assert!(o.stdout.contains("accuracy 1.000"), "{}", o.stdout);

    let cv = json(&out.join("cv_report.json"));
    let confusion = cv["confusion"].as_array().unwrap();
    for row in confusion {
        let total: u64 = row.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
        assert_eq!(total, 100 * 10);
    }
    let report = json(&out.join("report.json"));
    assert_eq!(report["cv"]["data"], cv);
    assert_eq!(report["gof"]["status"], "skipped");
    assert!(fs::read_to_string(out.join("confusion.csv"))
        .unwrap()
        .starts_with("true\\predicted,imagery"));
}

#[test]
fn too_many_folds_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());
    execute(&cli(&[
        "synth-features",
        "--per-class",
        "20",
        "--seed",
        "3",
        "--out",
        d,
    ]))
    .unwrap();
    let input = dir.path().join("features.csv");
    let c = cli(&[
        "classify",
        "--input",
        p(&input),
        "--seed",
        "1",
        "--folds",
        "50",
        "--out",
        d,
    ]);
    let err = execute(&c).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("at least 50 samples per class"), "{err}");
    assert_eq!(run(&c), 2);
    let list = json(&dir.path().join("errors.json"));
    assert_eq!(list["exit_code"], 2);
    assert_eq!(list["errors"][0]["kind"], "config");
}

#[test]
fn pipeline_matches_fit_then_classify() {
    let data = tempfile::tempdir().unwrap();
    synth(data.path(), 20, 4);
    let input = data.path().join("manifest.csv");
    let work = tempfile::tempdir().unwrap();
    let w = |s: &str| work.path().join(s);
    let cv_flags = ["--folds", "5", "--repeats", "3"];

    let mut args = vec!["pipeline", "--input", p(&input), "--seed", "8", "--out"];
    let pipe = w("pipe");
    args.push(p(&pipe));
    args.extend(cv_flags);
    let o = execute(&cli(&args)).unwrap();
    assert!(o.errors.is_empty());
    let report = json(&pipe.join("report.json"));
    for key in ["provenance", "features", "param_summary", "gof", "cv"] {
        assert!(report.get(key).is_some(), "{key}");
    }
    for key in ["features", "param_summary", "gof", "cv"] {
        assert_eq!(report[key]["status"], "ok", "{key}");
    }

    let fit = w("fit");
    execute(&cli(&["fit", "--input", p(&input), "--seed", "8", "--out", p(&fit)])).unwrap();
    let cls = w("cls");
    let features = fit.join("features.csv");
    let mut args = vec!["classify", "--input", p(&features), "--seed", "8", "--out", p(&cls)];
    args.extend(cv_flags);
    execute(&cli(&args)).unwrap();
    let staged = json(&cls.join("report.json"));
    for key in ["features", "param_summary", "gof", "cv"] {
        assert_eq!(report[key], staged[key], "{key}");
    }
    assert_eq!(
        fs::read(pipe.join("confusion.csv")).unwrap(),
        fs::read(cls.join("confusion.csv")).unwrap()
    );
}

#[test]
fn missing_labels_skip_classification() {
    let data = tempfile::tempdir().unwrap();
    synth(data.path(), 4, 6);
    let manifest = data.path().join("manifest.csv");
    let text = fs::read_to_string(&manifest).unwrap();
    let unlabeled: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                format!("{l}\n")
            } else {
                let c: Vec<&str> = l.split(',').collect();
                format!("{},,{},{}\n", c[0], c[2], c[3])
            }
        })
        .collect();
    fs::write(&manifest, unlabeled).unwrap();
    let out = data.path().join("out");
    let c = cli(&["pipeline", "--input", p(&manifest), "--seed", "1", "--out", p(&out)]);
    assert_eq!(run(&c), 0);
    let report = json(&out.join("report.json"));
    assert_eq!(report["cv"]["status"], "skipped");
    assert_eq!(report["features"]["status"], "ok");
    assert_eq!(report["features"]["data"]["rows"].as_array().unwrap().len(), 12);
    assert_eq!(report["param_summary"]["data"]["skipped"][0]["group"], "unlabeled");
    assert!(!out.join("errors.json").exists());
}

#[test]
fn csv_epochs_and_partial_failures() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), 3, 7);
    // One good CSV epoch, one too short to fit.
    let e = mugev::eeg::synthesize_surrogate(mugev::EventLabel::Resting, 2.0, 256.0, 1).unwrap();
    mugev::eeg::save_csv(&e.record, dir.path().join("good.csv")).unwrap();
    let short = mugev::eeg::synthesize_surrogate(mugev::EventLabel::Resting, 0.25, 256.0, 1).unwrap();
    mugev::eeg::save_csv(&short.record, dir.path().join("short.csv")).unwrap();
    let manifest = dir.path().join("manifest.csv");
    let mut text = fs::read_to_string(&manifest).unwrap();
    text.push_str("good.csv,-1,s9,good\nshort.csv,-1,s9,short\n");
    fs::write(&manifest, text).unwrap();

    let out = dir.path().join("out");
    let c = cli(&["fit", "--input", p(&manifest), "--seed", "1", "--out", p(&out)]);
    assert_eq!(run(&c), 3);
    let report = json(&out.join("report.json"));
    let rows = report["features"]["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().any(|r| r["epoch_id"] == "good"));
    assert_eq!(report["features"]["data"]["failures"][0]["epoch_id"], "short");
    let errors = json(&out.join("errors.json"));
    assert_eq!(errors["errors"][0]["epoch_id"], "short");
    assert_eq!(errors["errors"][0]["kind"], "data");
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_mugev");
    let dir = tempfile::tempdir().unwrap();
    let d = p(dir.path());

    let status = Process::new(exe)
        .args(["fit", "--out", d, "--input", "m.csv"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2), "missing --seed");
    let status = Process::new(exe)
        .args(["fit", "--out", d, "--input", "m.csv", "--seed", "1", "--band", "12:3"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));

    let missing = dir.path().join("nope.csv");
    let o = Process::new(exe)
        .args(["fit", "--out", d, "--input", p(&missing), "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let stderr: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(stderr["errors"][0]["kind"], "data");
    assert!(dir.path().join("errors.json").exists());

    let o = Process::new(exe)
        .args(["synth", "--per-class", "1", "--seed", "1", "--out", d])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Process::new(exe)
        .args([
            "fit",
            "--out",
            d,
            "--input",
            p(&dir.path().join("manifest.csv")),
            "--seed",
            "1",
            "--estimator",
            "moments",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
