use std::path::{Path, PathBuf};

use trenchjj::fit::Model;
use trenchjj::io::pipeline::{StageStatus, MANIFEST, REPORT};
use trenchjj::io::{load_config, run_pipeline, PipelineInputs, Table};

fn sample(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample").join(name)
}

fn full_inputs() -> PipelineInputs {
    PipelineInputs {
        config_path: Some(sample("device.toml")),
        curves: vec![(Model::T1, sample("t1.csv")), (Model::Echo, sample("echo.csv"))],
        traces: vec![sample("trace.csv")],
        ..Default::default()
    }
}

fn strip_timing(v: &mut serde_json::Value) {
    if let Some(stages) = v["stages"].as_array_mut() {
        for s in stages {
            s.as_object_mut().unwrap().remove("elapsed_ms");
        }
    }
}

#[test]
fn full_run_writes_every_stage() {
    let cfg = load_config(sample("device.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let report = run_pipeline(&cfg, &full_inputs(), dir.path()).unwrap();
    assert!(report.complete());
    let manifest = std::fs::read_to_string(dir.path().join(MANIFEST)).unwrap();
    assert!(manifest.contains("status complete"));
    for f in [
        "geometry.csv",
        "junction.csv",
        "transmon.csv",
        "fit.csv",
        "allan.csv",
        "psd.csv",
        "summary.csv",
        "histogram.csv",
        REPORT,
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(report.input_digests.len(), 4);
    assert!(report.input_digests.values().all(|d| d.len() == 64));

    // every table parses back
    for f in ["geometry.csv", "junction.csv", "transmon.csv", "fit.csv", "allan.csv", "psd.csv"] {
        let t = Table::read_csv(std::fs::File::open(dir.path().join(f)).unwrap()).unwrap();
        assert!(!t.rows.is_empty(), "{f}");
    }
    let fit = Table::read_csv(std::fs::File::open(dir.path().join("fit.csv")).unwrap()).unwrap();
    assert_eq!(fit.rows.len(), 2);
    let t1 = fit.column("T_us").unwrap()[0].as_f64().unwrap();
    assert!((t1 / 184.79 - 1.0).abs() < 0.05);
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = load_config(sample("device.toml")).unwrap();
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_pipeline(&cfg, &full_inputs(), a.path()).unwrap();
    run_pipeline(&cfg, &full_inputs(), b.path()).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for name in names {
        let (x, y) = (
            std::fs::read(a.path().join(&name)).unwrap(),
            std::fs::read(b.path().join(&name)).unwrap(),
        );
        if name == REPORT {
            let mut vx: serde_json::Value = serde_json::from_slice(&x).unwrap();
            let mut vy: serde_json::Value = serde_json::from_slice(&y).unwrap();
            strip_timing(&mut vx);
            strip_timing(&mut vy);
            assert_eq!(vx, vy);
        } else {
            assert_eq!(x, y, "{name:?} differs");
        }
    }
}

#[test]
fn missing_trace_marks_fluct_failed() {
    let cfg = load_config(sample("device.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let inputs = PipelineInputs {
        traces: vec![sample("no_such_trace.csv")],
        ..full_inputs()
    };
    let failure = run_pipeline(&cfg, &inputs, dir.path()).unwrap_err();
    assert_eq!(failure.stage, "fluct");
    assert_eq!(failure.error.exit_code(), 4);
    assert_eq!(failure.report.stage("fluct").unwrap().status, StageStatus::Failed);
    assert_eq!(failure.report.stage("fit").unwrap().status, StageStatus::Ok);
    let manifest = std::fs::read_to_string(dir.path().join(MANIFEST)).unwrap();
    assert!(manifest.contains("status incomplete"));
    assert!(manifest.lines().any(|l| l.starts_with("fluct failed")));
    // earlier stages still produced their files
    assert!(dir.path().join("fit.csv").exists());
}

#[test]
fn failure_skips_later_stages() {
    let cfg = load_config(sample("device.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    let rows: String = (0..20).map(|i| format!("{i},0.5\n")).collect();
    std::fs::write(&flat, format!("delay_us,signal\n{rows}")).unwrap();
    let inputs = PipelineInputs {
        curves: vec![(Model::T1, flat)],
        ..full_inputs()
    };
    let out = dir.path().join("out");
    let failure = run_pipeline(&cfg, &inputs, &out).unwrap_err();
    assert_eq!(failure.stage, "fit");
    assert_eq!(failure.error.exit_code(), 3);
    assert_eq!(failure.report.stage("fluct").unwrap().status, StageStatus::Skipped);
    let manifest = std::fs::read_to_string(out.join(MANIFEST)).unwrap();
    assert!(manifest.contains("fluct skipped"));
}

#[test]
fn trace_with_gap_is_rejected() {
    let cfg = load_config(sample("device.toml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("gappy.csv");
    let mut text = String::from("timestamp_s,value_us\n");
    for i in 0..100 {
        let t = if i < 50 { 60.0 * i as f64 } else { 60.0 * i as f64 + 600.0 };
        text.push_str(&format!("{t},{}\n", 140.0 + (i % 7) as f64));
    }
    std::fs::write(&trace, text).unwrap();
    let inputs = PipelineInputs {
        traces: vec![trace],
        ..full_inputs()
    };
    let failure = run_pipeline(&cfg, &inputs, &dir.path().join("out")).unwrap_err();
    assert_eq!(failure.stage, "fluct");
    assert_eq!(failure.error.exit_code(), 2);
}
