// Runs every stage on the sample bundle into a scratch directory.

use std::path::Path;

use trenchjj::fit::Model;
use trenchjj::io::{load_config, run_pipeline, PipelineInputs};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let config = dir.join("device.toml");
    let cfg = load_config(&config).unwrap();
    let inputs = PipelineInputs {
        config_path: Some(config),
        curves: vec![(Model::T1, dir.join("t1.csv")), (Model::Echo, dir.join("echo.csv"))],
        traces: vec![dir.join("trace.csv")],
        ..Default::default()
    };
    let out = std::env::temp_dir().join("trenchjj-sample-run");
    let report = run_pipeline(&cfg, &inputs, &out).unwrap();
    for s in &report.stages {
        println!("{:<9} {:?} {}", s.name, s.status, s.files.join(" "));
    }
    println!("wrote {}", out.display());
}
