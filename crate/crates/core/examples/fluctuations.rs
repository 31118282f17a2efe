// Allan deviation, Welch PSD and RCV of the sample T1 trace.

use std::path::Path;

use trenchjj::fluct::{allan_peaks, overlapping_allan, reference_lines, summarize, welch_psd, DEFAULT_WHITE_LEVEL};
use trenchjj::io::ingest_trace;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample/trace.csv");
    let trace = ingest_trace(&path, "value_us").unwrap();
    println!("{} points every {} s ({:.1} h)", trace.len(), trace.tau0_s(), trace.duration_s() / 3600.0);

    let s = summarize(&trace, 30).unwrap();
    println!("mean {:.1} µs, σ {:.1} µs, median {:.1} µs, RCV {:.3}", s.mean, s.stddev, s.median, s.rcv);

    let a = overlapping_allan(&trace).unwrap();
    for i in [0, 9, 99, a.taus.len() - 1] {
        println!("adev({:>7.0} s) = {:.2} µs over {} differences", a.taus[i], a.adev[i], a.counts[i]);
    }
    let peaks = allan_peaks(&a, DEFAULT_WHITE_LEVEL);
    println!("{} Allan bumps above the √(A_W/τ) line", peaks.len());

    let p = welch_psd(&trace, 128).unwrap();
    let lines = reference_lines(&p, DEFAULT_WHITE_LEVEL).unwrap();
    let interior = &p.psd[1..p.psd.len() - 1];
    println!(
        "PSD from {} segments, mean level {:.3e} µs²/Hz (white expectation {:.3e}), 1/f anchor at {:.2e} Hz",
        p.segment_count,
        interior.iter().sum::<f64>() / interior.len() as f64,
        2.0 * s.stddev.powi(2) * trace.tau0_s(),
        lines.anchor.0
    );
}
