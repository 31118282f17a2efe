// Fits the sample T1 and echo curves and checks the residuals.

use std::path::Path;

use trenchjj::fit::{fit, residual_diagnostics, Model};
use trenchjj::io::read_curve;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    for (model, file) in [(Model::T1, "t1.csv"), (Model::Echo, "echo.csv")] {
        let curve = read_curve(dir.join(file)).unwrap();
        let r = fit(&curve, model).unwrap();
        let d = residual_diagnostics(&curve, &r);
        println!("{file}: {} iterations, rms {:.4}", r.iterations, r.residual_rms);
        for (i, name) in model.param_names().iter().enumerate() {
            println!("  {name:>5} = {:>10.5} ± {:.5}", r.params[i], r.stderr[i]);
        }
        println!("  lag-1 residual autocorrelation {:.3} ({})", d.lag1_autocorr, if d.pass { "ok" } else { "structured" });
    }
}
