//! Fit every regressor kind on a small nonlinear problem and compare
//! held-out scores.
//!
//!     cargo run --release --example regressors

use nalgebra::DMatrix;
use wormbench::regress::{evaluate, fit, RegressorSpec};

fn make(n: usize, offset: usize) -> (DMatrix<f64>, Vec<f64>) {
    let x = DMatrix::from_fn(n, 3, |i, j| {
        let t = (i + offset) as f64;
        match j {
            0 => (t * 0.37).sin() * 3.0,
            1 => (t * 0.11).cos() * 2.0,
            _ => ((i + offset) % 7) as f64,
        }
    });
    let y = (0..n)
        .map(|i| x[(i, 0)].powi(2) + 2.0 * x[(i, 1)] - 0.5 * x[(i, 2)])
        .collect();
    (x, y)
}

fn main() -> wormbench::Result<()> {
    let (xt, yt) = make(400, 0);
    let (xv, yv) = make(100, 1000);
    let roster = [
        RegressorSpec::ols(),
        RegressorSpec::ridge(0.1),
        RegressorSpec::lasso(0.01),
        RegressorSpec::elastic_net(0.01, 0.5),
        RegressorSpec::knn(5),
        RegressorSpec::tree().with_max_depth(8),
        RegressorSpec::forest(50, 3),
        RegressorSpec::gbt(200, 0.1),
    ];
    println!("{:<18} {:>9} {:>9}", "model", "train R2", "val R2");
    for spec in &roster {
        let model = fit(spec, &xt, &yt, None)?;
        let train = evaluate(&model, &xt, &yt)?;
        let val = evaluate(&model, &xv, &yv)?;
        println!(
            "{:<18} {:>9.4} {:>9.4}",
            spec.label(),
            train.r2.unwrap_or(f64::NAN),
            val.r2.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
