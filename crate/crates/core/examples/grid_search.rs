//! Choose a lasso penalty by five-fold cross-validation and show the
//! per-fold table.
//!
//!     cargo run --release --example grid_search

use nalgebra::DMatrix;
use wormbench::regress::{grid_search, RegressorSpec, DEFAULT_FOLDS};

fn main() -> wormbench::Result<()> {
    let n = 200;
    // Two informative features, three noise features.
    let x = DMatrix::from_fn(n, 5, |i, j| (((i * 31 + j * 17) % 23) as f64 - 11.0) / 5.0);
    let y: Vec<f64> = (0..n)
        .map(|i| 1.5 * x[(i, 0)] - 2.0 * x[(i, 1)] + 0.3 * ((i * 7 % 5) as f64 - 2.0))
        .collect();

    let grid: Vec<RegressorSpec> = [0.001, 0.01, 0.1, 1.0]
        .into_iter()
        .map(RegressorSpec::lasso)
        .collect();
    let result = grid_search(&grid, &x, &y, None, DEFAULT_FOLDS, 9)?;

    for row in &result.table {
        let folds: Vec<String> = row.fold_mse.iter().map(|m| format!("{m:.4}")).collect();
        println!(
            "alpha {:<6} mean {:.4}  folds [{}]",
            row.spec.alpha(),
            row.mean_mse,
            folds.join(", ")
        );
    }
    println!("selected alpha {}", result.best_spec.alpha());
    Ok(())
}
