use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_xy, fit, FittedModel, RegressorSpec};
use crate::error::{Error, Result};
use crate::seeding;

pub const DEFAULT_FOLDS: usize = 5;

/// Validation rows of each fold: a seeded shuffle cut into `folds` contiguous
/// chunks whose sizes differ by at most one.
pub fn kfold_indices(n: usize, folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::config(
            "folds",
            format!("need at least 2, got {folds}"),
        ));
    }
    if folds > n {
        return Err(Error::TooFewRows {
            needed: folds,
            got: n,
        });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seeding::stream(seed, 1));
    let mut out = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let len = n / folds + usize::from(f < n % folds);
        out.push(idx[start..start + len].to_vec());
        start += len;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub spec: RegressorSpec,
    pub fold_mse: Vec<f64>,
    pub mean_mse: f64,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub best_index: usize,
    pub best_spec: RegressorSpec,
    /// Best spec refit on every row.
    pub model: FittedModel,
    pub table: Vec<CvRow>,
    pub folds: Vec<Vec<usize>>,
}

fn take_rows(x: &DMatrix<f64>, rows: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), x.ncols(), |i, j| x[(rows[i], j)])
}

/// Score every `(spec, fold)` pair by validation MSE, in parallel, and pick the
/// lowest mean; ties go to the earlier grid entry.
pub fn grid_search(
    grid: &[RegressorSpec],
    x: &DMatrix<f64>,
    y: &[f64],
    w: Option<&[f64]>,
    folds: usize,
    seed: u64,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(Error::config("grid", "must contain at least one spec"));
    }
    check_xy(x, y, w)?;
    let fold_rows = kfold_indices(y.len(), folds, seed)?;
    let n = y.len();
    let jobs: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|s| (0..folds).map(move |f| (s, f)))
        .collect();
    let scores: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(s, f)| {
            let mut is_val = vec![false; n];
            for &i in &fold_rows[f] {
                is_val[i] = true;
            }
            let train: Vec<usize> = (0..n).filter(|&i| !is_val[i]).collect();
            let val = &fold_rows[f];
            let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let wt: Option<Vec<f64>> = w.map(|w| train.iter().map(|&i| w[i]).collect());
            let yv: Vec<f64> = val.iter().map(|&i| y[i]).collect();
            let annotate = |e: Error| Error::FitFailed {
                spec: grid[s].to_string(),
                fold: f,
                source: Box::new(e),
            };
            let model =
                fit(&grid[s], &take_rows(x, &train), &yt, wt.as_deref()).map_err(annotate)?;
            let pred = model.predict(&take_rows(x, val)).map_err(annotate)?;
            let mse = yv
                .iter()
                .zip(&pred)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                / yv.len() as f64;
            Ok(mse)
        })
        .collect();
    let mut scores = scores.into_iter();
    let mut table = Vec::with_capacity(grid.len());
    for spec in grid {
        let fold_mse = scores.by_ref().take(folds).collect::<Result<Vec<f64>>>()?;
        let mean_mse = fold_mse.iter().sum::<f64>() / folds as f64;
        table.push(CvRow {
            spec: spec.clone(),
            fold_mse,
            mean_mse,
        });
    }
    let best_index = (0..table.len()).fold(0, |b, i| {
        if table[i].mean_mse < table[b].mean_mse {
            i
        } else {
            b
        }
    });
    let best_spec = grid[best_index].clone();
    let model = fit(&best_spec, x, y, w)?;
    Ok(GridResult {
        best_index,
        best_spec,
        model,
        table,
        folds: fold_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(n: usize) -> (DMatrix<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let x = DMatrix::from_fn(n, 4, |_, _| rng.random_range(-1.0..1.0));
        let y = (0..n)
            .map(|i| 2.0 * x[(i, 0)] - x[(i, 1)] + 0.1 * x[(i, 2)] + rng.random_range(-0.5..0.5))
            .collect();
        (x, y)
    }

    #[test]
    fn folds_partition_rows() {
        let f = kfold_indices(23, 5, 3).unwrap();
        assert_eq!(
            f.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![5, 5, 5, 4, 4]
        );
        let mut all: Vec<usize> = f.concat();
        all.sort();
        assert_eq!(all, (0..23).collect::<Vec<_>>());
        assert_eq!(f, kfold_indices(23, 5, 3).unwrap());
        assert_ne!(f, kfold_indices(23, 5, 4).unwrap());
        assert!(kfold_indices(3, 1, 0).is_err());
        assert!(kfold_indices(3, 4, 0).is_err());
    }

    #[test]
    fn single_spec_grid() {
        let (x, y) = problem(40);
        let r = grid_search(&[RegressorSpec::ridge(0.1)], &x, &y, None, 4, 0).unwrap();
        assert_eq!(r.best_index, 0);
        assert_eq!(r.table.len(), 1);
        assert_eq!(r.table[0].fold_mse.len(), 4);
    }

    #[test]
    fn inert_hyperparameter_tie_keeps_first() {
        let (x, y) = problem(40);
        let a = RegressorSpec::ridge(0.1);
        let b = RegressorSpec {
            k: Some(9),
            ..a.clone()
        };
        let r = grid_search(&[a.clone(), b], &x, &y, None, 5, 1).unwrap();
        assert_eq!(r.table[0].mean_mse, r.table[1].mean_mse);
        assert_eq!(r.best_spec, a);
    }

    #[test]
    fn picks_minimum_mean() {
        let (x, y) = problem(60);
        let grid: Vec<RegressorSpec> = [0.001, 0.01, 0.1, 1.0]
            .into_iter()
            .map(RegressorSpec::lasso)
            .collect();
        let r = grid_search(&grid, &x, &y, None, 5, 2).unwrap();
        let min = r
            .table
            .iter()
            .map(|c| c.mean_mse)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(r.table[r.best_index].mean_mse, min);
        assert!(r.best_spec.alpha() < 1.0);
    }

    #[test]
    fn fit_errors_name_spec_and_fold() {
        let (x, y) = problem(10);
        let err = grid_search(&[RegressorSpec::knn(9)], &x, &y, None, 2, 0).unwrap_err();
        match err {
            Error::FitFailed { spec, fold, source } => {
                assert!(spec.contains("knn"));
                assert_eq!(fold, 0);
                assert!(matches!(*source, Error::KTooLarge { .. }));
            }
            other => panic!("{other:?}"),
        }
    }
}
