use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Stores the training rows; predicts the plain mean of the `k` nearest
/// targets by Euclidean distance, ties going to the lower training index.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    pub k: usize,
}

impl KnnModel {
    pub fn fit(k: usize, x: &DMatrix<f64>, y: &[f64]) -> Result<Self> {
        if k > y.len() {
            return Err(Error::KTooLarge { k, n: y.len() });
        }
        Ok(Self {
            x: x.clone(),
            y: y.to_vec(),
            k,
        })
    }

    /// Indices of the `k` nearest training rows to row `i` of `q`, nearest first.
    pub fn neighbors(&self, q: &DMatrix<f64>, i: usize) -> Vec<usize> {
        let p = self.x.ncols();
        let mut d: Vec<(f64, usize)> = (0..self.x.nrows())
            .map(|t| {
                let d2 = (0..p)
                    .map(|j| (self.x[(t, j)] - q[(i, j)]).powi(2))
                    .sum::<f64>();
                (d2, t)
            })
            .collect();
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if self.k < d.len() {
            d.select_nth_unstable_by(self.k - 1, cmp);
            d.truncate(self.k);
        }
        d.sort_by(cmp);
        d.into_iter().map(|(_, t)| t).collect()
    }

    pub fn predict(&self, q: &DMatrix<f64>) -> Vec<f64> {
        (0..q.nrows())
            .map(|i| self.neighbors(q, i).iter().map(|&t| self.y[t]).sum::<f64>() / self.k as f64)
            .collect()
    }
}
