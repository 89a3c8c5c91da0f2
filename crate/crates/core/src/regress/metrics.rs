use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::FittedModel;
use crate::error::{Error, Result};

/// Error metrics for one split. `r2` is `None` when the target is constant;
/// `mape_pct` is `None` when every target is zero. Rows with a zero target are
/// left out of MAPE and counted in `mape_excluded`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricBlock {
    pub n: usize,
    pub r2: Option<f64>,
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub mape_pct: Option<f64>,
    pub mape_excluded: usize,
}

pub fn metrics(y: &[f64], yhat: &[f64]) -> Result<MetricBlock> {
    if y.len() != yhat.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} targets but {} predictions",
            y.len(),
            yhat.len()
        )));
    }
    if y.len() < 2 {
        return Err(Error::TooFewRows {
            needed: 2,
            got: y.len(),
        });
    }
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    let mut abs = 0.0;
    let mut sse = 0.0;
    let mut sst = 0.0;
    let mut pct = 0.0;
    let mut pct_n = 0usize;
    for (&a, &b) in y.iter().zip(yhat) {
        let r = a - b;
        abs += r.abs();
        sse += r * r;
        sst += (a - mean) * (a - mean);
        if a != 0.0 {
            pct += r.abs() / a.abs();
            pct_n += 1;
        }
    }
    let mse = sse / n;
    Ok(MetricBlock {
        n: y.len(),
        r2: (sst > 0.0).then(|| 1.0 - sse / sst),
        mae: abs / n,
        mse,
        rmse: mse.sqrt(),
        mape_pct: (pct_n > 0).then(|| 100.0 * pct / pct_n as f64),
        mape_excluded: y.len() - pct_n,
    })
}

pub fn evaluate(model: &FittedModel, x: &DMatrix<f64>, y: &[f64]) -> Result<MetricBlock> {
    if x.nrows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} targets",
            x.nrows(),
            y.len()
        )));
    }
    metrics(y, &model.predict(x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictor() {
        let y = [1.0, 2.0, 5.0];
        let m = metrics(&y, &y).unwrap();
        assert_eq!(m.r2, Some(1.0));
        assert_eq!((m.mae, m.mse, m.mape_pct), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn mean_predictor() {
        let y = [1.0, 2.0, 6.0];
        let m = metrics(&y, &[3.0; 3]).unwrap();
        assert_eq!(m.r2, Some(0.0));
    }

    #[test]
    fn hand_worked() {
        let m = metrics(&[1.0, 2.0, 4.0], &[1.0, 3.0, 3.0]).unwrap();
        assert!((m.mae - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.mse - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.mape_pct.unwrap() - 25.0).abs() < 1e-12);
        assert!((m.rmse * m.rmse - m.mse).abs() < 1e-12);
    }

    #[test]
    fn zero_targets_excluded_from_mape() {
        let m = metrics(&[0.0, 2.0, 4.0], &[1.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.mape_excluded, 1);
        assert!((m.mape_pct.unwrap() - 25.0).abs() < 1e-12);
        let m = metrics(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_eq!(m.mape_pct, None);
    }

    #[test]
    fn constant_target_flags_r2() {
        let m = metrics(&[3.0, 3.0, 3.0], &[1.0, 3.0, 3.0]).unwrap();
        assert_eq!(m.r2, None);
        assert!(m.mse.is_finite());
    }

    #[test]
    fn needs_two_rows() {
        assert!(matches!(
            metrics(&[1.0], &[1.0]),
            Err(Error::TooFewRows { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn identities(pairs in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..50)) {
            let (y, yh): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let m = metrics(&y, &yh).unwrap();
            proptest::prop_assert!(m.mse >= 0.0);
            proptest::prop_assert!((m.rmse * m.rmse - m.mse).abs() <= 1e-12 * m.mse.max(1e-300));
            if let Some(r2) = m.r2 {
                proptest::prop_assert!(r2 <= 1.0);
            }
        }
    }
}
