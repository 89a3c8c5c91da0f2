//! Yeo-Johnson power transform with maximum-likelihood λ.

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

pub const LAMBDA_RANGE: (f64, f64) = (-5.0, 5.0);
pub const LAMBDA_TOLERANCE: f64 = 1e-5;

/// Four-branch Yeo-Johnson transform of one value.
pub fn yeo_johnson(x: f64, lambda: f64) -> f64 {
    if x >= 0.0 {
        if lambda == 0.0 {
            x.ln_1p()
        } else {
            ((lambda * x.ln_1p()).exp_m1()) / lambda
        }
    } else if lambda == 2.0 {
        -(-x).ln_1p()
    } else {
        let q = 2.0 - lambda;
        -((q * (-x).ln_1p()).exp_m1()) / q
    }
}

/// Inverse of [`yeo_johnson`]; the sign of `y` selects the branch.
pub fn yeo_johnson_inverse(y: f64, lambda: f64) -> f64 {
    if y >= 0.0 {
        if lambda == 0.0 {
            y.exp_m1()
        } else {
            ((lambda * y).ln_1p() / lambda).exp_m1()
        }
    } else if lambda == 2.0 {
        -(-y).exp_m1()
    } else {
        let q = 2.0 - lambda;
        -((-q * y).ln_1p() / q).exp_m1()
    }
}

/// Profile log-likelihood of λ under a normal model for the transformed data.
pub fn yeo_johnson_log_likelihood(x: &[f64], lambda: f64) -> f64 {
    let n = x.len() as f64;
    let y: Vec<f64> = x.iter().map(|v| yeo_johnson(*v, lambda)).collect();
    let mean = y.iter().sum::<f64>() / n;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let jacobian: f64 = x.iter().map(|v| v.signum() * v.abs().ln_1p()).sum();
    -0.5 * n * var.ln() + (lambda - 1.0) * jacobian
}

/// Golden-section maximization of `f` on `[lo, hi]` down to an interval of width `tol`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        // NaN likelihoods (overflowed variance) compare false and push away from them.
        if fa > fb || fb.is_nan() {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Fitted per-column λ values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTransform {
    pub columns: Vec<String>,
    pub lambdas: Vec<f64>,
}

impl PowerTransform {
    pub fn fit(d: &Dataset, columns: &[&str]) -> Result<Self> {
        let mut lambdas = Vec::with_capacity(columns.len());
        for name in columns {
            let x = d.column(name)?;
            lambdas.push(Self::fit_lambda(name, &x)?);
        }
        Ok(Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            lambdas,
        })
    }

    pub fn fit_lambda(name: &str, x: &[f64]) -> Result<f64> {
        if x.len() < 3 {
            return Err(Error::TooFewRows {
                needed: 3,
                got: x.len(),
            });
        }
        if x.iter().all(|v| *v == x[0]) {
            return Err(Error::DegenerateColumn(name.to_string()));
        }
        let (lo, hi) = LAMBDA_RANGE;
        Ok(golden_max(
            |l| yeo_johnson_log_likelihood(x, l),
            lo,
            hi,
            LAMBDA_TOLERANCE,
        ))
    }

    fn map(&self, d: &Dataset, f: fn(f64, f64) -> f64) -> Result<Dataset> {
        let mut out = d.clone();
        for (name, &lambda) in self.columns.iter().zip(&self.lambdas) {
            let j = d.column_index(name)?;
            let col: Vec<f64> = d.column_at(j).into_iter().map(|x| f(x, lambda)).collect();
            out.set_column_at(j, &col)?;
        }
        Ok(out)
    }

    pub fn apply(&self, d: &Dataset) -> Result<Dataset> {
        self.map(d, yeo_johnson)
    }

    pub fn invert(&self, d: &Dataset) -> Result<Dataset> {
        self.map(d, yeo_johnson_inverse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::profile::skewness;
    use crate::dataprep::tests::ds;
    use rand::SeedableRng;
    use rand_distr::{Distribution, LogNormal};

    #[test]
    fn lambda_one_is_identity() {
        for x in [-7.5, -1.0, -0.3, 0.0, 0.4, 2.0, 123.0] {
            assert!((yeo_johnson(x, 1.0) - x).abs() < 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn lambda_zero_positive_branch_is_log1p() {
        for x in [0.0, 0.5, 3.0, 99.0] {
            assert_eq!(yeo_johnson(x, 0.0), (x + 1.0).ln());
        }
    }

    #[test]
    fn negative_branches() {
        // λ = 2: −ln(1 − x); λ = 0: −((1 − x)² − 1)/2
        assert!((yeo_johnson(-3.0, 2.0) + 4f64.ln()).abs() < 1e-14);
        assert!((yeo_johnson(-3.0, 0.0) + (16.0 - 1.0) / 2.0).abs() < 1e-12);
        // generic λ against the textbook formula
        let (x, l) = (-2.5f64, 0.7f64);
        let want = -((1.0 - x).powf(2.0 - l) - 1.0) / (2.0 - l);
        assert!((yeo_johnson(x, l) - want).abs() < 1e-12);
        let (x, l) = (4.0f64, -1.3f64);
        let want = ((x + 1.0).powf(l) - 1.0) / l;
        assert!((yeo_johnson(x, l) - want).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let m = golden_max(|x| -(x - 1.234).powi(2), -5.0, 5.0, 1e-7);
        assert!((m - 1.234).abs() < 1e-6);
    }

    #[test]
    fn fitted_lambda_beats_neighbours() {
        let x: Vec<f64> = (1..60)
            .map(|i| (i as f64 * 0.37).exp() % 17.0 - 2.0)
            .collect();
        let l = PowerTransform::fit_lambda("x", &x).unwrap();
        let ll = yeo_johnson_log_likelihood(&x, l);
        assert!(ll >= yeo_johnson_log_likelihood(&x, l + 1e-2));
        assert!(ll >= yeo_johnson_log_likelihood(&x, l - 1e-2));
    }

    #[test]
    fn lognormal_skew_removed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let dist = LogNormal::new(0.0, 1.0).unwrap();
        let rows: Vec<Vec<f64>> = (0..10_000).map(|_| vec![dist.sample(&mut rng)]).collect();
        let d = Dataset::new(vec!["x".into()], rows).unwrap();
        let before = skewness(&d.column("x").unwrap());
        let pt = PowerTransform::fit(&d, &["x"]).unwrap();
        let after = skewness(&pt.apply(&d).unwrap().column("x").unwrap());
        assert!(before > 4.0, "before {before}");
        assert!(after.abs() < 0.5, "after {after}");
    }

    #[test]
    fn degenerate_and_short_columns() {
        let d = ds(&["a"], &[&[2.0], &[2.0], &[2.0]]);
        assert!(matches!(
            PowerTransform::fit(&d, &["a"]),
            Err(Error::DegenerateColumn(_))
        ));
        let d = ds(&["a"], &[&[1.0], &[2.0]]);
        assert!(matches!(
            PowerTransform::fit(&d, &["a"]),
            Err(Error::TooFewRows { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn round_trip_mixed_sign(xs in proptest::collection::vec(-10.0f64..10.0, 3..60)) {
            proptest::prop_assume!(xs.iter().any(|v| *v != xs[0]));
            let l = PowerTransform::fit_lambda("x", &xs).unwrap();
            for x in &xs {
                let back = yeo_johnson_inverse(yeo_johnson(*x, l), l);
                proptest::prop_assert!((back - x).abs() <= 1e-8, "x={} l={} back={}", x, l, back);
            }
        }

        #[test]
        fn round_trip_any_lambda(x in -10.0f64..10.0, l in -5.0f64..5.0) {
            let back = yeo_johnson_inverse(yeo_johnson(x, l), l);
            proptest::prop_assert!((back - x).abs() <= 1e-8);
        }
    }
}
