use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

/// Per-column `z = (x − μ) / σ` with population σ, fitted once and reused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardScaler {
    pub columns: Vec<String>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Columns that were constant at fit time; they scale to 0.
    pub warnings: Vec<String>,
}

impl StandardScaler {
    pub fn fit(d: &Dataset, columns: &[&str]) -> Result<Self> {
        let mut means = Vec::with_capacity(columns.len());
        let mut stds = Vec::with_capacity(columns.len());
        let mut warnings = Vec::new();
        for name in columns {
            let x = d.column(name)?;
            if x.is_empty() {
                return Err(Error::TooFewRows { needed: 1, got: 0 });
            }
            let n = x.len() as f64;
            let mean = x.iter().sum::<f64>() / n;
            let std = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
            if std == 0.0 {
                warnings.push(format!("column `{name}` is constant; scaled to 0"));
            }
            means.push(mean);
            stds.push(std);
        }
        Ok(Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            means,
            stds,
            warnings,
        })
    }

    fn map(&self, d: &Dataset, f: impl Fn(f64, f64, f64) -> f64) -> Result<Dataset> {
        let mut out = d.clone();
        for (k, name) in self.columns.iter().enumerate() {
            let j = d.column_index(name)?;
            let (mean, std) = (self.means[k], self.stds[k]);
            let col: Vec<f64> = d
                .column_at(j)
                .into_iter()
                .map(|x| f(x, mean, std))
                .collect();
            out.set_column_at(j, &col)?;
        }
        Ok(out)
    }

    pub fn apply(&self, d: &Dataset) -> Result<Dataset> {
        self.map(d, |x, m, s| if s == 0.0 { 0.0 } else { (x - m) / s })
    }

    /// Constant columns come back as their fitted mean.
    pub fn invert(&self, d: &Dataset) -> Result<Dataset> {
        self.map(d, |z, m, s| z * s + m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::tests::ds;
    use rand::{Rng, SeedableRng};

    fn stats(x: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().sum::<f64>() / n;
        (
            m,
            (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt(),
        )
    }

    #[test]
    fn one_two_three() {
        let d = ds(&["a"], &[&[1.0], &[2.0], &[3.0]]);
        let s = StandardScaler::fit(&d, &["a"]).unwrap();
        let z = s.apply(&d).unwrap().column("a").unwrap();
        let h = (1.5f64).sqrt();
        for (got, want) in z.iter().zip([-h, 0.0, h]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn standardized_column_is_fixed_point() {
        let h = (1.5f64).sqrt();
        let d = ds(&["a"], &[&[-h], &[0.0], &[h]]);
        let s = StandardScaler::fit(&d, &["a"]).unwrap();
        assert!(s.means[0].abs() < 1e-12);
        assert!((s.stds[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_warns_and_zeroes() {
        let d = ds(&["a", "b"], &[&[5.0, 1.0], &[5.0, 2.0]]);
        let s = StandardScaler::fit(&d, &["a", "b"]).unwrap();
        assert_eq!(s.warnings.len(), 1);
        assert_eq!(s.apply(&d).unwrap().column("a").unwrap(), [0.0, 0.0]);
        assert_eq!(
            s.invert(&s.apply(&d).unwrap())
                .unwrap()
                .column("a")
                .unwrap(),
            [5.0, 5.0]
        );
    }

    #[test]
    fn other_columns_untouched() {
        let d = ds(&["a", "b"], &[&[1.0, 10.0], &[3.0, 20.0]]);
        let s = StandardScaler::fit(&d, &["a"]).unwrap();
        assert_eq!(s.apply(&d).unwrap().column("b").unwrap(), [10.0, 20.0]);
    }

    #[test]
    fn round_trip_and_moments() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<Vec<f64>> = (0..500)
            .map(|_| vec![rng.random_range(-50.0..900.0)])
            .collect();
        let d = Dataset::new(vec!["x".into()], rows).unwrap();
        let s = StandardScaler::fit(&d, &["x"]).unwrap();
        let z = s.apply(&d).unwrap();
        let (m, sd) = stats(&z.column("x").unwrap());
        assert!(m.abs() <= 1e-9 && (sd - 1.0).abs() <= 1e-9);
        let back = s.invert(&z).unwrap().column("x").unwrap();
        let orig = d.column("x").unwrap();
        let err = back
            .iter()
            .zip(&orig)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-9);
    }

    #[test]
    fn serializes() {
        let d = ds(&["a"], &[&[1.0], &[2.0]]);
        let s = StandardScaler::fit(&d, &["a"]).unwrap();
        let back: StandardScaler =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
