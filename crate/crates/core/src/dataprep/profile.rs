use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};

pub const DEFAULT_CORR_THRESHOLD: f64 = 0.9;
pub const DEFAULT_SKEW_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnProfile {
    pub name: String,
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub skewness: f64,
    pub zero_fraction: f64,
    pub missing_count: usize,
    /// Set for zero-variance columns; their correlations are reported as 0.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationAlert {
    pub a: String,
    pub b: String,
    pub correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewAlert {
    pub column: String,
    pub skewness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub rows: usize,
    pub columns: Vec<ColumnProfile>,
    /// Pearson correlations, `correlation[i][j]` for columns `i`, `j`.
    pub correlation: Vec<Vec<f64>>,
    pub corr_threshold: f64,
    pub skew_threshold: f64,
    pub high_correlation: Vec<CorrelationAlert>,
    pub high_skew: Vec<SkewAlert>,
    pub notes: Vec<String>,
}

impl ProfileReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    /// Columns named in at least one high-correlation alert, ordered by how
    /// many alerts they appear in (most first), ties by column order.
    pub fn most_correlated(&self) -> Vec<&str> {
        let mut hits: Vec<(usize, usize, &str)> = self
            .columns
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = self
                    .high_correlation
                    .iter()
                    .filter(|a| a.a == c.name || a.b == c.name)
                    .count();
                (n, k, c.name.as_str())
            })
            .filter(|(n, _, _)| *n > 0)
            .collect();
        hits.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        hits.into_iter().map(|(_, _, n)| n).collect()
    }
}

fn central_moments(x: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for v in x {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    (mean, m2 / n, m3 / n)
}

/// Sample skewness g₁ = m₃ / m₂^1.5 (0 for constant input).
pub fn skewness(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let (_, m2, m3) = central_moments(x);
    if m2 <= 0.0 {
        return 0.0;
    }
    m3 / m2.powf(1.5)
}

/// Pearson correlation of two equal-length columns (0 if either is constant).
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    pearson(a, b, a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n)
}

fn pearson(a: &[f64], b: &[f64], mean_a: f64, mean_b: f64) -> f64 {
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return 0.0;
    }
    (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0)
}

/// Column statistics, Pearson correlation matrix, and threshold alerts.
pub fn profile(d: &Dataset, corr_threshold: f64, skew_threshold: f64) -> Result<ProfileReport> {
    let n = d.n_rows();
    if n < 2 {
        return Err(Error::TooFewRows { needed: 2, got: n });
    }
    let cols: Vec<Vec<f64>> = (0..d.n_cols()).map(|j| d.column_at(j)).collect();
    let mut columns = Vec::with_capacity(cols.len());
    let mut notes = Vec::new();
    for (name, x) in d.columns().iter().zip(&cols) {
        let (mean, m2, _) = central_moments(x);
        // Exact constancy, not m2 == 0: rounding can leave a tiny m2.
        let constant = x.iter().all(|v| *v == x[0]);
        if constant {
            notes.push(format!(
                "ConstantColumn: `{name}` has zero variance; correlations reported as 0"
            ));
        }
        columns.push(ColumnProfile {
            name: name.clone(),
            count: x.len(),
            mean,
            std: if constant { 0.0 } else { m2.sqrt() },
            skewness: if constant { 0.0 } else { skewness(x) },
            zero_fraction: x.iter().filter(|v| **v == 0.0).count() as f64 / n as f64,
            missing_count: x.iter().filter(|v| !v.is_finite()).count(),
            constant,
        });
    }

    let p = cols.len();
    let mut correlation = vec![vec![0.0; p]; p];
    let mut high_correlation = Vec::new();
    for i in 0..p {
        correlation[i][i] = 1.0;
        for j in i + 1..p {
            let r = if columns[i].constant || columns[j].constant {
                0.0
            } else {
                pearson(&cols[i], &cols[j], columns[i].mean, columns[j].mean)
            };
            correlation[i][j] = r;
            correlation[j][i] = r;
            if r.abs() >= corr_threshold {
                high_correlation.push(CorrelationAlert {
                    a: columns[i].name.clone(),
                    b: columns[j].name.clone(),
                    correlation: r,
                });
            }
        }
    }
    let high_skew = columns
        .iter()
        .filter(|c| c.skewness.abs() >= skew_threshold)
        .map(|c| SkewAlert {
            column: c.name.clone(),
            skewness: c.skewness,
        })
        .collect();
    Ok(ProfileReport {
        rows: n,
        columns,
        correlation,
        corr_threshold,
        skew_threshold,
        high_correlation,
        high_skew,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::tests::ds;

    #[test]
    fn duplicated_column_alerts() {
        let d = ds(
            &["a", "a_copy", "b"],
            &[
                &[1.0, 1.0, 5.0],
                &[2.0, 2.0, 3.0],
                &[4.0, 4.0, 9.0],
                &[3.0, 3.0, 1.0],
            ],
        );
        let p = profile(&d, 0.9, 2.0).unwrap();
        assert!((p.correlation[0][1] - 1.0).abs() < 1e-12);
        assert_eq!(p.high_correlation.len(), 1);
        assert_eq!(
            (
                p.high_correlation[0].a.as_str(),
                p.high_correlation[0].b.as_str()
            ),
            ("a", "a_copy")
        );
        assert_eq!(p.most_correlated(), ["a", "a_copy"]);
    }

    #[test]
    fn symmetric_sample_has_zero_skew() {
        assert_eq!(skewness(&[-1.0, 0.0, 1.0]), 0.0);
    }

    #[test]
    fn skewness_matches_moment_oracle() {
        let x = [1.0, 2.0, 2.0, 3.0, 7.0, 11.0];
        // mean = 26/6; m2 and m3 from the definitions, computed term by term.
        let mean: f64 = 26.0 / 6.0;
        let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 6.0;
        let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / 6.0;
        let want = m3 / (m2 * m2.sqrt());
        assert!((skewness(&x) - want).abs() < 1e-10);
        assert!(skewness(&x) > 0.0);
    }

    #[test]
    fn constant_column_reports_zero_not_nan() {
        let d = ds(&["k", "x"], &[&[3.0, 1.0], &[3.0, 2.0], &[3.0, 5.0]]);
        let p = profile(&d, 0.9, 2.0).unwrap();
        assert_eq!(p.correlation[0][1], 0.0);
        assert_eq!(p.correlation[0][0], 1.0);
        assert!(p.columns[0].constant);
        assert!(p.notes.iter().any(|n| n.starts_with("ConstantColumn")));
        assert!(p.high_correlation.is_empty());
    }

    #[test]
    fn skew_alert_and_zero_fraction() {
        let mut rows: Vec<Vec<f64>> = (0..20).map(|_| vec![0.0]).collect();
        rows.push(vec![100.0]);
        let d = Dataset::new(vec!["z".into()], rows).unwrap();
        let p = profile(&d, 0.9, 2.0).unwrap();
        assert_eq!(p.high_skew.len(), 1);
        assert!((p.columns[0].zero_fraction - 20.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn too_few_rows() {
        let d = ds(&["a"], &[&[1.0]]);
        assert!(matches!(
            profile(&d, 0.9, 2.0),
            Err(Error::TooFewRows { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn correlation_matrix_well_formed(
            rows in proptest::collection::vec(proptest::collection::vec(-100.0f64..100.0, 4), 2..40)
        ) {
            let d = Dataset::new(vec!["a".into(), "b".into(), "c".into(), "d".into()], rows).unwrap();
            let p = profile(&d, 0.9, 2.0).unwrap();
            for i in 0..4 {
                proptest::prop_assert_eq!(p.correlation[i][i], 1.0);
                for j in 0..4 {
                    proptest::prop_assert_eq!(p.correlation[i][j], p.correlation[j][i]);
                    proptest::prop_assert!((-1.0..=1.0).contains(&p.correlation[i][j]));
                }
            }
        }
    }
}
