use serde::{Deserialize, Serialize};

use super::profile::correlation;
use super::Dataset;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowPredicate {
    IsZero,
}

impl RowPredicate {
    fn holds(self, x: f64) -> bool {
        match self {
            RowPredicate::IsZero => x == 0.0,
        }
    }
}

/// One cleaning step. JSON form: `{"op": "drop_columns", "names": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum CleanOp {
    DropColumns {
        names: Vec<String>,
    },
    DropAllZeroRows,
    /// Half-away-from-zero rounding to `decimals` places, applied to every cell.
    Round {
        decimals: u32,
    },
    DropRowsWhere {
        column: String,
        predicate: RowPredicate,
    },
    /// Left to right, drop each column whose |Pearson r| with an earlier
    /// kept column reaches `threshold`. Columns in `keep` are never dropped.
    DropCorrelated {
        threshold: f64,
        #[serde(default)]
        keep: Vec<String>,
    },
    /// Drop every column holding a single value, except those in `keep`.
    DropConstant {
        #[serde(default)]
        keep: Vec<String>,
    },
}

fn round_half_away(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (x * scale).round() / scale;
    if r.is_finite() {
        r
    } else {
        x
    }
}

/// Apply `ops` in order.
pub fn clean(d: &Dataset, ops: &[CleanOp]) -> Result<Dataset> {
    let mut out = d.clone();
    for op in ops {
        out = match op {
            CleanOp::DropColumns { names } => {
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                out.drop_columns(&names)?
            }
            CleanOp::DropAllZeroRows => out.filter_rows(|_, r| r.iter().any(|x| *x != 0.0)),
            CleanOp::Round { decimals } => {
                let mut rounded = out.clone();
                for j in 0..out.n_cols() {
                    let col: Vec<f64> = out
                        .column_at(j)
                        .iter()
                        .map(|x| round_half_away(*x, *decimals))
                        .collect();
                    rounded.set_column_at(j, &col)?;
                }
                rounded
            }
            CleanOp::DropRowsWhere { column, predicate } => {
                let j = out.column_index(column)?;
                out.filter_rows(|_, r| !predicate.holds(r[j]))
            }
            CleanOp::DropCorrelated { threshold, keep } => {
                let names = correlated_columns(&out, *threshold, keep);
                let names: Vec<&str> = names.iter().map(String::as_str).collect();
                out.drop_columns(&names)?
            }
            CleanOp::DropConstant { keep } => {
                let names: Vec<&str> = out
                    .columns()
                    .iter()
                    .enumerate()
                    .filter(|(j, name)| {
                        let col = out.column_at(*j);
                        !keep.contains(name) && col.iter().all(|x| *x == col[0])
                    })
                    .map(|(_, name)| name.as_str())
                    .collect();
                out.drop_columns(&names)?
            }
        };
    }
    Ok(out)
}

/// Columns [`CleanOp::DropCorrelated`] would remove, in dataset order.
pub fn correlated_columns(d: &Dataset, threshold: f64, keep: &[String]) -> Vec<String> {
    let cols: Vec<Vec<f64>> = (0..d.n_cols()).map(|j| d.column_at(j)).collect();
    let mut kept: Vec<usize> = Vec::new();
    let mut dropped = Vec::new();
    for (j, name) in d.columns().iter().enumerate() {
        let redundant = !keep.contains(name)
            && kept
                .iter()
                .any(|&k| correlation(&cols[k], &cols[j]).abs() >= threshold);
        if redundant {
            dropped.push(name.clone());
        } else {
            kept.push(j);
        }
    }
    dropped
}

/// Drop rows where any listed column has `|x − μ| / σ > threshold`.
///
/// μ and σ (population) are computed once on the input; a column with σ = 0
/// never removes a row.
pub fn zscore_filter(d: &Dataset, columns: &[&str], threshold: f64) -> Result<Dataset> {
    let mut stats = Vec::with_capacity(columns.len());
    for name in columns {
        let j = d.column_index(name)?;
        let x = d.column_at(j);
        let n = x.len().max(1) as f64;
        let mean = x.iter().sum::<f64>() / n;
        let std = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        stats.push((j, mean, std));
    }
    Ok(d.filter_rows(|_, r| {
        stats
            .iter()
            .all(|&(j, mean, std)| std == 0.0 || (r[j] - mean).abs() / std <= threshold)
    }))
}
