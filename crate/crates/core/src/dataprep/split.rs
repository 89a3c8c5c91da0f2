use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::seeding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    None,
    /// Row weight `n / (10 · count(bin))` over ten equal-width target bins.
    InverseFrequencyDeciles,
}

/// Inverse-frequency weights over ten equal-width bins spanning `[min, max]`
/// of `target`. A constant target puts every row in the first bin.
pub fn decile_weights(target: &[f64]) -> Vec<f64> {
    const BINS: usize = 10;
    if target.is_empty() {
        return Vec::new();
    }
    let lo = target.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = target.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / BINS as f64;
    let bin = |y: f64| {
        if width > 0.0 {
            (((y - lo) / width).floor() as usize).min(BINS - 1)
        } else {
            0
        }
    };
    let mut counts = [0usize; BINS];
    for &y in target {
        counts[bin(y)] += 1;
    }
    let n = target.len() as f64;
    target
        .iter()
        .map(|&y| n / (BINS as f64 * counts[bin(y)] as f64))
        .collect()
}

/// Seeded shuffle, then `round(n · val_fraction)` rows go to validation.
/// With weighting enabled, the training side carries decile weights computed
/// on its own `target` values; validation rows never carry weights.
pub fn split_and_weight(
    d: &Dataset,
    target: &str,
    val_fraction: f64,
    seed: u64,
    weighting: Weighting,
) -> Result<(Dataset, Dataset)> {
    if !(val_fraction > 0.0 && val_fraction < 1.0) {
        return Err(Error::config(
            "val_fraction",
            format!("must be in (0, 1), got {val_fraction}"),
        ));
    }
    let t = d.column_index(target)?;
    let n = d.n_rows();
    let n_val = (n as f64 * val_fraction).round() as usize;
    if n_val == 0 || n_val >= n {
        return Err(Error::EmptySplit {
            train: n.saturating_sub(n_val),
            val: n_val,
        });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut seeding::stream(seed, 0));
    let (val_idx, train_idx) = idx.split_at(n_val);
    let mut train = d.select_rows(train_idx);
    let val = d.select_rows(val_idx).without_weights();
    if weighting == Weighting::InverseFrequencyDeciles {
        let w = decile_weights(&train.column_at(t));
        train = train.with_weights(w)?;
    }
    Ok((train, val))
}
