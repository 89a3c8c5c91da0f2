use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::grid::DEFAULT_FOLDS;
use super::{evaluate, fit, grid_search, CvRow, FittedModel, MetricBlock, RegressorSpec};
use crate::dataprep::{split_and_weight, Dataset, StandardScaler, Weighting};
use crate::error::{Error, Result};

/// One roster slot: a fixed spec, or a list of specs to choose from by
/// cross-validation on the training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RosterEntry {
    Fixed(RegressorSpec),
    Grid(Vec<RegressorSpec>),
}

impl From<RegressorSpec> for RosterEntry {
    fn from(s: RegressorSpec) -> Self {
        RosterEntry::Fixed(s)
    }
}

fn default_val_fraction() -> f64 {
    0.2
}

fn default_true() -> bool {
    true
}

fn default_folds() -> usize {
    DEFAULT_FOLDS
}

fn default_identifiers() -> Vec<String> {
    vec!["run_id".to_string()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub target: String,
    #[serde(default)]
    pub roster: Vec<RosterEntry>,
    #[serde(default = "default_val_fraction")]
    pub val_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub weighting: Weighting,
    /// Standardize features with statistics of the training split.
    #[serde(default = "default_true")]
    pub standardize: bool,
    #[serde(default = "default_folds")]
    pub cv_folds: usize,
    /// Columns that are neither target nor feature.
    #[serde(default = "default_identifiers")]
    pub identifiers: Vec<String>,
}

impl BenchConfig {
    /// Default roster, 0.8/0.2 split, seed 0.
    pub fn new(target: &str) -> Self {
        Self {
            target: target.to_string(),
            roster: RegressorSpec::default_roster()
                .into_iter()
                .map(RosterEntry::from)
                .collect(),
            val_fraction: default_val_fraction(),
            seed: 0,
            weighting: Weighting::None,
            standardize: true,
            cv_folds: DEFAULT_FOLDS,
            identifiers: default_identifiers(),
        }
    }

    pub fn with_roster(mut self, roster: Vec<RosterEntry>) -> Self {
        self.roster = roster;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub val_fraction: f64,
    pub seed: u64,
    pub n_train: usize,
    pub n_val: usize,
    pub weighting: Weighting,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub algorithm: String,
    pub spec: RegressorSpec,
    pub target: String,
    /// Wall seconds spent in the final fit only.
    #[serde(default)]
    pub training_time_s: f64,
    pub train: MetricBlock,
    pub val: MetricBlock,
    pub split: SplitInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cv: Option<Vec<CvRow>>,
}

/// Split `d` into a feature matrix (every column except `target` and
/// `exclude`, in dataset order) and the target vector.
pub fn feature_matrix(
    d: &Dataset,
    target: &str,
    exclude: &[String],
) -> Result<(DMatrix<f64>, Vec<f64>, Vec<String>)> {
    let t = d.column_index(target)?;
    let features: Vec<usize> = (0..d.n_cols())
        .filter(|&j| j != t && !exclude.contains(&d.columns()[j]))
        .collect();
    if features.is_empty() {
        return Err(Error::config("features", "no feature columns remain"));
    }
    let x = DMatrix::from_fn(d.n_rows(), features.len(), |i, k| d.get(i, features[k]));
    let names = features.iter().map(|&j| d.columns()[j].clone()).collect();
    Ok((x, d.column_at(t), names))
}

/// Fit every roster entry on the training split and score both splits.
/// Reports come back in roster order.
pub fn benchmark(d: &Dataset, config: &BenchConfig) -> Result<Vec<EvalReport>> {
    if config.roster.is_empty() {
        return Err(Error::config("roster", "must contain at least one entry"));
    }
    for id in &config.identifiers {
        if id == &config.target {
            return Err(Error::config(
                "target",
                "target cannot also be an identifier",
            ));
        }
    }
    let exclude: Vec<String> = config
        .identifiers
        .iter()
        .filter(|c| d.has_column(c))
        .cloned()
        .collect();
    let (train, val) = split_and_weight(
        d,
        &config.target,
        config.val_fraction,
        config.seed,
        config.weighting,
    )?;
    let (_, _, features) = feature_matrix(d, &config.target, &exclude)?;
    let (train, val) = if config.standardize {
        let names: Vec<&str> = features.iter().map(String::as_str).collect();
        let scaler = StandardScaler::fit(&train, &names)?;
        (scaler.apply(&train)?, scaler.apply(&val)?)
    } else {
        (train, val)
    };
    let (xt, yt, _) = feature_matrix(&train, &config.target, &exclude)?;
    let (xv, yv, _) = feature_matrix(&val, &config.target, &exclude)?;
    let w = train.weights();
    let split = SplitInfo {
        val_fraction: config.val_fraction,
        seed: config.seed,
        n_train: yt.len(),
        n_val: yv.len(),
        weighting: config.weighting,
        features,
    };

    let mut reports = Vec::with_capacity(config.roster.len());
    for entry in &config.roster {
        let (model, cv): (FittedModel, Option<Vec<CvRow>>) = match entry {
            RosterEntry::Fixed(spec) => (fit(spec, &xt, &yt, w)?, None),
            RosterEntry::Grid(grid) => {
                let g = grid_search(grid, &xt, &yt, w, config.cv_folds, config.seed)?;
                (g.model, Some(g.table))
            }
        };
        reports.push(EvalReport {
            algorithm: model.spec.label(),
            spec: model.spec.clone(),
            target: config.target.clone(),
            training_time_s: model.training_time_s,
            train: evaluate(&model, &xt, &yt)?,
            val: evaluate(&model, &xv, &yv)?,
            split: split.clone(),
            cv,
        });
    }
    Ok(reports)
}
