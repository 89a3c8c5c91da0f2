//! Regression algorithms, metrics, grid search and the benchmark driver.
//!
//! Every learner is written from scratch here; only the dense QR used by the
//! closed-form linear solves comes from `nalgebra`.

mod bench;
mod grid;
mod knn;
mod linear;
mod metrics;
mod tree;

pub use bench::{benchmark, feature_matrix, BenchConfig, EvalReport, RosterEntry, SplitInfo};
pub use grid::{grid_search, kfold_indices, CvRow, GridResult, DEFAULT_FOLDS};
pub use knn::KnnModel;
pub use linear::{coordinate_descent, soft_threshold, CdFit, LinearModel};
pub use metrics::{evaluate, metrics, MetricBlock};
pub use tree::{Binner, GbtModel, Node, Tree, TreeParams};

use std::fmt;
use std::time::Instant;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressorKind {
    Ols,
    Ridge,
    Lasso,
    ElasticNet,
    Knn,
    Tree,
    Forest,
    Gbt,
}

impl RegressorKind {
    pub const ALL: [RegressorKind; 8] = [
        RegressorKind::Ols,
        RegressorKind::Ridge,
        RegressorKind::Lasso,
        RegressorKind::ElasticNet,
        RegressorKind::Knn,
        RegressorKind::Tree,
        RegressorKind::Forest,
        RegressorKind::Gbt,
    ];

    /// Short algorithm label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            RegressorKind::Ols => "LiR",
            RegressorKind::Ridge => "RiR",
            RegressorKind::Lasso => "LaR",
            RegressorKind::ElasticNet => "ENR",
            RegressorKind::Knn => "KNN",
            RegressorKind::Tree => "DT",
            RegressorKind::Forest => "RF",
            RegressorKind::Gbt => "GBT",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegressorKind::Ols => "ols",
            RegressorKind::Ridge => "ridge",
            RegressorKind::Lasso => "lasso",
            RegressorKind::ElasticNet => "elastic_net",
            RegressorKind::Knn => "knn",
            RegressorKind::Tree => "tree",
            RegressorKind::Forest => "forest",
            RegressorKind::Gbt => "gbt",
        }
    }

    pub fn is_linear(self) -> bool {
        matches!(
            self,
            RegressorKind::Ols
                | RegressorKind::Ridge
                | RegressorKind::Lasso
                | RegressorKind::ElasticNet
        )
    }
}

impl std::str::FromStr for RegressorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegressorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config("kind", format!("unknown regressor `{s}`")))
    }
}

/// A learner kind plus any hyperparameters that differ from the defaults.
///
/// JSON form is flat, e.g. `{"kind": "lasso", "alpha": 0.1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressorSpec {
    pub kind: RegressorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_samples_leaf: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_samples_split: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_trees: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feature_subsample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_L1_RATIO: f64 = 0.5;
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_N_TREES: usize = 100;
pub const DEFAULT_N_ROUNDS: usize = 100;
pub const DEFAULT_LEARNING_RATE: f64 = 0.1;
pub const DEFAULT_GBT_DEPTH: usize = 3;
pub const DEFAULT_MAX_BINS: usize = 256;

impl RegressorSpec {
    pub fn new(kind: RegressorKind) -> Self {
        Self {
            kind,
            name: None,
            alpha: None,
            l1_ratio: None,
            k: None,
            max_depth: None,
            min_samples_leaf: None,
            min_samples_split: None,
            n_trees: None,
            learning_rate: None,
            n_rounds: None,
            feature_subsample: None,
            bootstrap: None,
            max_bins: None,
            seed: None,
        }
    }

    pub fn ols() -> Self {
        Self::new(RegressorKind::Ols)
    }

    pub fn ridge(alpha: f64) -> Self {
        Self::new(RegressorKind::Ridge).with_alpha(alpha)
    }

    pub fn lasso(alpha: f64) -> Self {
        Self::new(RegressorKind::Lasso).with_alpha(alpha)
    }

    pub fn elastic_net(alpha: f64, l1_ratio: f64) -> Self {
        Self {
            l1_ratio: Some(l1_ratio),
            ..Self::new(RegressorKind::ElasticNet).with_alpha(alpha)
        }
    }

    pub fn knn(k: usize) -> Self {
        Self {
            k: Some(k),
            ..Self::new(RegressorKind::Knn)
        }
    }

    pub fn tree() -> Self {
        Self::new(RegressorKind::Tree)
    }

    pub fn forest(n_trees: usize, seed: u64) -> Self {
        Self {
            n_trees: Some(n_trees),
            seed: Some(seed),
            ..Self::new(RegressorKind::Forest)
        }
    }

    pub fn gbt(n_rounds: usize, learning_rate: f64) -> Self {
        Self {
            n_rounds: Some(n_rounds),
            learning_rate: Some(learning_rate),
            ..Self::new(RegressorKind::Gbt)
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    /// The roster benchmarked by default: one entry per kind, stock settings.
    pub fn default_roster() -> Vec<RegressorSpec> {
        RegressorKind::ALL.into_iter().map(Self::new).collect()
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| self.kind.label().to_string())
    }

    pub fn alpha(&self) -> f64 {
        match self.kind {
            RegressorKind::Ols => 0.0,
            _ => self.alpha.unwrap_or(DEFAULT_ALPHA),
        }
    }

    pub fn l1_ratio(&self) -> f64 {
        match self.kind {
            RegressorKind::Lasso => 1.0,
            RegressorKind::Ridge | RegressorKind::Ols => 0.0,
            _ => self.l1_ratio.unwrap_or(DEFAULT_L1_RATIO),
        }
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(DEFAULT_K)
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate.unwrap_or(DEFAULT_LEARNING_RATE)
    }

    pub fn n_rounds(&self) -> usize {
        self.n_rounds.unwrap_or(DEFAULT_N_ROUNDS)
    }

    pub fn n_trees(&self) -> usize {
        self.n_trees.unwrap_or(DEFAULT_N_TREES)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn tree_params(&self, n_features: usize) -> TreeParams {
        let max_depth = match self.kind {
            RegressorKind::Gbt => Some(self.max_depth.unwrap_or(DEFAULT_GBT_DEPTH)),
            _ => self.max_depth,
        };
        let feature_subsample = match self.kind {
            RegressorKind::Forest => {
                Some(self.feature_subsample.unwrap_or((n_features / 3).max(1)))
            }
            _ => self.feature_subsample,
        };
        TreeParams {
            max_depth,
            min_samples_split: self.min_samples_split.unwrap_or(2),
            min_samples_leaf: self.min_samples_leaf.unwrap_or(1),
            feature_subsample,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad =
            |name: &'static str, reason: String| Err(Error::InvalidHyperparameter { name, reason });
        if let Some(a) = self.alpha {
            if !(a >= 0.0 && a.is_finite()) {
                return bad("alpha", format!("must be >= 0 and finite, got {a}"));
            }
        }
        if let Some(r) = self.l1_ratio {
            if !(0.0..=1.0).contains(&r) {
                return bad("l1_ratio", format!("must be within [0, 1], got {r}"));
            }
        }
        if let Some(lr) = self.learning_rate {
            // 0 is accepted and freezes the ensemble at the base prediction.
            if !(0.0..=1.0).contains(&lr) {
                return bad("learning_rate", format!("must be within [0, 1], got {lr}"));
            }
        }
        for (name, v) in [
            ("k", self.k),
            ("max_depth", self.max_depth),
            ("min_samples_leaf", self.min_samples_leaf),
            ("min_samples_split", self.min_samples_split),
            ("n_trees", self.n_trees),
            ("n_rounds", self.n_rounds),
            ("feature_subsample", self.feature_subsample),
        ] {
            if v == Some(0) {
                return bad(name, "must be >= 1".into());
            }
        }
        if let Some(b) = self.max_bins {
            if !(2..=DEFAULT_MAX_BINS).contains(&b) {
                return bad("max_bins", format!("must be within [2, 256], got {b}"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for RegressorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Linear(LinearModel),
    Knn(KnnModel),
    Tree(Tree),
    Forest(Vec<Tree>),
    Gbt(GbtModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub spec: RegressorSpec,
    pub model: Model,
    pub n_features: usize,
    pub training_time_s: f64,
}

pub(crate) fn check_xy(x: &DMatrix<f64>, y: &[f64], w: Option<&[f64]>) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but {} targets",
            x.nrows(),
            y.len()
        )));
    }
    if let Some(w) = w {
        if w.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} rows",
                w.len(),
                y.len()
            )));
        }
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::DimensionMismatch(
                "weights must be finite and >= 0".into(),
            ));
        }
        if w.iter().sum::<f64>() <= 0.0 {
            return Err(Error::DimensionMismatch("weights sum to zero".into()));
        }
    }
    if y.is_empty() {
        return Err(Error::TooFewRows { needed: 1, got: 0 });
    }
    Ok(())
}

/// Fit `spec` on rows of `x` against `y`, optionally weighted. Wall time of
/// the fit alone is recorded in `training_time_s`.
pub fn fit(
    spec: &RegressorSpec,
    x: &DMatrix<f64>,
    y: &[f64],
    w: Option<&[f64]>,
) -> Result<FittedModel> {
    spec.validate()?;
    check_xy(x, y, w)?;
    let start = Instant::now();
    let model = match spec.kind {
        RegressorKind::Ols
        | RegressorKind::Ridge
        | RegressorKind::Lasso
        | RegressorKind::ElasticNet => Model::Linear(linear::fit_linear(spec, x, y, w)?),
        RegressorKind::Knn => Model::Knn(KnnModel::fit(spec.k(), x, y)?),
        RegressorKind::Tree => Model::Tree(Tree::fit(
            x,
            y,
            w,
            &spec.tree_params(x.ncols()),
            spec.seed(),
        )),
        RegressorKind::Forest => Model::Forest(tree::fit_forest(spec, x, y, w)),
        RegressorKind::Gbt => Model::Gbt(GbtModel::fit(spec, x, y, w)),
    };
    Ok(FittedModel {
        spec: spec.clone(),
        model,
        n_features: x.ncols(),
        training_time_s: start.elapsed().as_secs_f64(),
    })
}

impl FittedModel {
    pub fn predict(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        if x.ncols() != self.n_features {
            return Err(Error::DimensionMismatch(format!(
                "model has {} features, input has {}",
                self.n_features,
                x.ncols()
            )));
        }
        Ok(match &self.model {
            Model::Linear(m) => m.predict(x),
            Model::Knn(m) => m.predict(x),
            Model::Tree(t) => (0..x.nrows()).map(|i| t.predict_row(x, i)).collect(),
            Model::Forest(trees) => (0..x.nrows())
                .map(|i| {
                    trees.iter().map(|t| t.predict_row(x, i)).sum::<f64>() / trees.len() as f64
                })
                .collect(),
            Model::Gbt(m) => m.predict(x),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_is_flat_and_strict() {
        let s: RegressorSpec = serde_json::from_str(r#"{"kind":"lasso","alpha":0.1}"#).unwrap();
        assert_eq!(s, RegressorSpec::lasso(0.1));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"kind":"lasso","alpha":0.1}"#
        );
        assert!(serde_json::from_str::<RegressorSpec>(r#"{"kind":"lasso","alpa":0.1}"#).is_err());
    }

    #[test]
    fn invariants_enforced() {
        assert!(RegressorSpec::ridge(-1.0).validate().is_err());
        assert!(RegressorSpec::elastic_net(1.0, 1.5).validate().is_err());
        assert!(RegressorSpec::knn(0).validate().is_err());
        assert!(RegressorSpec::gbt(10, 1.5).validate().is_err());
        assert!(RegressorSpec::tree().with_max_depth(0).validate().is_err());
        assert!(RegressorSpec::gbt(10, 0.0).validate().is_ok());
    }

    #[test]
    fn family_defaults() {
        assert_eq!(RegressorSpec::ols().alpha(), 0.0);
        assert_eq!(RegressorSpec::lasso(0.3).l1_ratio(), 1.0);
        assert_eq!(RegressorSpec::ridge(0.3).l1_ratio(), 0.0);
        assert_eq!(
            RegressorSpec::forest(3, 0).tree_params(9).feature_subsample,
            Some(3)
        );
        assert_eq!(
            RegressorSpec::forest(3, 0).tree_params(2).feature_subsample,
            Some(1)
        );
        assert_eq!(RegressorSpec::gbt(3, 0.1).tree_params(2).max_depth, Some(3));
        assert_eq!(RegressorSpec::tree().tree_params(2).max_depth, None);
    }

    #[test]
    fn kind_parses() {
        assert_eq!(
            "elastic_net".parse::<RegressorKind>().unwrap(),
            RegressorKind::ElasticNet
        );
        assert!("svr".parse::<RegressorKind>().is_err());
    }

    #[test]
    fn predict_checks_width() {
        let x = DMatrix::from_row_slice(3, 1, &[1.0, 2.0, 3.0]);
        let m = fit(&RegressorSpec::ols(), &x, &[2.0, 4.0, 6.0], None).unwrap();
        assert!(m.predict(&DMatrix::zeros(2, 2)).is_err());
    }
}
