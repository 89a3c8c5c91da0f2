use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    clean, default_renames, merge_and_rename, profile, zscore_filter, CleanOp, Dataset,
    PowerTransform, ProfileReport, StandardScaler, DEFAULT_CORR_THRESHOLD, DEFAULT_SKEW_THRESHOLD,
};
use crate::error::{Error, Result};

fn default_corr() -> f64 {
    DEFAULT_CORR_THRESHOLD
}

fn default_skew() -> f64 {
    DEFAULT_SKEW_THRESHOLD
}

fn default_z() -> f64 {
    3.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZScoreStep {
    pub columns: Vec<String>,
    #[serde(default = "default_z")]
    pub threshold: f64,
}

/// Preparation recipe, applied in field order: rename and merge, profile,
/// clean, z-score filter, Yeo-Johnson, standardize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrepConfig {
    #[serde(default = "default_renames")]
    pub renames: BTreeMap<String, String>,
    /// `None` runs [`default_ops`].
    #[serde(default)]
    pub ops: Option<Vec<CleanOp>>,
    #[serde(default = "default_corr")]
    pub corr_threshold: f64,
    #[serde(default = "default_skew")]
    pub skew_threshold: f64,
    #[serde(default)]
    pub zscore: Option<ZScoreStep>,
    #[serde(default)]
    pub yeo_johnson: Vec<String>,
    #[serde(default)]
    pub standardize: Vec<String>,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self {
            renames: default_renames(),
            ops: None,
            corr_threshold: DEFAULT_CORR_THRESHOLD,
            skew_threshold: DEFAULT_SKEW_THRESHOLD,
            zscore: None,
            yeo_johnson: Vec::new(),
            standardize: Vec::new(),
        }
    }
}

impl PrepConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Fitted transforms, saved so the same mapping can be applied elsewhere.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FittedTransforms {
    pub power: Option<PowerTransform>,
    pub scaler: Option<StandardScaler>,
}

#[derive(Debug, Clone)]
pub struct PrepOutput {
    pub dataset: Dataset,
    /// Profile of the merged data before any cleaning.
    pub profile: ProfileReport,
    pub transforms: FittedTransforms,
}

/// |r| at or above which two columns count as carrying the same information.
pub const COLLINEAR_THRESHOLD: f64 = 1.0 - 1e-9;

/// Drop `exposed` if present, then every column exactly collinear with an
/// earlier one (aligned sweep designs produce these), then constant columns.
/// The `infected` and `recovered` targets are never touched.
pub fn default_ops(d: &Dataset) -> Vec<CleanOp> {
    let mut ops = Vec::new();
    if d.has_column("exposed") {
        ops.push(CleanOp::DropColumns {
            names: vec!["exposed".to_string()],
        });
    }
    let keep = vec!["infected".to_string(), "recovered".to_string()];
    ops.push(CleanOp::DropCorrelated {
        threshold: COLLINEAR_THRESHOLD,
        keep: keep.clone(),
    });
    ops.push(CleanOp::DropConstant { keep });
    ops
}

fn names(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn prepare(sheets: &[Dataset], config: &PrepConfig) -> Result<PrepOutput> {
    let merged = merge_and_rename(sheets, &config.renames)?;
    let report = profile(&merged, config.corr_threshold, config.skew_threshold)?;
    let ops = config.ops.clone().unwrap_or_else(|| default_ops(&merged));
    let mut d = clean(&merged, &ops)?;
    if let Some(z) = &config.zscore {
        d = zscore_filter(&d, &names(&z.columns), z.threshold)?;
    }
    let mut transforms = FittedTransforms::default();
    if !config.yeo_johnson.is_empty() {
        let pt = PowerTransform::fit(&d, &names(&config.yeo_johnson))?;
        d = pt.apply(&d)?;
        transforms.power = Some(pt);
    }
    if !config.standardize.is_empty() {
        let sc = StandardScaler::fit(&d, &names(&config.standardize))?;
        d = sc.apply(&d)?;
        transforms.scaler = Some(sc);
    }
    Ok(PrepOutput {
        dataset: d,
        profile: report,
        transforms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::tests::ds;

    #[test]
    fn default_renames_and_drops_exposed() {
        let a = ds(
            &["sick", "exposed", "immune"],
            &[&[1.0, 2.0, 3.0], &[2.0, 4.0, 5.0]],
        );
        let b = ds(&["immune", "sick", "exposed"], &[&[7.0, 6.0, 8.0]]);
        let out = prepare(&[a, b], &PrepConfig::default()).unwrap();
        assert_eq!(out.dataset.columns(), ["infected", "recovered"]);
        assert_eq!(out.dataset.row(2), [6.0, 7.0]);
        assert_eq!(out.profile.columns.len(), 3);
    }

    #[test]
    fn default_drops_collinear_but_keeps_targets() {
        let d = ds(
            &["a", "b", "infected", "recovered"],
            &[
                &[1.0, 2.0, 2.0, 0.0],
                &[2.0, 4.0, 4.0, 1.0],
                &[3.0, 6.0, 6.0, 0.0],
            ],
        );
        let out = prepare(&[d], &PrepConfig::default()).unwrap();
        assert_eq!(out.dataset.columns(), ["a", "infected", "recovered"]);
    }

    #[test]
    fn explicit_steps_run_in_order() {
        let rows: Vec<&[f64]> = vec![
            &[1.0, 0.0],
            &[2.0, 1.0],
            &[4.0, 0.0],
            &[8.0, 1.0],
            &[0.0, 0.0],
        ];
        let d = ds(&["x", "y"], &rows);
        let cfg: PrepConfig = serde_json::from_str(
            r#"{"ops":[{"op":"drop_all_zero_rows"}],"yeo_johnson":["x"],"standardize":["x","y"]}"#,
        )
        .unwrap();
        let out = prepare(&[d], &cfg).unwrap();
        assert_eq!(out.dataset.n_rows(), 4);
        let x = out.dataset.column("x").unwrap();
        assert!(x.iter().sum::<f64>().abs() < 1e-9);
        assert!(out.transforms.power.is_some() && out.transforms.scaler.is_some());
    }

    #[test]
    fn schema_mismatch_surfaces() {
        let a = ds(&["a", "b"], &[&[1.0, 2.0]]);
        let b = ds(&["a", "c"], &[&[1.0, 2.0]]);
        assert!(matches!(
            prepare(&[a, b], &PrepConfig::default()),
            Err(Error::SchemaMismatch { .. })
        ));
    }
}
