//! Experiment design and parallel sweep runner.
//!
//! A design names factors (config fields) and their levels. A factorial
//! design runs the Cartesian product; an aligned design pairs the i-th level
//! of every factor. Each configuration is run `replicates` times with seeds
//! derived from `(master_seed, run_id)`, so the output never depends on how
//! many workers executed it.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abm::{self, Mode, SimConfig, WidgetConfig};
use crate::dataprep::Dataset;
use crate::error::{Error, Result};
use crate::seeding;

pub const DEFAULT_TICKS: u64 = 100;

pub const COMPARTMENT_COLUMNS: [&str; 6] = [
    "susceptible",
    "exposed",
    "infected",
    "recovered",
    "vaccinated",
    "dead",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Factor {
    pub name: String,
    pub levels: Vec<f64>,
}

impl Factor {
    pub fn new(name: &str, levels: &[f64]) -> Self {
        Self {
            name: name.to_string(),
            levels: levels.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Factorial,
    #[default]
    Aligned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDesign", into = "RawDesign")]
pub struct ExperimentDesign {
    pub factors: Vec<Factor>,
    pub design_kind: DesignKind,
    pub ticks: u64,
    pub replicates: usize,
    pub base_config: SimConfig,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    mode: Mode,
    #[serde(default)]
    factors: Vec<Factor>,
    #[serde(default)]
    design_kind: DesignKind,
    #[serde(default = "default_ticks")]
    ticks: u64,
    #[serde(default = "default_replicates")]
    replicates: usize,
    #[serde(default)]
    base_config: Option<serde_json::Value>,
    #[serde(default)]
    master_seed: u64,
}

fn default_ticks() -> u64 {
    DEFAULT_TICKS
}

fn default_replicates() -> usize {
    1
}

impl TryFrom<RawDesign> for ExperimentDesign {
    type Error = Error;

    fn try_from(raw: RawDesign) -> Result<Self> {
        let base_config = match (raw.mode, raw.base_config) {
            (mode, Some(v)) => SimConfig::from_json_value(mode, v)?,
            (Mode::Widget, None) => SimConfig::Widget(WidgetConfig::default()),
            (Mode::Rate, None) => {
                return Err(Error::config("base_config", "rate mode needs params"))
            }
        };
        Ok(Self {
            factors: raw.factors,
            design_kind: raw.design_kind,
            ticks: raw.ticks,
            replicates: raw.replicates,
            base_config,
            master_seed: raw.master_seed,
        })
    }
}

impl From<ExperimentDesign> for RawDesign {
    fn from(d: ExperimentDesign) -> Self {
        RawDesign {
            mode: d.base_config.mode(),
            factors: d.factors,
            design_kind: d.design_kind,
            ticks: d.ticks,
            replicates: d.replicates,
            base_config: Some(d.base_config.to_json_value()),
            master_seed: d.master_seed,
        }
    }
}

/// The six widget factors with their five published levels each.
pub fn published_widget_factors() -> Vec<Factor> {
    vec![
        Factor::new("infectiousness_pct", &[20.0, 40.0, 60.0, 80.0, 100.0]),
        Factor::new("worm_duration_ticks", &[10.0, 30.0, 50.0, 70.0, 90.0]),
        Factor::new("exposure_duration_ticks", &[40.0, 45.0, 50.0, 55.0, 60.0]),
        Factor::new("n_nodes", &[200.0, 400.0, 600.0, 800.0, 1000.0]),
        Factor::new("chance_recover_pct", &[100.0, 80.0, 60.0, 40.0, 20.0]),
        Factor::new("chance_vaccinate_pct", &[90.0, 70.0, 50.0, 30.0, 10.0]),
    ]
}

impl ExperimentDesign {
    pub fn new(
        base_config: impl Into<SimConfig>,
        factors: Vec<Factor>,
        design_kind: DesignKind,
    ) -> Self {
        Self {
            factors,
            design_kind,
            ticks: DEFAULT_TICKS,
            replicates: 1,
            base_config: base_config.into(),
            master_seed: 0,
        }
    }

    pub fn mode(&self) -> Mode {
        self.base_config.mode()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let d: Self = serde_json::from_str(&text)?;
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ticks == 0 {
            return Err(Error::config("ticks", "must be >= 1"));
        }
        if self.replicates == 0 {
            return Err(Error::config("replicates", "must be >= 1"));
        }
        let allowed = SimConfig::numeric_fields(self.mode());
        for (k, f) in self.factors.iter().enumerate() {
            if !allowed.contains(&f.name.as_str()) {
                return Err(Error::config(
                    format!("factors[{k}].name"),
                    format!("`{}` is not a numeric {:?}-mode field", f.name, self.mode()),
                ));
            }
            if f.levels.is_empty() {
                return Err(Error::config(
                    format!("factors[{k}].levels"),
                    "must not be empty",
                ));
            }
            if self.factors[..k].iter().any(|g| g.name == f.name) {
                return Err(Error::config(
                    format!("factors[{k}].name"),
                    "duplicate factor",
                ));
            }
        }
        if self.design_kind == DesignKind::Aligned {
            let lens: Vec<(String, usize)> = self
                .factors
                .iter()
                .map(|f| (f.name.clone(), f.levels.len()))
                .collect();
            if lens.windows(2).any(|w| w[0].1 != w[1].1) {
                return Err(Error::AlignmentMismatch(lens));
            }
        }
        Ok(())
    }

    pub fn factor_names(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.name.as_str()).collect()
    }

    /// Dataset column names in output order.
    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["run_id".to_string(), "tick".to_string()];
        cols.extend(self.factors.iter().map(|f| f.name.clone()));
        cols.extend(COMPARTMENT_COLUMNS.iter().map(|s| s.to_string()));
        cols
    }
}

/// One configuration produced by [`enumerate`].
#[derive(Debug, Clone, PartialEq)]
pub struct PlannedConfig {
    pub config_id: usize,
    pub factor_values: Vec<f64>,
    pub config: SimConfig,
}

/// All configurations of `design`, tagged with their position.
///
/// Factorial order is lexicographic in factor order: the last factor varies
/// fastest.
pub fn enumerate(design: &ExperimentDesign) -> Result<Vec<PlannedConfig>> {
    design.validate()?;
    let tuples: Vec<Vec<f64>> = match design.design_kind {
        DesignKind::Aligned => {
            let len = design.factors.first().map_or(1, |f| f.levels.len());
            (0..len)
                .map(|i| design.factors.iter().map(|f| f.levels[i]).collect())
                .collect()
        }
        DesignKind::Factorial => {
            let mut acc: Vec<Vec<f64>> = vec![Vec::new()];
            for f in &design.factors {
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        f.levels.iter().map(move |&l| {
                            let mut t = prefix.clone();
                            t.push(l);
                            t
                        })
                    })
                    .collect();
            }
            acc
        }
    };
    tuples
        .into_iter()
        .enumerate()
        .map(|(config_id, values)| {
            let mut config = design.base_config.clone();
            for (f, &v) in design.factors.iter().zip(&values) {
                config.set_field(&f.name, v)?;
            }
            config.validate()?;
            Ok(PlannedConfig {
                config_id,
                factor_values: values,
                config,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub run_id: usize,
    pub config_id: usize,
    pub replicate: usize,
    pub seed: u64,
    pub factor_values: Vec<f64>,
}

/// Configuration × replicate list; `run_id = config_id · replicates + replicate`.
pub fn plan_runs(design: &ExperimentDesign) -> Result<Vec<(RunInfo, SimConfig)>> {
    let configs = enumerate(design)?;
    let mut runs = Vec::with_capacity(configs.len() * design.replicates);
    for pc in configs {
        for rep in 0..design.replicates {
            let run_id = pc.config_id * design.replicates + rep;
            let seed = seeding::derive_seed(design.master_seed, run_id as u64);
            let mut config = pc.config.clone();
            config.set_seed(seed);
            runs.push((
                RunInfo {
                    run_id,
                    config_id: pc.config_id,
                    replicate: rep,
                    seed,
                    factor_values: pc.factor_values.clone(),
                },
                config,
            ));
        }
    }
    Ok(runs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub software: String,
    pub version: String,
    pub design: ExperimentDesign,
    pub columns: Vec<String>,
    pub rows: usize,
    pub runs: Vec<RunInfo>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub dataset: Dataset,
    pub manifest: Manifest,
}

/// Run every configuration × replicate on `parallelism` workers and
/// concatenate the traces ordered by `(run_id, tick)`.
pub fn run_sweep(design: &ExperimentDesign, parallelism: usize) -> Result<SweepOutput> {
    if parallelism == 0 {
        return Err(Error::config("parallelism", "must be >= 1"));
    }
    let runs = plan_runs(design)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::config("parallelism", e.to_string()))?;
    let traces: Vec<Result<abm::Trace>> = pool.install(|| {
        runs.par_iter()
            .map(|(info, cfg)| {
                abm::run(cfg.clone(), design.ticks).map_err(|e| Error::RunFailed {
                    run_id: info.run_id,
                    source: Box::new(e),
                })
            })
            .collect()
    });

    let columns = design.columns();
    let mut data = Vec::with_capacity(runs.len() * design.ticks as usize * columns.len());
    for ((info, _), trace) in runs.iter().zip(traces) {
        for row in trace?.rows {
            data.push(info.run_id as f64);
            data.push(row.tick as f64);
            data.extend_from_slice(&info.factor_values);
            data.extend(row.compartments().iter().map(|&c| c as f64));
        }
    }
    let dataset = Dataset::from_flat(columns.clone(), data)?;
    let manifest = Manifest {
        software: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        design: design.clone(),
        columns,
        rows: dataset.n_rows(),
        runs: runs.into_iter().map(|(info, _)| info).collect(),
    };
    Ok(SweepOutput { dataset, manifest })
}
