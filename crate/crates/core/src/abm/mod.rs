//! Agent-based SEIRV simulation on a bounded 2-D grid.
//!
//! Two modes share one [`World`]:
//!
//! * **widget** mode is driven by percentage and duration controls
//!   (infectiousness, worm duration, exposure duration, ...). Infection is
//!   local: a susceptible node can only be exposed by infected nodes within
//!   `transmission_radius`.
//! * **rate** mode is driven by the eleven explicit SEIRV rates. Each tick is a
//!   mean-field stochastic update: every live node leaves its compartment with
//!   probability `1 − e^(−h)` where `h` is its total outflow hazard, and the
//!   destination is drawn proportionally to the individual rates.

mod spatial;
mod world;

pub use spatial::BinnedIndex;
pub use world::{run, Compartment, NodeAgent, TickCounts, Trace, World, CSV_HEADER};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EpidemicParams;

/// Inclusive patch-coordinate extent of the world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBounds {
    pub x_min: i32,
    pub x_max: i32,
    pub y_min: i32,
    pub y_max: i32,
}

impl GridBounds {
    /// The default experiment world, x ∈ [−13, 13], y ∈ [−12, 12].
    pub const SMALL: GridBounds = GridBounds {
        x_min: -13,
        x_max: 13,
        y_min: -12,
        y_max: 12,
    };

    /// The enlarged world, x, y ∈ [−35, 35].
    pub const LARGE: GridBounds = GridBounds {
        x_min: -35,
        x_max: 35,
        y_min: -35,
        y_max: 35,
    };

    pub fn validate(&self) -> Result<()> {
        if self.x_min >= self.x_max {
            return Err(Error::config("bounds.x_min", "must be < x_max"));
        }
        if self.y_min >= self.y_max {
            return Err(Error::config("bounds.y_min", "must be < y_max"));
        }
        Ok(())
    }

    pub fn contains(&self, (x, y): (f64, f64)) -> bool {
        x >= self.x_min as f64
            && x <= self.x_max as f64
            && y >= self.y_min as f64
            && y <= self.y_max as f64
    }
}

impl Default for GridBounds {
    fn default() -> Self {
        Self::SMALL
    }
}

/// Widget-mode run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WidgetConfig {
    /// Per-contact, per-tick transmission probability in percent.
    pub infectiousness_pct: f64,
    pub worm_duration_ticks: u32,
    pub exposure_duration_ticks: u32,
    pub n_nodes: usize,
    pub chance_recover_pct: f64,
    pub chance_vaccinate_pct: f64,
    pub bounds: GridBounds,
    pub transmission_radius: f64,
    pub initial_infected: usize,
    /// Sensors are fixed unless this is set.
    pub mobility: bool,
    /// `None` disables R → S waning.
    pub immunity_duration_ticks: Option<u32>,
    pub seed: u64,
}

impl Default for WidgetConfig {
    fn default() -> Self {
        Self {
            infectiousness_pct: 60.0,
            worm_duration_ticks: 50,
            exposure_duration_ticks: 50,
            n_nodes: 200,
            chance_recover_pct: 60.0,
            chance_vaccinate_pct: 50.0,
            bounds: GridBounds::SMALL,
            transmission_radius: 3.0,
            initial_infected: 10,
            mobility: false,
            immunity_duration_ticks: None,
            seed: 0,
        }
    }
}

fn check_pct(field: &str, v: f64) -> Result<()> {
    if !(0.0..=100.0).contains(&v) {
        return Err(Error::config(
            field,
            format!("must be within [0, 100], got {v}"),
        ));
    }
    Ok(())
}

fn check_infected(n_nodes: usize, initial_infected: usize) -> Result<()> {
    if n_nodes == 0 {
        return Err(Error::config("n_nodes", "must be >= 1"));
    }
    if initial_infected == 0 {
        return Err(Error::config("initial_infected", "must be >= 1"));
    }
    if initial_infected > n_nodes {
        return Err(Error::config(
            "initial_infected",
            format!("{initial_infected} exceeds n_nodes = {n_nodes}"),
        ));
    }
    Ok(())
}

impl WidgetConfig {
    pub fn validate(&self) -> Result<()> {
        check_pct("infectiousness_pct", self.infectiousness_pct)?;
        check_pct("chance_recover_pct", self.chance_recover_pct)?;
        check_pct("chance_vaccinate_pct", self.chance_vaccinate_pct)?;
        if self.worm_duration_ticks == 0 {
            return Err(Error::config("worm_duration_ticks", "must be >= 1"));
        }
        if self.exposure_duration_ticks == 0 {
            return Err(Error::config("exposure_duration_ticks", "must be >= 1"));
        }
        if self.immunity_duration_ticks == Some(0) {
            return Err(Error::config(
                "immunity_duration_ticks",
                "must be >= 1 or null",
            ));
        }
        if !(self.transmission_radius > 0.0 && self.transmission_radius.is_finite()) {
            return Err(Error::config(
                "transmission_radius",
                "must be > 0 and finite",
            ));
        }
        self.bounds.validate()?;
        check_infected(self.n_nodes, self.initial_infected)
    }
}

/// Rate-mode run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateConfig {
    pub params: EpidemicParams,
    pub n_nodes: usize,
    pub initial_infected: usize,
    #[serde(default)]
    pub bounds: GridBounds,
    #[serde(default)]
    pub seed: u64,
}

impl RateConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.ensure_valid()?;
        self.bounds.validate()?;
        check_infected(self.n_nodes, self.initial_infected)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Widget,
    Rate,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "widget" => Ok(Mode::Widget),
            "rate" => Ok(Mode::Rate),
            other => Err(Error::config(
                "mode",
                format!("expected widget or rate, got `{other}`"),
            )),
        }
    }
}

/// Either run configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum SimConfig {
    Widget(WidgetConfig),
    Rate(RateConfig),
}

impl SimConfig {
    pub fn mode(&self) -> Mode {
        match self {
            SimConfig::Widget(_) => Mode::Widget,
            SimConfig::Rate(_) => Mode::Rate,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SimConfig::Widget(c) => c.validate(),
            SimConfig::Rate(c) => c.validate(),
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            SimConfig::Widget(c) => c.seed,
            SimConfig::Rate(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            SimConfig::Widget(c) => c.seed = seed,
            SimConfig::Rate(c) => c.seed = seed,
        }
    }

    pub fn n_nodes(&self) -> usize {
        match self {
            SimConfig::Widget(c) => c.n_nodes,
            SimConfig::Rate(c) => c.n_nodes,
        }
    }

    /// Parse a JSON document whose shape is fixed by `mode`.
    pub fn from_json_value(mode: Mode, value: serde_json::Value) -> Result<Self> {
        let cfg = match mode {
            Mode::Widget => SimConfig::Widget(serde_json::from_value(value)?),
            Mode::Rate => SimConfig::Rate(serde_json::from_value(value)?),
        };
        Ok(cfg)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            SimConfig::Widget(c) => serde_json::to_value(c),
            SimConfig::Rate(c) => serde_json::to_value(c),
        }
        .expect("config types serialize infallibly")
    }

    pub fn load(mode: Mode, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg = Self::from_json_value(mode, serde_json::from_str(&text)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Set one numeric field by name, as used by parameter sweeps.
    pub fn set_field(&mut self, name: &str, value: f64) -> Result<()> {
        fn as_count(name: &str, v: f64) -> Result<u64> {
            if v.fract() != 0.0 || v < 0.0 || !v.is_finite() {
                return Err(Error::config(
                    name,
                    format!("needs a non-negative integer, got {v}"),
                ));
            }
            Ok(v as u64)
        }
        match self {
            SimConfig::Widget(c) => match name {
                "infectiousness_pct" => c.infectiousness_pct = value,
                "chance_recover_pct" => c.chance_recover_pct = value,
                "chance_vaccinate_pct" => c.chance_vaccinate_pct = value,
                "transmission_radius" => c.transmission_radius = value,
                "worm_duration_ticks" => c.worm_duration_ticks = as_count(name, value)? as u32,
                "exposure_duration_ticks" => {
                    c.exposure_duration_ticks = as_count(name, value)? as u32
                }
                "n_nodes" => c.n_nodes = as_count(name, value)? as usize,
                "initial_infected" => c.initial_infected = as_count(name, value)? as usize,
                "immunity_duration_ticks" => {
                    let n = as_count(name, value)? as u32;
                    c.immunity_duration_ticks = (n > 0).then_some(n);
                }
                _ => return Err(Error::config(name, "not a numeric widget-mode field")),
            },
            SimConfig::Rate(c) => match name {
                "n_nodes" => c.n_nodes = as_count(name, value)? as usize,
                "initial_infected" => c.initial_infected = as_count(name, value)? as usize,
                _ => match c.params.field_mut(name) {
                    Some(slot) => *slot = value,
                    None => return Err(Error::config(name, "not a numeric rate-mode field")),
                },
            },
        }
        Ok(())
    }

    /// Field names accepted by [`SimConfig::set_field`] for `mode`.
    pub fn numeric_fields(mode: Mode) -> Vec<&'static str> {
        match mode {
            Mode::Widget => vec![
                "infectiousness_pct",
                "worm_duration_ticks",
                "exposure_duration_ticks",
                "n_nodes",
                "chance_recover_pct",
                "chance_vaccinate_pct",
                "transmission_radius",
                "initial_infected",
                "immunity_duration_ticks",
            ],
            Mode::Rate => {
                let mut v = vec!["n_nodes", "initial_infected"];
                v.extend(EpidemicParams::FIELD_NAMES);
                v
            }
        }
    }
}

impl From<WidgetConfig> for SimConfig {
    fn from(c: WidgetConfig) -> Self {
        SimConfig::Widget(c)
    }
}

impl From<RateConfig> for SimConfig {
    fn from(c: RateConfig) -> Self {
        SimConfig::Rate(c)
    }
}
