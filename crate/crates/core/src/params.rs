//! SEIRV parameterization and compartment state shared by both engines.
//!
//! Flows between compartments:
//!
//! ```text
//! dS/dt = λ − βSIσπr₀² − τS − ρS + φR + ξV
//! dE/dt = βSIσπr₀² − (τ + θ)E
//! dI/dt = θE − (τ + ω + ν)I
//! dR/dt = νI − (τ + φ)R
//! dV/dt = ρS − (τ + ξ)V
//! ```
//!
//! ρ moves susceptible nodes into the vaccinated class and ξ returns them.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The eleven rate/geometry symbols of the SEIRV system.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpidemicParams {
    /// λ, sensors added per tick.
    pub lambda_recruit: f64,
    /// β, contact rate of infection, 1/(node·tick).
    pub beta_contact: f64,
    /// τ, natural failure (hardware/software) rate, 1/tick.
    pub tau_fail: f64,
    /// ω, crash rate caused by the worm, 1/tick.
    pub omega_kill: f64,
    /// θ, E → I rate, 1/tick.
    pub theta_incubate: f64,
    /// ν, I → R rate, 1/tick.
    pub nu_recover: f64,
    /// φ, R → S rate, 1/tick.
    pub phi_wane: f64,
    /// ρ, S → V rate, 1/tick.
    pub rho_vaccinate: f64,
    /// ξ, V → S rate, 1/tick.
    pub xi_vax_wane: f64,
    /// σ, node density, nodes/area.
    pub sigma_density: f64,
    /// r₀, transmission range in patch-lengths.
    pub r0_range: f64,
}

/// One offending field found by [`EpidemicParams::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: &'static str,
    pub problem: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Negative,
    NotANumber,
    Infinite,
    /// βσπr₀² overflows even though each factor is finite.
    ContactOverflow,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.problem {
            ViolationKind::Negative => "negative",
            ViolationKind::NotANumber => "NaN",
            ViolationKind::Infinite => "infinite",
            ViolationKind::ContactOverflow => "effective contact rate overflows",
        };
        write!(f, "{} is {}", self.field, what)
    }
}

impl EpidemicParams {
    pub const FIELD_NAMES: [&'static str; 11] = [
        "lambda_recruit",
        "beta_contact",
        "tau_fail",
        "omega_kill",
        "theta_incubate",
        "nu_recover",
        "phi_wane",
        "rho_vaccinate",
        "xi_vax_wane",
        "sigma_density",
        "r0_range",
    ];

    pub fn fields(&self) -> [(&'static str, f64); 11] {
        [
            ("lambda_recruit", self.lambda_recruit),
            ("beta_contact", self.beta_contact),
            ("tau_fail", self.tau_fail),
            ("omega_kill", self.omega_kill),
            ("theta_incubate", self.theta_incubate),
            ("nu_recover", self.nu_recover),
            ("phi_wane", self.phi_wane),
            ("rho_vaccinate", self.rho_vaccinate),
            ("xi_vax_wane", self.xi_vax_wane),
            ("sigma_density", self.sigma_density),
            ("r0_range", self.r0_range),
        ]
    }

    /// Mutable access by field name; `None` for names outside [`Self::FIELD_NAMES`].
    pub fn field_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "lambda_recruit" => &mut self.lambda_recruit,
            "beta_contact" => &mut self.beta_contact,
            "tau_fail" => &mut self.tau_fail,
            "omega_kill" => &mut self.omega_kill,
            "theta_incubate" => &mut self.theta_incubate,
            "nu_recover" => &mut self.nu_recover,
            "phi_wane" => &mut self.phi_wane,
            "rho_vaccinate" => &mut self.rho_vaccinate,
            "xi_vax_wane" => &mut self.xi_vax_wane,
            "sigma_density" => &mut self.sigma_density,
            "r0_range" => &mut self.r0_range,
            _ => return None,
        })
    }

    /// Every field that is negative, NaN or infinite. An empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (field, value) in self.fields() {
            let problem = if value.is_nan() {
                ViolationKind::NotANumber
            } else if value.is_infinite() {
                ViolationKind::Infinite
            } else if value < 0.0 {
                ViolationKind::Negative
            } else {
                continue;
            };
            out.push(Violation { field, problem });
        }
        if out.is_empty() && !self.effective_contact_rate().is_finite() {
            out.push(Violation {
                field: "beta_contact",
                problem: ViolationKind::ContactOverflow,
            });
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }

    /// βσπr₀², the per-(S·I) infection coefficient.
    pub fn effective_contact_rate(&self) -> f64 {
        self.beta_contact * self.sigma_density * PI * self.r0_range * self.r0_range
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.ensure_valid()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }
}

/// Compartment occupancy at time `t`. Real-valued for the ODE engine.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompartmentState {
    pub s: f64,
    pub e: f64,
    pub i: f64,
    pub r: f64,
    pub v: f64,
    #[serde(default)]
    pub t: f64,
}

impl CompartmentState {
    pub const NAMES: [&'static str; 5] = [
        "susceptible",
        "exposed",
        "infected",
        "recovered",
        "vaccinated",
    ];

    pub fn new(s: f64, e: f64, i: f64, r: f64, v: f64) -> Self {
        Self {
            s,
            e,
            i,
            r,
            v,
            t: 0.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.s + self.e + self.i + self.r + self.v
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.s, self.e, self.i, self.r, self.v]
    }

    pub fn from_array(x: [f64; 5], t: f64) -> Self {
        Self {
            s: x[0],
            e: x[1],
            i: x[2],
            r: x[3],
            v: x[4],
            t,
        }
    }

    /// `Err` names the first compartment that is negative or not finite.
    pub fn check_non_negative(&self) -> Result<()> {
        for (name, x) in Self::NAMES.iter().zip(self.as_array()) {
            if !x.is_finite() || x < 0.0 {
                return Err(Error::config(
                    *name,
                    format!("must be finite and >= 0, got {x}"),
                ));
            }
        }
        Ok(())
    }
}
