//! Fixed-step RK4 integration of the SEIRV system.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CompartmentState, EpidemicParams};

/// Undershoot below zero that is treated as roundoff and clamped.
pub const UNDERSHOOT_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_DT: f64 = 0.01;

pub const CSV_HEADER: &str = "t,susceptible,exposed,infected,recovered,vaccinated,total";

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Derivatives {
    pub ds: f64,
    pub de: f64,
    pub di: f64,
    pub dr: f64,
    pub dv: f64,
}

impl Derivatives {
    pub fn as_array(&self) -> [f64; 5] {
        [self.ds, self.de, self.di, self.dr, self.dv]
    }

    pub fn sum(&self) -> f64 {
        self.ds + self.de + self.di + self.dr + self.dv
    }
}

/// Right-hand side of the SEIRV system at `state`.
pub fn derivatives(state: &CompartmentState, p: &EpidemicParams) -> Derivatives {
    let CompartmentState { s, e, i, r, v, .. } = *state;
    let infection = p.effective_contact_rate() * s * i;
    Derivatives {
        ds: p.lambda_recruit - infection - p.tau_fail * s - p.rho_vaccinate * s
            + p.phi_wane * r
            + p.xi_vax_wane * v,
        de: infection - (p.tau_fail + p.theta_incubate) * e,
        di: p.theta_incubate * e - (p.tau_fail + p.omega_kill + p.nu_recover) * i,
        dr: p.nu_recover * i - (p.tau_fail + p.phi_wane) * r,
        dv: p.rho_vaccinate * s - (p.tau_fail + p.xi_vax_wane) * v,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeRun {
    pub params: EpidemicParams,
    pub init: CompartmentState,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub steps: usize,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl OdeRun {
    pub fn new(params: EpidemicParams, init: CompartmentState, dt: f64, steps: usize) -> Self {
        Self {
            params,
            init,
            dt,
            steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.ensure_valid()?;
        self.init.check_non_negative()?;
        if !self.init.t.is_finite() {
            return Err(Error::config("init.t", "must be finite"));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::config(
                "dt",
                format!("must be > 0 and finite, got {}", self.dt),
            ));
        }
        if self.steps == 0 {
            return Err(Error::config("steps", "must be >= 1"));
        }
        if !(self.dt * self.steps as f64).is_finite() {
            return Err(Error::config("steps", "dt * steps overflows"));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let run: Self = serde_json::from_str(&text)?;
        run.validate()?;
        Ok(run)
    }
}

/// Time-ordered compartment rows; `rows[0]` is the initial state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub rows: Vec<CompartmentState>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&CompartmentState> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                row.t,
                row.s,
                row.e,
                row.i,
                row.r,
                row.v,
                row.total()
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

/// Classic fourth-order Runge-Kutta with fixed step `run.dt`.
///
/// Emits the initial state plus one row per step. A compartment that dips
/// below zero by at most [`UNDERSHOOT_TOLERANCE`] is clamped to 0; anything
/// deeper is reported as [`Error::StepTooLarge`].
pub fn integrate_rk4(run: &OdeRun) -> Result<Trace> {
    run.validate()?;
    let p = &run.params;
    let dt = run.dt;
    let t0 = run.init.t;
    let mut rows = Vec::with_capacity(run.steps + 1);
    rows.push(run.init);
    let mut x = run.init.as_array();

    let f = |x: [f64; 5]| derivatives(&CompartmentState::from_array(x, 0.0), p).as_array();
    let axpy = |x: [f64; 5], a: f64, k: [f64; 5]| std::array::from_fn(|j| x[j] + a * k[j]);

    for step in 1..=run.steps {
        let k1 = f(x);
        let k2 = f(axpy(x, 0.5 * dt, k1));
        let k3 = f(axpy(x, 0.5 * dt, k2));
        let k4 = f(axpy(x, dt, k3));
        for j in 0..5 {
            x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t = t0 + step as f64 * dt;
        for (j, xj) in x.iter_mut().enumerate() {
            if *xj < 0.0 {
                if *xj < -UNDERSHOOT_TOLERANCE || !xj.is_finite() {
                    return Err(Error::StepTooLarge {
                        t,
                        compartment: CompartmentState::NAMES[j],
                        value: *xj,
                    });
                }
                *xj = 0.0;
            } else if !xj.is_finite() {
                return Err(Error::StepTooLarge {
                    t,
                    compartment: CompartmentState::NAMES[j],
                    value: *xj,
                });
            }
        }
        rows.push(CompartmentState::from_array(x, t));
    }
    Ok(Trace { rows })
}
