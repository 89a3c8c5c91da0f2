//! Worm-epidemic workbench for wireless sensor networks.
//!
//! The pipeline runs in four stages:
//!
//! 1. simulate SEIRV dynamics, either deterministically ([`ode`]) or with
//!    agents on a bounded grid ([`abm`]);
//! 2. sweep run configurations into a synthetic dataset ([`sweep`]);
//! 3. clean, profile and transform the dataset ([`dataprep`]);
//! 4. benchmark regressors at predicting compartment counts ([`regress`]),
//!    and render the results ([`report`]).
//!
//! All randomness is seeded; see [`seeding`].

pub mod abm;
pub mod dataprep;
pub mod error;
pub mod ode;
pub mod params;
pub mod regress;
pub mod report;
pub mod seeding;
pub mod sweep;

pub use error::{Error, Result};
pub use params::{CompartmentState, EpidemicParams};
