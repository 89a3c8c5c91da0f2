use std::path::PathBuf;

use thiserror::Error;

use crate::params::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error(
        "step too large: {compartment} reached {value:e} at t={t} (tolerance -1e-9); reduce dt"
    )]
    StepTooLarge {
        t: f64,
        compartment: &'static str,
        value: f64,
    },

    #[error("invalid config field `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },

    #[error("aligned design needs equal level counts, got {0:?}")]
    AlignmentMismatch(Vec<(String, usize)>),

    #[error("run {run_id} failed: {source}")]
    RunFailed {
        run_id: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("schema mismatch: missing {missing:?}, unexpected {unexpected:?}")]
    SchemaMismatch {
        missing: Vec<String>,
        unexpected: Vec<String>,
    },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error("column `{0}` is constant")]
    DegenerateColumn(String),

    #[error("split leaves an empty side ({train} train / {val} validation rows)")]
    EmptySplit { train: usize, val: usize },

    #[error("least-squares system is rank deficient; try ridge with alpha > 0")]
    SingularSystem,

    #[error(
        "coordinate descent did not converge in {sweeps} sweeps (last max change {last_change:e})"
    )]
    NonConvergence { sweeps: usize, last_change: f64 },

    #[error("k = {k} exceeds the {n} training rows")]
    KTooLarge { k: usize, n: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid hyperparameter `{name}`: {reason}")]
    InvalidHyperparameter { name: &'static str, reason: String },

    #[error("fit of {spec} failed on fold {fold}: {source}")]
    FitFailed {
        spec: String,
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed csv: {0}")]
    Csv(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable class, used by the command-line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                "missing_file"
            }
            Error::Io { .. } => "io",
            Error::SchemaMismatch { .. }
            | Error::UnknownColumn(_)
            | Error::Csv(_)
            | Error::Json(_) => "schema_mismatch",
            Error::RunFailed { source, .. } | Error::FitFailed { source, .. } => source.kind(),
            Error::InvalidParams(_)
            | Error::ConfigInvalid { .. }
            | Error::AlignmentMismatch(_)
            | Error::InvalidHyperparameter { .. } => "invalid_config",
            _ => "runtime",
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
