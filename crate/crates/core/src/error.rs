use thiserror::Error;

use crate::ledger::{Instrument, Sector};

/// Errors raised by the simulator and its tooling.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("missing stock: {agent} has no {instrument:?} entry")]
    MissingStock { agent: String, instrument: Instrument },

    #[error("non-finite stock {value} for {instrument:?} in sector {sector:?}")]
    NonFiniteStock {
        sector: Sector,
        instrument: Instrument,
        value: f64,
    },

    #[error("stock-flow audit failed at period {period}: max residual {max_residual:e} exceeds {threshold:e}")]
    AuditFailed {
        period: u32,
        max_residual: f64,
        threshold: f64,
    },

    #[error("accounting impossibility for bank {bank}: negative advances {advances}")]
    NegativeAdvances { bank: usize, advances: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("series too short for {op}: need at least {needed} points, got {got}")]
    SeriesTooShort {
        op: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("plotting error: {0}")]
    Plot(String),
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;

impl SimError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        SimError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
