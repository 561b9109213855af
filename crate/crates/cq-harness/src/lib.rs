//! Support library for the `cq` command-line runner: independent
//! high-accuracy convolution oracles, convergence studies, named signal and
//! symbol registries, flat key=value configuration, and CSV/graymap
//! artifact writers.
//!
//! The numerics live in the `cq-engine` crate; everything here either
//! checks the engine against quadrature references or plumbs its results
//! into reproducible artifacts (identical configuration always yields
//! bit-identical CSV bytes).

pub mod config;
pub mod convergence;
pub mod io;
pub mod oracle;
pub mod registry;
pub mod scatter;

use cq_engine::multistep::CqError;
use cq_engine::scattering::ScatteringError;
use thiserror::Error;

/// Top-level harness error.  [`HarnessError::category`] yields the short
/// machine-parsable category printed by the CLI on failure.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{detail}")]
    Config { detail: String },
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
    #[error(transparent)]
    Engine(#[from] CqError),
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// A convergence study hit a NaN or identically-zero error level, so
    /// no meaningful observed order exists.
    #[error("{detail}")]
    Report { detail: String },
}

impl HarnessError {
    pub fn category(&self) -> &'static str {
        match self {
            HarnessError::Config { .. } => "config",
            HarnessError::Oracle(_) => "oracle",
            HarnessError::Engine(_) => "quadrature",
            HarnessError::Scattering(ScatteringError::Geometry { .. }) => "geometry",
            HarnessError::Scattering(_) => "scattering",
            HarnessError::Io(_) => "io",
            HarnessError::Report { .. } => "report",
        }
    }
}

/// Convenience constructor for configuration errors.
pub fn config_error(detail: impl Into<String>) -> HarnessError {
    HarnessError::Config {
        detail: detail.into(),
    }
}
