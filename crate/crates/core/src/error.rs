use std::path::PathBuf;

use thiserror::Error;

use crate::eigen::SpectrumReport;

pub type Result<T, E = PdmError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PdmError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge on [{lo}, {hi}]")]
    QuadratureFailure { lo: f64, hi: f64 },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("inverse iteration did not converge for level {level}")]
    EigenvectorFailure { level: usize },

    #[error("no analytic spectrum available: {0}")]
    UnsupportedAnalyticSpectrum(String),

    #[error("no printed closed form for {0}")]
    NoPrintedForm(String),

    #[error("non-finite potential {value} at grid node x = {x}")]
    GridDomain { x: f64, value: f64 },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error(
        "eigenvalues not converged after {doublings} grid doublings (last change {last_change:e})"
    )]
    NotConverged {
        doublings: usize,
        last_change: f64,
        report: Box<SpectrumReport>,
    },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error at {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl PdmError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        PdmError::InvalidInput(msg.into())
    }
}

pub(crate) fn ensure_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(PdmError::invalid(format!("{name} must be finite, got {v}")))
    }
}
