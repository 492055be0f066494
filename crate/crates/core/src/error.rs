use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: r = {0}, need at least 3 points")]
    InvalidGrid(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("winding number undefined at sample {index}: {reason}")]
    UndefinedWinding { index: usize, reason: &'static str },

    #[error("invalid superposition: {0}")]
    InvalidSpec(String),

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {limit:e}")]
    NotHermitian { defect: f64, limit: f64 },

    #[error("eigenvalue {index} did not converge within {sweeps} sweeps")]
    Convergence { index: usize, sweeps: usize },

    #[error("eigen decomposition missed its contract: {0}")]
    Accuracy(String),

    #[error("wavelength undefined for winding number m = 0")]
    WavelengthUndefined,

    #[error("classification failed for {} eigenvalue(s): {}", .0.len(), describe_offenders(.0))]
    Classification(Vec<(usize, f64, f64)>),

    #[error("invalid flux configuration: {0}")]
    InvalidConfig(String),
}

fn describe_offenders(offenders: &[(usize, f64, f64)]) -> String {
    offenders
        .iter()
        .map(|(i, numeric, analytic)| format!("#{i} numeric {numeric} vs analytic {analytic}"))
        .collect::<Vec<_>>()
        .join("; ")
}
