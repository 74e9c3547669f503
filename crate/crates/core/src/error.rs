use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {name} = {value:e} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("Re ε has no zero crossing: ωₚ²/ε∞ = {ratio:e} does not exceed Γ² = {gamma_sq:e}")]
    NoCrossing { ratio: f64, gamma_sq: f64 },

    #[error("refractive index is zero; Kerr factors are undefined")]
    DegenerateIndex,

    #[error("ω_k(t_start) is not asymptotic: |Im ω|/|ω| = {ratio:e} > {limit:e}")]
    NonAsymptoticStart { ratio: f64, limit: f64 },

    #[error("step size underflow at t = {t:e} s (h = {h:e} s)")]
    StepFailure { t: f64, h: f64 },

    #[error("step budget of {max_steps} exhausted at t = {t:e} s")]
    MaxSteps { max_steps: usize, t: f64 },

    #[error("state became non-finite at t = {t:e} s")]
    NonFinite { t: f64 },

    #[error("scenario `{scenario}` cannot be built on {medium}")]
    ScenarioMismatch {
        scenario: &'static str,
        medium: &'static str,
    },

    #[error("spectrum has no finite rows")]
    EmptySpectrum,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid `{key}`: {constraint}")]
    Validation { key: String, constraint: String },

    #[error("malformed data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(key: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            constraint: constraint.into(),
        }
    }

    /// Short machine-readable tag for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::NoCrossing { .. } => "no_crossing",
            Error::DegenerateIndex => "degenerate_index",
            Error::NonAsymptoticStart { .. } => "non_asymptotic_start",
            Error::StepFailure { .. } => "step_failure",
            Error::MaxSteps { .. } => "max_steps",
            Error::NonFinite { .. } => "non_finite",
            Error::ScenarioMismatch { .. } => "scenario_mismatch",
            Error::EmptySpectrum => "empty_spectrum",
            Error::Parse { .. } => "parse",
            Error::Validation { .. } => "validation",
            Error::Format(_) => "format",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
