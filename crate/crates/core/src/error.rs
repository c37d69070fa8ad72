use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("at least {required} samples are required, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("samples span more than one frequency ({first} Hz and {other} Hz)")]
    MixedFrequencies { first: f64, other: f64 },

    #[error("all samples share the same incident angle")]
    DegenerateAngles,

    #[error("reflection coefficient is zero, reflection loss is unbounded")]
    PerfectTransmission,

    #[error("observation sweep does not contain the specular angle {specular_deg} deg")]
    MissingSpecularAngle { specular_deg: f64 },

    #[error("pattern does not cover both sides of the surface normal")]
    OneSidedPattern,

    #[error("reflected ({reflected}) plus transmitted ({transmitted}) power exceeds the incident power")]
    OverUnityBudget { reflected: f64, transmitted: f64 },

    #[error("distance {distance_m} m is below the 1 m reference distance")]
    BelowReferenceDistance { distance_m: f64 },

    #[error("every sample sits at the 1 m reference distance, the exponent is undetermined")]
    AllAtReferenceDistance,

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("row {row}: column `{column}` is not a valid value")]
    BadNumeric { row: usize, column: String },

    #[error("row {row}: {reason}")]
    InvariantViolation { row: usize, reason: String },
}

impl Error {
    /// Stable variant name, used by the command line front end in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::MixedFrequencies { .. } => "MixedFrequencies",
            Error::DegenerateAngles => "DegenerateAngles",
            Error::PerfectTransmission => "PerfectTransmission",
            Error::MissingSpecularAngle { .. } => "MissingSpecularAngle",
            Error::OneSidedPattern => "OneSidedPattern",
            Error::OverUnityBudget { .. } => "OverUnityBudget",
            Error::BelowReferenceDistance { .. } => "BelowReferenceDistance",
            Error::AllAtReferenceDistance => "AllAtReferenceDistance",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::FileNotFound(_) => "FileNotFound",
            Error::Io(_) => "Io",
            Error::MissingColumn(_) => "MissingColumn",
            Error::BadNumeric { .. } => "BadNumeric",
            Error::InvariantViolation { .. } => "InvariantViolation",
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
