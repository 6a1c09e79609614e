use thiserror::Error;

pub type Result<T, E = FuzzyError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("coordinate {index} is not finite ({value})")]
    NonFiniteCoordinate { index: usize, value: f64 },

    #[error("membership value {0} is outside [0, 1]")]
    MembershipOutOfRange(f64),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("membership family is empty")]
    EmptyFamily,

    #[error("parameter window [{low}, {high}] is empty or degenerate")]
    EmptyWindow { low: f64, high: f64 },

    #[error("parameter window [{low}, {high}] is not contained in the family domain")]
    WindowOutsideDomain { low: f64, high: f64 },

    #[error("resolution must be at least 2, got {0}")]
    InvalidResolution(usize),

    #[error("operator `{0}` is not linear")]
    NotLinear(String),

    #[error("fuzzy rate is not finite")]
    RateNotFinite,

    #[error("witness residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("method `{method}` does not apply: {reason}")]
    MethodNotApplicable {
        method: &'static str,
        reason: &'static str,
    },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("member {0} is not part of the family")]
    UnknownMember(String),

    #[error("invalid `{field}`: {message}")]
    Parse { field: String, message: String },
}

impl FuzzyError {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        FuzzyError::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
