use thiserror::Error;

use crate::timescale::ApproachSide;

/// Position and expectation attached to a parse failure.
///
/// `line` and `column` are 1-based; a failure at end of input points one
/// column past the last character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "syntax error at {}:{}: expected {}, found {}",
            self.line, self.column, self.expected, self.found
        )
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("point {t} is not in the time scale")]
    PointNotInScale { t: f64 },

    #[error("point {t} is not in the domain of the {operator} ({domain})")]
    PointOutsideDomain {
        t: f64,
        operator: &'static str,
        domain: &'static str,
    },

    #[error("point {t} is not {side:?}-dense; use the scattered-point formula")]
    SideNotDense { t: f64, side: ApproachSide },

    #[error("only {found} of {wanted} approach points exist near {t}")]
    InsufficientPoints { t: f64, wanted: usize, found: usize },

    #[error("no pairs t-h, t+h of scale points exist near {t}")]
    NoSymmetricNeighborhood { t: f64 },

    #[error("negative base {x} is not allowed for order {order}")]
    NegativeBaseForGeneralOrder { x: f64, order: String },

    #[error("sample {index} of the limit sequence is not finite")]
    NonFiniteSample { index: usize },

    #[error("limit at {t} did not converge (best {value}, err {err_est}): {reason}")]
    LimitDidNotConverge {
        t: f64,
        value: f64,
        err_est: f64,
        reason: String,
    },

    #[error("one-sided limits at {t} disagree: left {left}, right {right}")]
    SidedLimitsDisagree { t: f64, left: f64, right: f64 },

    #[error("integration endpoint {t} is not in the time scale")]
    EndpointNotInScale { t: f64 },

    #[error("integration endpoint {t} is outside the two-sided kappa set")]
    EndpointOutsideKappaSet { t: f64 },

    #[error("quadrature on [{a}, {b}] failed: {reason}")]
    QuadratureFailure { a: f64, b: f64, reason: String },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("{0}")]
    Syntax(SyntaxError),

    #[error("invalid scale description: {0}")]
    Validation(String),

    #[error("cannot evaluate {node} at t = {t}")]
    EvalDomain { node: String, t: f64 },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PointNotInScale { .. } => "PointNotInScale",
            Error::PointOutsideDomain { .. } => "PointOutsideDomain",
            Error::SideNotDense { .. } => "SideNotDense",
            Error::InsufficientPoints { .. } => "InsufficientPoints",
            Error::NoSymmetricNeighborhood { .. } => "NoSymmetricNeighborhood",
            Error::NegativeBaseForGeneralOrder { .. } => "NegativeBaseForGeneralOrder",
            Error::NonFiniteSample { .. } => "NonFiniteSample",
            Error::LimitDidNotConverge { .. } => "LimitDidNotConverge",
            Error::SidedLimitsDisagree { .. } => "SidedLimitsDisagree",
            Error::EndpointNotInScale { .. } => "EndpointNotInScale",
            Error::EndpointOutsideKappaSet { .. } => "EndpointOutsideKappaSet",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::Syntax(_) => "SyntaxError",
            Error::Validation(_) => "ValidationError",
            Error::EvalDomain { .. } => "EvalDomainError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
