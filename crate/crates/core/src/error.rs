use thiserror::Error;

/// Failures of the jet engine itself, before a chart point is known.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("jet order {0} exceeds the supported maximum {max}", max = crate::jets::MAX_ORDER)]
    OrderTooLarge(usize),
    #[error("derivative ({i},{k}) requested from a jet of order {order}")]
    IndexBeyondOrder { i: usize, k: usize, order: usize },
    #[error("singular jet evaluation: {0}")]
    Singular(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular evaluation ({what}) at chart {chart} point ({u}, {v})")]
    SingularEvaluation {
        what: String,
        chart: usize,
        u: f64,
        v: f64,
    },
    #[error(
        "rank-deficient immersion at chart {chart} point ({u}, {v}): sqrt(det g) = {sqrt_det}"
    )]
    RankDeficient {
        chart: usize,
        u: f64,
        v: f64,
        sqrt_det: f64,
    },
    #[error("point ({u}, {v}) is not Lagrangian: defect {defect:e} exceeds {limit:e}")]
    NotLagrangian {
        u: f64,
        v: f64,
        defect: f64,
        limit: f64,
    },
    #[error("point ({u}, {v}) lies outside chart {chart}")]
    OutsideChart { chart: usize, u: f64, v: f64 },
    #[error("jet error: {0}")]
    Jet(#[from] JetError),
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
    #[error("linear map is not symplectic: max |M^T Omega M - Omega| = {0:e}")]
    NotSymplectic(f64),
    #[error("operation requires a closed surface: {0}")]
    NotClosed(String),
    #[error("spec parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for failures that come from evaluating the geometry (as opposed to
    /// malformed input).
    pub fn is_evaluation_failure(&self) -> bool {
        matches!(
            self,
            Error::SingularEvaluation { .. }
                | Error::RankDeficient { .. }
                | Error::NotLagrangian { .. }
                | Error::Jet(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
