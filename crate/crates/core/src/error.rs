use thiserror::Error;

use crate::exprlang::ExprError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The ratio `(p(0) - p(u)) / u` has several separated local maxima, or
    /// its maximum is not attained in the interior of the scan.
    #[error("pressure law is not unimodal: {0}")]
    NotUnimodal(String),

    /// The law has no positive gain `(p(0) - p(u)) / u` anywhere.
    #[error("degenerate pressure law: {0}")]
    DegenerateLaw(String),

    #[error("standing assumption violated at u = {witness}: {message}")]
    AssumptionViolated { witness: f64, message: String },

    #[error("{what}: no convergence on bracket [{lo}, {hi}], residual {residual:e}")]
    NoConvergence {
        what: String,
        lo: f64,
        hi: f64,
        residual: f64,
    },

    #[error("quadrature on [{a}, {b}] failed: {message}")]
    QuadratureFailure { a: f64, b: f64, message: String },

    #[error("infeasible grid: {0}")]
    InfeasibleGrid(String),
}

impl Error {
    /// Attaches a context label to a `NoConvergence` error, leaving other
    /// variants unchanged.
    pub fn in_context(self, ctx: &str) -> Self {
        match self {
            Error::NoConvergence {
                what,
                lo,
                hi,
                residual,
            } => Error::NoConvergence {
                what: format!("{ctx}: {what}"),
                lo,
                hi,
                residual,
            },
            other => other,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Expr(ExprError::Syntax { .. }) => "SyntaxError",
            Error::Expr(ExprError::UnknownIdentifier { .. }) => "UnknownIdentifier",
            Error::Expr(ExprError::Domain { .. }) => "DomainError",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NotUnimodal(_) => "NotUnimodal",
            Error::DegenerateLaw(_) => "DegenerateLaw",
            Error::AssumptionViolated { .. } => "AssumptionViolated",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::InfeasibleGrid(_) => "InfeasibleGrid",
        }
    }
}
