use thiserror::Error;

/// Errors raised by the numerical and exact engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("the zero polynomial is not allowed")]
    ZeroPolynomial,

    #[error("polynomial has degree {degree}, need at least {required}")]
    DegreeTooLow { degree: usize, required: usize },

    #[error("non-finite coefficient")]
    NonFiniteCoefficient,

    #[error("root iteration did not converge (best residual {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("point outside the Böttcher domain: |z| = {modulus} <= {radius}")]
    OutsideBottcherDomain { modulus: f64, radius: f64 },

    #[error(
        "no repelling fixed point (max |p'| = {best_multiplier}); \
         seed from a repelling 2-cycle of p(p(z)) - z instead"
    )]
    NoRepellingFixedPoint { best_multiplier: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("guard violation at {step}: {value} is not below log r* = {bound}")]
    GuardViolation {
        step: String,
        value: String,
        bound: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
