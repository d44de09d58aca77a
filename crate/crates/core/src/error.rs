use thiserror::Error;

/// Errors raised by the arithmetic substrate and the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}: zero input")]
    ZeroInput(&'static str),
    #[error("{0}: input must be non-constant")]
    ConstantInput(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is a rational function, expected a polynomial")]
    NotPolynomial,
    #[error("level must be at least {min}, got {got}")]
    InvalidLevel { min: usize, got: usize },
    #[error("level {got} exceeds the supported ceiling {max}")]
    LevelTooHigh { max: usize, got: usize },
    #[error("critical orbit vanishes at level {n}: the critical point is periodic")]
    PeriodicCriticalOrbit { n: usize },
    #[error("map is isotrivial; this operation needs h(gamma - c) > 0")]
    Isotrivial,
    #[error("map is not isotrivial; this operation needs h(gamma - c) = 0")]
    NotIsotrivial,
    #[error("c * phi(c) = 0: the associated curve is singular")]
    SingularCurve,
    #[error("operation needs h(gamma) = h(c)")]
    UnequalHeights,
    #[error("critical orbit is not known to be infinite")]
    PostCriticallyFinite,
    #[error("operation needs a map of positive height")]
    ZeroHeight,
    #[error("level certification requires a stability certificate")]
    MissingStabilityCertificate,
    #[error("index accumulation requires certified stability")]
    Unstable,
}

pub type Result<T> = std::result::Result<T, Error>;
