use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Witness values are widened to `f64` so the error type does not depend on
/// the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {value} is outside {interval} ({context})")]
    Domain { context: String, value: f64, interval: String },
    #[error("parameter error: {0}")]
    Param(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("closure error: {op}({a}, {b}) maps to {image}, outside the codomain {codomain}")]
    Closure { op: &'static str, a: f64, b: f64, image: f64, codomain: String },
    #[error("division by the additive neutral: f({b}) = 0")]
    DivisionByNeutral { b: f64 },
    #[error("weight error: {0}")]
    Weight(String),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("entropy undefined: {stage} argument {argument} is outside {interval}")]
    EntropyDomain { stage: EntropyStage, argument: f64, interval: String },
    #[error("singular input: b1 * b2 = -1 for ({b1}, {b2})")]
    SingularInput { b1: f64, b2: f64 },
    #[error("model error: {0}")]
    Model(String),
    #[error("limit error: {0}")]
    Limit(String),
}

/// Which evaluation inside the generalized entropy left its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyStage {
    /// `f(ln p_i)` for some positive probability.
    Inner,
    /// `f^-1(-sum p_i f(ln p_i))`.
    Outer,
}

impl std::fmt::Display for EntropyStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EntropyStage::Inner => f.write_str("inner"),
            EntropyStage::Outer => f.write_str("outer"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
