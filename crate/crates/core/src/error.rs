use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter violates its positivity (or range) invariant.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Argument outside the domain of a function.
    #[error("domain error in {function}: {reason} (got {value})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    /// The unit-strength phase is zero, so no finite bound on α exists.
    #[error("degenerate signal: phase at unit strength is {phase:e} for lambda = {lambda:e} m")]
    DegenerateSignal { lambda: f64, phase: f64 },

    #[error("invalid range [{min:e}, {max:e}]: {reason}")]
    Range {
        min: f64,
        max: f64,
        reason: &'static str,
    },

    #[error("model not supported here: {0}")]
    UnsupportedModel(&'static str),
}
