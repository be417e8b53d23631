use alloc::string::String;
use core::fmt;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A series or iteration hit its term cap before the termination rule
    /// fired. Carries the partial sum and the last term magnitude.
    Nonconvergence {
        context: String,
        partial: f64,
        last_term: f64,
        terms: usize,
    },
    /// An adaptive quadrature failed to reach its target accuracy.
    QuadratureFailure { context: String, achieved: f64 },
    /// The unscaled result would overflow the floating range.
    Overflow(String),
    /// A simulation configuration violates its invariants.
    Config(String),
    /// A single-step angular increment of magnitude ≥ π was observed, so
    /// the continuous lifting of the winding angle is not trustworthy.
    LiftingViolation { step: usize, increment: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Nonconvergence {
                context,
                partial,
                last_term,
                terms,
            } => write!(
                f,
                "series for {context} did not converge within {terms} terms \
                 (partial sum {partial:e}, last term {last_term:e})"
            ),
            Error::QuadratureFailure { context, achieved } => {
                write!(f, "quadrature for {context} stalled at error {achieved:e}")
            }
            Error::Overflow(msg) => write!(f, "overflow: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::LiftingViolation { step, increment } => write!(
                f,
                "winding-angle lifting violated at step {step}: increment {increment}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
