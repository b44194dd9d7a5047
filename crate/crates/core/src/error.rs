use core::fmt;

/// Errors shared by every fallible routine in this crate.
///
/// All variants are plain data so the type stays `Copy` and usable without
/// allocation; callers that need context beyond the payload should wrap it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// An argument fell outside the mathematical domain of a function.
    Domain {
        /// Name of the offending routine.
        func: &'static str,
        /// The rejected argument.
        arg: f64,
    },
    /// An argument was so large the result would overflow `f64`.
    Overflow { func: &'static str, arg: f64 },
    /// A log-space value could not be exponentiated within `f64` range.
    ExpRange {
        /// Natural log of the value that was about to be exponentiated.
        log_value: f64,
    },
    /// A derivative order outside the supported band was requested.
    InvalidOrder {
        order: usize,
        min: usize,
        max: usize,
    },
    /// The routine's hypotheses on `rho` (or another parameter) do not hold.
    Hypothesis(&'static str),
    /// Root bracketing failed: no sign change of the derivative in `[lo, hi]`.
    BracketNotFound { lo: f64, hi: f64 },
    /// Adaptive quadrature exhausted its segment budget before converging.
    QuadratureNonconvergence {
        /// Error estimate at the point of giving up.
        error_estimate: f64,
        /// The tolerance that was requested.
        tolerance: f64,
    },
    /// Matrix construction or rescaling rejected its input.
    InvalidMatrix(&'static str),
    /// Weight-vector construction rejected its input.
    InvalidWeights(&'static str),
    /// Accuracy-policy construction rejected its input.
    InvalidAccuracy(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { func, arg } => {
                write!(f, "{func}: argument {arg} is outside the domain")
            }
            Error::Overflow { func, arg } => {
                write!(f, "{func}: argument {arg} would overflow")
            }
            Error::ExpRange { log_value } => {
                write!(
                    f,
                    "result with natural log {log_value} is outside the f64 exponent range"
                )
            }
            Error::InvalidOrder { order, min, max } => {
                write!(f, "derivative order {order} outside supported range [{min}, {max}]")
            }
            Error::Hypothesis(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::BracketNotFound { lo, hi } => {
                write!(f, "no sign change bracketed in [{lo}, {hi}]")
            }
            Error::QuadratureNonconvergence {
                error_estimate,
                tolerance,
            } => write!(
                f,
                "quadrature stalled at error estimate {error_estimate} (tolerance {tolerance})"
            ),
            Error::InvalidMatrix(msg) => write!(f, "invalid matrix: {msg}"),
            Error::InvalidWeights(msg) => write!(f, "invalid weights: {msg}"),
            Error::InvalidAccuracy(msg) => write!(f, "invalid accuracy policy: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
