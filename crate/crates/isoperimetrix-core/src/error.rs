//! Error type shared by every module in the crate.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in a computation.
///
/// Variants mirror the failure modes of the individual operations; the
/// payloads carry a witness (an offending abscissa, a message) where one
/// exists.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Quadrature failed to reach the requested tolerance.
    NonConvergent { detail: String },
    /// Partial sums grew past the overflow guard.
    DivergentIntegral { detail: String },
    /// Root target lies outside the supplied bracket.
    NotBracketed { y: f64, lo: f64, hi: f64 },
    /// Scan interval is empty or inverted.
    EmptyInterval,
    /// Density integral diverges; the measure cannot be normalized.
    NonNormalizable { detail: String },
    /// Malformed grid input (non-increasing knots, too few rows, ...).
    BadGrid { detail: String },
    /// No admissible Luxemburg scale below the overflow guard.
    NotFinite,
    /// Operation requires a Young function and the check failed.
    NotYoung { witness: f64 },
    /// A monotonicity predicate required by a transfer map fails.
    PredicateFails { predicate: String, witness: f64 },
    /// One of the head/tail integrability conditions fails.
    IntegrabilityFails { detail: String },
    /// Function required to be monotone is not.
    NotMonotone { witness: f64 },
    /// Profile required to be concave is not.
    NotConcave { witness: f64 },
    /// Profile required to be symmetric about 1/2 is not.
    NotSymmetric { witness: f64 },
    /// Profile does not vanish at the endpoints.
    NotVanishing { endpoint: f64 },
    /// Control rate of the profile is unbounded.
    InfiniteControlRate,
    /// q outside the supported range of the bridge.
    QOutOfRange { q: f64 },
    /// alpha below the closed-form constant gate.
    AlphaTooSmall { alpha: f64, required: f64 },
    /// Parameters outside an operation's domain.
    InvalidParameter { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergent { detail } => write!(f, "quadrature did not converge: {detail}"),
            Error::DivergentIntegral { detail } => write!(f, "divergent integral: {detail}"),
            Error::NotBracketed { y, lo, hi } => {
                write!(f, "target {y} not bracketed by f on [{lo}, {hi}]")
            }
            Error::EmptyInterval => write!(f, "empty scan interval"),
            Error::NonNormalizable { detail } => write!(f, "measure not normalizable: {detail}"),
            Error::BadGrid { detail } => write!(f, "bad grid: {detail}"),
            Error::NotFinite => write!(f, "no admissible Luxemburg scale (norm not finite)"),
            Error::NotYoung { witness } => {
                write!(f, "function is not Young (convexity fails near t = {witness})")
            }
            Error::PredicateFails { predicate, witness } => {
                write!(f, "predicate `{predicate}` fails at t = {witness}")
            }
            Error::IntegrabilityFails { detail } => write!(f, "integrability fails: {detail}"),
            Error::NotMonotone { witness } => write!(f, "not monotone near t = {witness}"),
            Error::NotConcave { witness } => write!(f, "not concave near t = {witness}"),
            Error::NotSymmetric { witness } => {
                write!(f, "not symmetric about 1/2 near t = {witness}")
            }
            Error::NotVanishing { endpoint } => {
                write!(f, "profile does not vanish at t = {endpoint}")
            }
            Error::InfiniteControlRate => write!(f, "control rate is unbounded"),
            Error::QOutOfRange { q } => write!(f, "q = {q} outside [1, 2]"),
            Error::AlphaTooSmall { alpha, required } => {
                write!(f, "alpha = {alpha} too small (needs alpha > {required})")
            }
            Error::InvalidParameter { detail } => write!(f, "invalid parameter: {detail}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
