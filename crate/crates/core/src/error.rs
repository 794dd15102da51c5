//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong when building states, profiles, effects or
/// running measurements. Payloads are reported as `f64` regardless of the
/// scalar type the computation ran at.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid range: q_min = {q_min} must be strictly below q_max = {q_max}")]
    InvalidRange { q_min: f64, q_max: f64 },

    #[error("sample count {found} does not match grid point count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("grid too small for this state: norm deviates from 1 by {norm_error:.3e}")]
    GridTooSmall { norm_error: f64 },

    #[error("basis truncation keeps only {retained:.6} of the unit norm")]
    TruncationLoss { retained: f64 },

    #[error("operands live in different representations (grid or basis mismatch)")]
    RepresentationMismatch,

    #[error("cannot normalize a state of vanishing norm")]
    ZeroNorm,

    #[error("{what} = {value} is outside {bounds}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        bounds: &'static str,
    },

    #[error("config parse error: {0}")]
    ParseError(String),

    #[error("level index {index} lies beyond the truncation N_max = {n_max}")]
    IndexBeyondTruncation { index: usize, n_max: usize },

    #[error("requested outcome has zero probability in this state")]
    ZeroProbabilityOutcome,

    #[error("detection is certain on this state's support; the no-detection branch is empty")]
    DetectionCertain,

    #[error("conditional probabilities require a selection without the no-registration outcome")]
    SelectionContainsQ0,

    #[error("bins leave grid node q = {q} uncovered")]
    BinGapDetected { q: f64 },

    #[error("no-registration value {value} collides with eigenvalue E_{n}")]
    NoRegistrationOnSpectrum { value: f64, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
