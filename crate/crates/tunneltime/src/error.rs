use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by failure class so the CLI can map each class to a
/// distinct exit status.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical precondition was violated (non-positive index, angle out of
    /// range, energy outside the supported regime, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The semiclassical time is undefined: the probe lies outside the stop
    /// band of the periodic stack (or the stack has no period).
    #[error("outside stop band: {0}")]
    OutsideStopBand(String),

    /// A phase-derived delay was requested at a point where |t| is too small
    /// for the phase to be meaningful.
    #[error("unreliable delay: |t| = {amplitude:.3e} at the probe frequency")]
    UnreliableDelay { amplitude: f64 },

    /// Dip fit did not converge within the iteration budget. Carries the
    /// best parameters found so far.
    #[error("dip fit did not converge after {iterations} iterations (best center {center_fs:.3} fs, visibility {visibility:.3})")]
    FitDidNotConverge {
        center_fs: f64,
        width_fs: f64,
        visibility: f64,
        iterations: usize,
    },

    /// The scan contains no usable dip (e.g. flat data); the fitted center is
    /// unreliable.
    #[error("no reliable dip in scan (visibility {visibility:.3e})")]
    DipNotFound { visibility: f64 },

    /// A stack definition file could not be parsed.
    #[error("stack file {path}:{line}: {message}")]
    StackFile {
        path: String,
        line: usize,
        message: String,
    },

    /// A scenario file could not be loaded or failed validation.
    #[error("scenario: {0}")]
    Scenario(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
