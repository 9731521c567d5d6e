use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or inconsistent input (lengths, digits, ranges, shapes).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must live on the same `(n, d)` space do not.
    #[error("shape mismatch: expected (n={expected_n}, d={expected_d}), got (n={n}, d={d})")]
    ShapeMismatch { expected_n: usize, expected_d: usize, n: usize, d: usize },

    /// `|R| == N_R`, so the witness prefactor is undefined.
    #[error("degenerate pair selection: |R| = {size} equals N_R = {n_r}")]
    DegenerateSelection { size: usize, n_r: usize },

    /// Two pairs of the selection lie in the same orbit of a bipartition swap.
    #[error("pairs {first} and {second} are swap images of each other under bipartition {gamma}")]
    OverlappingPairs { first: String, second: String, gamma: String },

    /// No set of support pairs reaches every bipartition.
    #[error("no pair selection covers every bipartition: {0}")]
    Coverage(String),

    /// The witness does not detect the target state, so there is no threshold.
    #[error("witness does not detect the target (value {0} at p = 1)")]
    NotDetecting(f64),

    /// The witness changes sign more than once along the noise line.
    #[error("witness is not monotone along the noise line: {0}")]
    NonMonotone(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by bad user input as opposed to analysis outcomes.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::ShapeMismatch { .. } | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
