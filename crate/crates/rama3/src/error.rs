//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A result could not be produced at the requested precision
    /// (cancellation, underflow, or a failed double-precision self-check).
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// A tabulated value was requested for an argument outside the table.
    #[error("not available: {0}")]
    NotAvailable(String),

    /// A root search found no admissible root.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// A root search found more than one admissible root.
    #[error("ambiguous: {0}")]
    Ambiguous(String),

    /// A value the mathematics guarantees to exist could not be produced.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// Two candidate readings of a printed formula disagree numerically;
    /// both candidates are reported so the discrepancy can be inspected.
    #[error(
        "transcription ambiguity in {context}: printed reading gives {printed}, \
         swapped reading gives {swapped}, reference value is {reference}"
    )]
    TranscriptionAmbiguity {
        context: String,
        printed: String,
        swapped: String,
        reference: String,
    },

    /// End-to-end certification of a derived formula failed; the residual
    /// exponent says how badly.
    #[error("certification failed for {context}: residual ~ 2^{residual_exp} exceeds 2^{tolerance_exp}")]
    Certification {
        context: String,
        residual_exp: i64,
        tolerance_exp: i64,
    },

    /// A series presented for inversion is not consistent with any modulus.
    #[error("inconsistent series: {0}")]
    InconsistentSeries(String),

    /// Catalog text failed to parse.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A catalog entry parsed but violates a structural invariant.
    #[error("catalog entry `{id}`: {msg}")]
    InvalidEntry { id: String, msg: String },

    /// I/O while reading or writing catalog files.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precision(msg: impl Into<String>) -> Self {
        Error::PrecisionLoss(msg.into())
    }
}
