//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by the state algebra, optical elements, protocol
/// pipelines, and the Fock oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// Two states were combined whose mode layouts differ.
    #[error("mode layouts differ between operands")]
    LayoutMismatch,

    #[error("unknown field mode `{0}`")]
    UnknownMode(String),

    #[error("unknown photon `{0}`")]
    UnknownPhoton(String),

    #[error("path `{path}` is not an allowed path of photon `{photon}`")]
    UnknownPath { photon: String, path: String },

    #[error("operation needs two distinct field modes, got `{0}` twice")]
    DegenerateModePair(String),

    /// A circuit element found the photon somewhere it should not be.
    /// Signals a mis-ordered circuit.
    #[error("photon `{photon}` is not on path `{path}` in every branch")]
    PhotonNotOnPath { photon: String, path: String },

    /// Zero-norm state: the post-selection branch this state came from has
    /// probability zero.
    #[error("state has zero norm (impossible post-selection branch)")]
    ZeroNorm,

    #[error("requested measurement outcome `{0}` has probability zero")]
    ImpossibleOutcome(String),

    #[error("operator has zero trace")]
    ZeroTrace,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A single-mode-only diagnostic (Wigner evaluation) was handed a state
    /// with more than one field mode or with photons still attached.
    #[error("expected a single field mode and no photons, found {0}")]
    NotSingleMode(String),

    /// The state does not factor into (photon part) x (field part), so the
    /// photons cannot be discarded exactly.
    #[error("state does not factor into a photon part times a field part")]
    NotAProduct,

    #[error(
        "Fock truncation rule violated: |alpha|^2 + 6|alpha| + 10 = {needed:.1} exceeds n_max = {n_max}"
    )]
    Truncation { needed: f64, n_max: usize },

    #[error("dimension mismatch in Fock tensor operation")]
    DimensionMismatch,

    #[error("invalid {what}: {detail}")]
    InvalidInput { what: &'static str, detail: String },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidInput {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
