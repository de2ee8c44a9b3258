use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::is_structural`] separates malformed input from data that is well formed but
/// violates one of the order axioms; the CLI maps the two classes to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("element {0} has no star partner")]
    MissingPartner(String),
    #[error("degenerate pair ({0}, {1}): an element and its star")]
    DegeneratePair(String, String),
    #[error("good position violated at ({0}, {1}): two small corners, neither empty")]
    GoodPosition(String, String),
    #[error("order axiom violated: {axiom} at {witness:?}")]
    Axiom { axiom: String, witness: Vec<String> },
    #[error("comparability fails: {0} and {1} cross")]
    Crossing(String, String),
    #[error("closure contradiction: both {0} and its star are forced")]
    ClosureContradiction(String),
    #[error("stage contradiction at {stage}: both {element} and its star are forced; trace: {trace:?}")]
    StageContradiction { stage: String, element: String, trace: Vec<String> },
    #[error("inconsistent membership oracle at {0}")]
    InconsistentOracle(String),
    #[error("oracle is not realizable: {0}")]
    UnrealizableOracle(String),
    #[error("invalid ultrafilter: {0}")]
    InvalidUltrafilter(String),
    #[error("cubing is disconnected; the fragment is too small")]
    Disconnected,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("duplicate splittings {0} and {1} are isomorphic; use multiplicities instead")]
    DuplicateSplitting(String, String),
    #[error("unknown letter {0}")]
    UnknownLetter(String),
    #[error("invalid splitting {0}: {1}")]
    InvalidSplitting(String, String),
    #[error("corner status unknown within bound at ({0}, {1})")]
    UnknownCorner(String, String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for malformed or unusable input, false for axiom-level failures of valid input.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Error::GoodPosition(..)
                | Error::Axiom { .. }
                | Error::Crossing(..)
                | Error::ClosureContradiction(_)
                | Error::StageContradiction { .. }
                | Error::DuplicateSplitting(..)
                | Error::UnknownCorner(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
