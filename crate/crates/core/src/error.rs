use thiserror::Error;

/// Errors raised by the algebra, automata and conversion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: String, found: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` has rank {expected} but was given {found} children")]
    RankMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid position `{0}`")]
    InvalidPosition(String),

    #[error("automaton is not nice: {0}")]
    NotNice(String),

    #[error("homomorphism is not linear and non-deleting: {0}")]
    NotLinearNonDeleting(String),

    #[error("homomorphism is deleting: {0}")]
    Deleting(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unsupported carrier: {0}")]
    UnsupportedCarrier(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
