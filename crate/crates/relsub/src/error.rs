use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol '{0}' is not in the alphabet")]
    SymbolNotInAlphabet(char),

    #[error("alphabet must not be empty")]
    EmptyAlphabet,

    #[error("alphabet symbols must be distinct: '{0}' repeats")]
    DuplicateSymbol(char),

    #[error("operands are defined over different alphabets")]
    AlphabetMismatch,

    #[error("monoid would have {0} elements; refusing to build it")]
    MonoidTooLarge(u128),

    #[error("element index {index} is out of range for a monoid of size {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("learning premise violated: {0}")]
    PremiseViolation(String),

    #[error("nonterminal '{0}' is not defined in the grammar")]
    UnknownNonterminal(String),

    #[error("nonterminal '{0}' derives no terminal string")]
    Unproductive(String),

    #[error("nonterminal '{0}' is unreachable from the start symbol")]
    Unreachable(String),

    #[error("grammar is not trim: {0}")]
    NotTrim(String),

    #[error("grammar is not in the expected normal form: {0}")]
    NotNormalForm(String),

    #[error("sample string '{0}' is outside the target language")]
    InvalidSample(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
