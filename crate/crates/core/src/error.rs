use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown atomic proposition `{0}`")]
    UnknownAtom(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("complementation capacity exceeded: {states} states > cap {cap}")]
    CapacityExceeded { states: usize, cap: usize },

    #[error("construction exceeded its budget of {budget} states")]
    StateBudgetExceeded { budget: usize },

    #[error("operation cancelled")]
    Cancelled,

    #[error("Kripke structure has no initial state")]
    EmptyInitialSet,

    #[error("Kripke structure is not left-total: state `{0}` has no successor")]
    NotLeftTotal(String),

    #[error("invalid Kripke structure: {0}")]
    InvalidKripke(String),

    #[error("choice violation for `{formula}`: {reason}")]
    ChoiceViolation { formula: String, reason: String },

    #[error("maximal cut violated: no maximal countermodel for `{formula}`")]
    MaximalCutViolated { formula: String },

    #[error("HOA error: {0}")]
    Hoa(String),

    #[error("operation limited to {limit} propositions, alphabet has {actual}")]
    TooManyProps { limit: usize, actual: usize },
}
