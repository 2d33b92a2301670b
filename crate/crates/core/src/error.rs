use thiserror::Error;

/// Errors raised by automaton operations, deciders and gadget compilers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not complete")]
    NotComplete,
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("automaton is not partially ordered")]
    NotPartiallyOrdered,
    #[error("automaton is not self-loop-deterministic and partially ordered")]
    NotRpoNfa,
    #[error("automaton is not unary")]
    NotUnary,
    #[error("automaton accepts no word")]
    EmptyLanguage,
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("exploration budget of {0} macro-states exceeded")]
    BudgetExceeded(usize),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("invalid DAG: {0}")]
    InvalidDag(String),
    #[error("invalid Turing machine: {0}")]
    InvalidMachine(String),
    #[error("wrong input shape: {0}")]
    WrongShape(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
