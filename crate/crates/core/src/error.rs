use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombError {
    #[error("a partition needs at least one part")]
    EmptyPartition,
    #[error("partition parts must be positive")]
    ZeroPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimsError {
    #[error("n_max must be at least 2, got {0}")]
    NMaxTooSmall(usize),
    #[error("symbolic mode supports 2 <= n_max <= 8, got {0}")]
    SymbolicRange(usize),
    #[error("unknown operad `{0}`")]
    UnknownOperad(String),
    #[error("operad `{name}` has no dimension for arity {arity} (explicit values cover up to {available})")]
    OutOfRange { name: String, arity: usize, available: usize },
    #[error("arity must be positive")]
    ZeroArity,
    #[error("invalid polynomial: {0}")]
    Poly(String),
    #[error("operad config line {line}: {message}")]
    Config { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("unknown vertex pattern `{0}`")]
    UnknownPattern(String),
    #[error(transparent)]
    Dims(#[from] DimsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("shuffle condition violated at vertex `{vertex}`: child minima {minima:?} are not increasing")]
    ShuffleCondition { vertex: String, minima: Vec<u32> },
    #[error("leaf labels must be exactly 1..{arity}, got {labels:?}")]
    Labels { arity: usize, labels: Vec<u32> },
    #[error("symbol `{symbol}` used with arities {first} and {second}")]
    SymbolArity { symbol: String, first: usize, second: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("equation reduces to zero and cannot be oriented")]
    Unorientable,
    #[error("only binary generators are supported here, `{0}` is not binary")]
    NonBinary(String),
    #[error("rule file line {line}: {source}")]
    RuleFile {
        line: usize,
        #[source]
        source: Box<ShuffleError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpnetError {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}
