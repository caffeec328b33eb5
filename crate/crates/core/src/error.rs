use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight not in block: {0}")]
    NotInBlock(String),
    #[error("sign is not allowed for this weight")]
    SignIllegal,
    #[error("this weight needs a sign")]
    SignRequired,
    #[error("window has {count} weights, cap is {cap}")]
    WindowTooLarge { count: usize, cap: usize },
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("no symbol at position {0}")]
    NoSymbol(String),
    #[error("move undefined: {0}")]
    MoveUndefined(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("K^{{lambda,nu}} with lambda = 0 is not available for osp")]
    OspLambdaZero,
    #[error("weights are equal")]
    EqualWeights,
    #[error("weight is typical")]
    Typical,
    #[error("weights have different sizes")]
    SizeMismatch,
    #[error("vertices have different central characters")]
    MixedCharacters,
}

pub type Result<T> = std::result::Result<T, Error>;
