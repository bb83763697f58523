use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is not squarefree")]
    NotSquarefree(String),
    #[error("factor of degree {degree} exceeds the factorization cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("polynomials {0} and {1} share a root")]
    NotCoprime(String, String),
    #[error("operands live in different number fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("substitution is not primitive")]
    NonPrimitive,
    #[error("word length {len} exceeds the guard of {guard} letters")]
    LengthGuard { len: u128, guard: usize },
    #[error("empty patch")]
    EmptyPatch,
    #[error("right context has {got} letters, need at least {need}")]
    ContextTooShort { need: usize, got: usize },
    #[error("collar radius {radius} is smaller than the required {need}")]
    CollarTooSmall { radius: usize, need: usize },
    #[error("order {n} is below the minimal order {n0}")]
    OrderTooSmall { n: u32, n0: u32 },
    #[error("Anderson-Putnam graph is disconnected")]
    Disconnected,
    #[error("patch {0} is not a legal factor")]
    IllegalPatch(String),
    #[error("control search reached rank {achieved} of {k} with patches up to length {max_len}")]
    ControlSearch {
        achieved: usize,
        k: usize,
        max_len: usize,
    },
    #[error("singular system: {0}")]
    Singular(String),
    #[error("regularity check failed: {0}")]
    Regularity(String),
    #[error("no exponent n <= {n_max} clears the denominators {denominators}")]
    Decomposition { n_max: u32, denominators: String },
    #[error("need at least {need} window scales, got {got}")]
    TooFewScales { need: usize, got: usize },
    #[error("invalid tile lengths: {0}")]
    InvalidLengths(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}
