use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{name}` has nilpotency order {order}; orders must be at least 1")]
    BadNilpotency { name: String, order: u32 },
    #[error("too many odd generators ({0}); at most 128 are supported")]
    TooManyOdd(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("operands live over different generator tables")]
    TableMismatch,
    #[error("exponential of an element with nonzero constant term {0}")]
    NotNilpotent(String),
    #[error("relabel of `{from}` to `{to}`: {reason}")]
    BadRelabel {
        from: String,
        to: String,
        reason: String,
    },
    #[error("`{0}` is not an odd generator")]
    NotOdd(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("K is singular (det K = 0)")]
    SingularK,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("element is not expressible in the collected subring; offending monomial {0}")]
    NotCollectible(String),
    #[error("unsupported slice pullback: {0}")]
    UnsupportedSlice(String),
    #[error("class has degree-0 part {0}, which is not a positive integer")]
    BadRank(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("Im(tau) must be positive, got {0}")]
    Domain(f64),
    #[error("basis index {index} out of range 0..{b}")]
    BasisIndex { index: usize, b: u32 },
    #[error("invalid wave-function data: {0}")]
    InvalidData(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BerryError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("Gram matrix at w = {w} is not positive definite (min pivot {pivot:e}); try at least {suggested} samples")]
    Undersampled {
        w: String,
        pivot: f64,
        suggested: usize,
    },
    #[error("invalid numerical setup: {0}")]
    Setup(String),
}
