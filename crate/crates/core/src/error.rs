use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("element index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("group order {order} exceeds the table cap {cap} (set TRIALGEBRA_MAX_GROUP_ORDER to raise it)")]
    OrderCap { order: usize, cap: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("group is abelian-only input but is nonabelian")]
    Nonabelian,
    #[error("triality check failed: {0}")]
    TrialityFailed(String),
    #[error("loop is not power-associative: {0}")]
    NotPowerAssociative(String),
    #[error("not a {p}-group: {reason}")]
    NotPGroup { p: u32, reason: String },
    #[error("filtration did not stabilize within {0} steps")]
    FiltrationUnstable(usize),
    #[error("filtration property violated: {0}")]
    FiltrationViolation(String),
    #[error("lie triality invariants violated: {0}")]
    LieTriality(String),
    #[error("subspace is not closed under the product: {0}")]
    NotClosed(String),
    #[error("{what} {value} exceeds the cap {cap} (set {env} to raise it)")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
        env: &'static str,
    },
    #[error("no certified triality structure found: {0}")]
    NoTriality(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Exit code class: 2 for input/format problems, 1 for everything mathematical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format(_) | Error::Io(_) | Error::Json(_) | Error::IndexOutOfRange { .. } => 2,
            Error::InvalidGroup(_) | Error::InvalidLoop(_) => 2,
            _ => 1,
        }
    }
}
