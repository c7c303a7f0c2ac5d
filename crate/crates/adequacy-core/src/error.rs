use thiserror::Error;

/// Crate-wide error type. Variants are grouped roughly by layer: scalar/field
/// arithmetic, matrices, group machinery, representations, and the search /
/// budget failures that the CLI maps to its "resource" exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field GF({p}^{s}) exceeds supported size (need s <= {max_s} and p^s <= {max_q})")]
    FieldTooLarge { p: u64, s: u32, max_s: u32, max_q: u64 },
    #[error("scalars belong to different fields")]
    FieldMismatch,
    #[error("zero scalar has no inverse")]
    ZeroInverse,
    #[error("{0} does not divide the multiplicative group order {1}")]
    NoSuchRoot(u64, u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("incompatible group elements: {0}")]
    Incompatible(String),
    #[error("group enumeration exceeded cap of {cap} elements")]
    CapExceeded { cap: u64 },
    #[error("K is not a subgroup of G (element not found in G)")]
    NotSubgroup,
    #[error("subgroup is not normal: conjugate of {what} escapes")]
    NotNormal { what: String },
    #[error("generator images do not extend to a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("search exhausted without certificate: {0}")]
    SearchExhausted(String),
    #[error("cache file malformed: {0}")]
    CacheFormat(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by size/budget caps rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::BudgetExceeded(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
