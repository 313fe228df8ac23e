use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0:?} is not irreducible")]
    NotIrreducible(Vec<u32>),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("symbol {value} is not an element of a field of order {q}")]
    InvalidElement { value: u32, q: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a subspace: {0}")]
    NotASubspace(String),
    #[error("rows {row_a} and {row_b} are not symplectically orthogonal")]
    NotSelfOrthogonal { row_a: usize, row_b: usize },
    #[error("invalid maximal self-dual space: {0}")]
    BadLagrangian(String),
    #[error("invalid coset representatives: {0}")]
    BadReps(String),
    #[error("coset distance of a space with itself is undefined")]
    EqualSpaces,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("{what} needs {needed}, limit is {limit}")]
    TooLarge { what: String, needed: String, limit: String },
    #[error("evaluation points are not distinct")]
    DuplicatePoints,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("invalid code pair: {0}")]
    BadPair(String),
    #[error("codes are not nested: {0}")]
    NotNested(String),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("operation needs a prime field, got q = {0}")]
    NotPrimeField(u32),
    #[error("joint +1 eigenspace of the stabilizer is empty")]
    EmptyEigenspace,
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::NotIrreducible(_) => "not_irreducible",
            Error::InvalidField(_) => "invalid_field",
            Error::InvalidElement { .. } => "invalid_element",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotASubspace(_) => "not_a_subspace",
            Error::NotSelfOrthogonal { .. } => "not_self_orthogonal",
            Error::BadLagrangian(_) => "bad_lagrangian",
            Error::BadReps(_) => "bad_reps",
            Error::EqualSpaces => "equal_spaces",
            Error::OutOfRange(_) => "out_of_range",
            Error::TooLarge { .. } => "too_large",
            Error::DuplicatePoints => "duplicate_points",
            Error::BadParams(_) => "bad_params",
            Error::BadPair(_) => "bad_pair",
            Error::NotNested(_) => "not_nested",
            Error::DomainError(_) => "domain_error",
            Error::NotPrimeField(_) => "not_prime_field",
            Error::EmptyEigenspace => "empty_eigenspace",
        }
    }

    pub fn is_too_large(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
