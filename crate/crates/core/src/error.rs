use alloc::string::String;

/// Broad class of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: malformed data, invalid parameters, violated preconditions.
    Input,
    /// A configured size or memory cap was hit.
    Resource,
    /// The computation could not certify an answer.
    Uncertified,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("field order {p}^{k} exceeds 2^16")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("modulus is not an irreducible monic polynomial of degree {0}")]
    BadModulus(u32),
    #[error("field element {value} out of range for a field of order {q}")]
    ElementOutOfRange { value: i64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("group enumeration exceeded the cap of {0} elements")]
    GroupCap(usize),
    #[error("working memory exceeded the cap of {0} bytes")]
    MemoryCap(usize),
    #[error("generator images do not define a representation (edge {element}*g{generator})")]
    NotHomomorphism { element: usize, generator: usize },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("subspace is not invariant under the group")]
    NotInvariant,
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("unknown catalog entry `{0}`")]
    UnknownGroup(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid simple-module list: {0}")]
    InvalidSimples(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("uncertified: {0}")]
    Uncertified(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::GroupCap(_) | Error::MemoryCap(_) => ErrorKind::Resource,
            Error::Uncertified(_) => ErrorKind::Uncertified,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
