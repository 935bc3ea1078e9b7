use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty permutation")]
    Empty,
    #[error("malformed token {0:?}")]
    MalformedToken(String),
    #[error("duplicate value {0}")]
    Duplicate(i64),
    #[error("value {value} out of range 1..={size}")]
    OutOfRange { value: i64, size: usize },
    #[error("values are not pairwise distinct")]
    NotDistinct,
    #[error("permutation is not separable")]
    NotSeparable,
    #[error("prime node in a tree that must be separable")]
    PrimeNode,
    #[error("arity mismatch: label of size {label} for {blocks} blocks")]
    ArityMismatch { label: usize, blocks: usize },
    #[error("malformed tree: {0}")]
    MalformedTree(String),
    #[error("input of size {size} exceeds the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("dangling provenance at node {node}")]
    DanglingProvenance { node: usize },
}
