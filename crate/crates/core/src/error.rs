use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("field degree {0} outside supported range 3..=16")]
    DegreeOutOfRange(u32),
    #[error("value {value} is not an element of GF(2^{degree})")]
    ElementOutOfRange { value: u32, degree: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("discrete logarithm of zero is undefined")]
    ZeroLog,
    #[error("bit column has length {got}, expected {expected}")]
    BitLength { expected: usize, got: usize },
}

/// Reasons a syndrome could not be turned into a unique error pattern.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("error locator has degree {degree}, expected weight {weight}")]
    DegreeMismatch { degree: usize, weight: usize },
    #[error("error locator has {roots} roots in the field but degree {degree}")]
    RootCount { roots: usize, degree: usize },
    #[error("decoded position {position} lies outside the shortened length {length}")]
    OutsideShortened { position: usize, length: usize },
    #[error("weight {weight} exceeds correction capability {t}")]
    WeightTooLarge { weight: usize, t: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BchError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("correction capability t={0} outside supported range 1..=8")]
    UnsupportedT(usize),
    #[error("t={t} requires t < 2^(b-1), but b={degree}")]
    CapabilityTooLarge { t: usize, degree: u32 },
    #[error("code length {length} must be in 1..={max}")]
    Length { length: usize, max: usize },
    #[error("syndrome has {got} bits, expected {expected}")]
    SyndromeLength { expected: usize, got: usize },
    #[error("direct root finding supports degree <= 4, got {0}")]
    DirectDegree(usize),
    #[error(transparent)]
    Decode(#[from] DecodeFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("left degree must be at least 2, got {0}")]
    LeftDegree(usize),
    #[error("need N*ell >= M and ell <= M (N={n}, M={m}, ell={ell})")]
    Shape { n: usize, m: usize, ell: usize },
    #[error("edge repair did not converge after {retries} reseeds")]
    RepairFailed { retries: u32 },
    #[error("({right}, {left}) is not an edge")]
    NotAnEdge { right: usize, left: usize },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("graph file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error(transparent)]
    Bch(#[from] BchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("need K >= 1 and N > K (N={n}, K={k})")]
    ItemCounts { n: usize, k: usize },
    #[error("beta must exceed 1, got {0}")]
    Beta(f64),
    #[error("left degree must be at least 2, got {0}")]
    LeftDegree(usize),
    #[error("test vector has length {got}, expected {expected}")]
    TestVectorLength { expected: usize, got: usize },
    #[error("signature has {have} columns but a right node has degree {need}")]
    SignatureTooShort { have: usize, need: usize },
    #[error("item index {index} out of range for N={n}")]
    ItemOutOfRange { index: usize, n: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("observations at right node {node} are inconsistent with the recovered items")]
    Inconsistent { node: usize },
}
