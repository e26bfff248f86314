use thiserror::Error;

use crate::complex::{Edge, Triangle, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty facet list")]
    Empty,
    #[error("invalid token '{0}' (expected a positive integer)")]
    BadToken(String),
    #[error("facet list has {0} integers, not a multiple of 3")]
    CountNotMultipleOfThree(usize),
    #[error("facet entry has {0} vertices, expected 3")]
    NotTriple(usize),
    #[error("malformed JSON facet list: {0}")]
    Json(String),
    #[error("facet {0:?} repeats a vertex")]
    RepeatedVertex(Triangle),
    #[error("duplicate facet {0:?}")]
    DuplicateFacet(Triangle),
    #[error("facet {facet:?} has a vertex outside 1..={n}")]
    VertexOutOfRange { facet: Triangle, n: usize },
    #[error("vertex {0} occurs in no facet (labels must be exactly 1..n)")]
    UnusedVertex(Vertex),
    #[error("vertex {0} is not in the complex")]
    VertexNotInComplex(Vertex),
    #[error("{0:?} is not a facet")]
    NotAFacet(Triangle),
    #[error("not a permutation of the vertex set")]
    NotAPermutation,
    #[error("gluing map is not a bijection between the two facets")]
    BadIdentification,
    #[error("gluing creates the duplicate facet {0:?}")]
    GluingCreatesDuplicate(Triangle),
    #[error("gluing puts edge {0:?} into more than two facets")]
    GluingNotPseudomanifold(Edge),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChirotopeError {
    #[error("tuple {tuple:?} is not valid for n={n}, r={r}")]
    InvalidTuple { tuple: Vec<u32>, n: usize, r: usize },
    #[error("rank {r} is not supported for n={n}")]
    BadRank { n: usize, r: usize },
    #[error("expected {expected} signs, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("invalid sign character '{0}'")]
    BadSign(char),
    #[error("malformed chirotope header: {0}")]
    BadHeader(String),
    #[error("points are not in general position: basis {0:?} has zero determinant")]
    Degenerate(Vec<u32>),
    #[error("points have inconsistent dimensions")]
    DimensionMismatch,
    #[error("integer overflow in exact determinant")]
    Overflow,
    #[error("pair support {support:?} has {} elements, expected {expected}", support.len())]
    SupportSize { support: Vec<u32>, expected: usize },
    #[error("chirotope has n={chirotope}, complex has {complex} vertices")]
    GroundSetMismatch { chirotope: usize, complex: usize },
}

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Chirotope(#[from] ChirotopeError),
    #[error("GP instance overlaps: sigma {sigma:?}, quadruple {quad:?}")]
    Overlap { sigma: Vec<u32>, quad: Vec<u32> },
    #[error("model assigns {got} variables, expected {expected}")]
    PartialModel { expected: usize, got: usize },
    #[error("malformed DIMACS: {0}")]
    Dimacs(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Chirotope(#[from] ChirotopeError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("solver '{solver}' returned a model violating clause {clause}")]
    BadModel { solver: String, clause: usize },
    #[error("certificate failed verification: {0}")]
    CertificateRejected(String),
    #[error("backend '{0}' is not available in this build")]
    Unavailable(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
