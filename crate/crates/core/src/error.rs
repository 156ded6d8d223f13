use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid smoothing: {0}")]
    InvalidSmoothing(String),
    #[error("arcs ({0},{1}) and ({2},{3}) cross")]
    CrossingMatching(usize, usize, usize, usize),
    #[error("boundary orientation does not alternate at point {0}")]
    NonAlternating(usize),
    #[error("cobordism boundaries do not match")]
    BoundaryMismatch,
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("d∘d ≠ 0 leaving degree {0}")]
    NotAComplex(i32),
    #[error("inhomogeneous differential in degree {degree} at cell ({row},{col})")]
    InhomogeneousDifferential { degree: i32, row: usize, col: usize },
    #[error("no such loop")]
    NoSuchLoop,
    #[error("entry is not an invertible identity")]
    NotInvertible,
    #[error("not a perturbed double complex: {0}")]
    InvalidPdc(String),
    #[error("operator arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("operator orientation mismatch: {0}")]
    OrientationMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad edge incidence: {0}")]
    BadIncidence(String),
    #[error("diagram is not alternating at edge {0}")]
    NotAlternating(i64),
    #[error("diagram is split")]
    Split,
    #[error("diagram has open edges")]
    NotClosed,
    #[error("complex is not fully reduced over the empty boundary")]
    NotFullyReduced,
    #[error("computed boundary order does not match declared open edges")]
    BoundaryOrder,
    #[error("diagram is not planar: edges {0:?} cannot be closed up")]
    NonPlanar(Vec<i64>),
}

pub type Result<T> = std::result::Result<T, Error>;
