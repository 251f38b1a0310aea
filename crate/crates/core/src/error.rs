use thiserror::Error;

use crate::rat::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("zero direction vector")]
    ZeroDirection,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("a polyhedral function needs at least one functional")]
    EmptyFunction,

    #[error("halfspace with zero slope")]
    ZeroSlopeHalfspace,

    #[error("facet enumeration budget exceeded: {count} halfspaces (limit {limit})")]
    FacetBudget { count: usize, limit: usize },

    #[error("operation supports dimension at most {max}, got {found}")]
    DimensionTooLarge { max: usize, found: usize },

    #[error("operation requires dimension {expected}, got {found}")]
    UnsupportedDimension { expected: String, found: usize },

    #[error("convex hull is degenerate; interiority of {0} cannot be verified")]
    DegenerateHull(Point),

    #[error("point {0} is not in the interior of the convex hull")]
    NotInHullInterior(Point),

    #[error("query at {0} lies outside the oracle domain")]
    OutsideDomain(Point),

    #[error("unknown oracle {0:?}")]
    UnknownOracle(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polyhedron is not contained in an affine orthant")]
    NotInOrthant,

    #[error("polyhedron is not full-dimensional")]
    NotFullDimensional,

    #[error("slope {0} does not fit in a machine integer")]
    SlopeOverflow(String),

    #[error("skeleton precondition failed: vertex {0} is not covered by any line")]
    UncoveredVertex(Point),

    #[error("skeleton precondition failed: no line is a translate of the unbounded facet from {base} along {direction}")]
    MissingFacetTranslate { base: Point, direction: Point },

    #[error("skeleton precondition failed: line {index} {reason}")]
    BadSkeletonLine { index: usize, reason: String },

    #[error("certificate error: {0}")]
    Certificate(String),
}
