//! Exact arithmetic for convex polyhedral functions with integer slopes
//! (tropical Laurent polynomials), plus oracle-based detectors that
//! reconstruct such functions from point queries and emit replayable
//! certificates.
//!
//! All arithmetic is over ℚ with arbitrary precision; no floating point is
//! used outside plotting helpers.

pub mod cert;
pub mod cli;
pub mod detect1d;
pub mod detectnd;
pub mod error;
pub mod linalg;
mod lp;
pub mod oracle;
pub mod polyfun;
pub mod polyhedron;
pub mod rat;
pub mod tropical;

pub use detect1d::DetectOutcome;
pub use error::{Error, Result};
pub use oracle::FunctionOracle;
pub use polyfun::{DomainOfAffinity, Extent, LineParam, PolyhedralFunction, Restriction};
pub use polyhedron::{Facet, HalfSpace, RationalBox, RationalPolyhedron};
pub use rat::{rat, AffineFunctional, IntegralityClass, Point, Rat};
