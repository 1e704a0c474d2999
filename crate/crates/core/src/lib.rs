//! Exact integer/rational machinery for analyzing weighted-forest intersection
//! forms and the knot-diagram invariants that sit on the other side of the
//! branched double cover: characteristic-vector path enumeration, correction
//! terms, gluing-form extension tests, checkerboard Goeritz data, Kauffman
//! bracket evaluation, and screening of ingested homology tables.
//!
//! Everything is computed over `BigInt`/`BigRational`; there are no floats
//! anywhere in the pipeline.

pub mod blowdown;
pub mod charvec;
pub mod diagram;
pub mod fixtures;
pub mod invariants;
pub mod kh;
pub mod linalg;
pub mod plumbing;
pub mod poly;

pub use linalg::{IntMatrix, LinalgError, Rational};
