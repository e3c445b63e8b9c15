//! Exact-arithmetic classification of linear torus actions on products of
//! spheres in dimensions 6 and 7.
//!
//! The crate decides freeness and effective freeness of linear torus actions,
//! canonicalizes T^3 actions on (S^3)^3 and T^2 actions on S^5 x S^3 into
//! their family/sporadic normal forms, computes cohomology ring presentations
//! with first Pontryagin and Stiefel-Whitney classes, and renders
//! homotopy/diffeomorphism verdicts from those invariants. All arithmetic is
//! exact; nothing here touches floating point.
//!
//! Heavy sweeps (enumeration, exhaustive cross-validation, substitution
//! search) are data-parallel over rayon when the `parallel` feature is on
//! (the default); every entry point also runs sequentially and produces
//! byte-identical results either way.

pub mod actions;
pub mod families;
pub mod homotopy;
pub mod invariants;
pub mod lattice;
pub mod moves;
pub mod par;
pub mod ringiso;

pub use lattice::{AbelianGroup, Int, IntMatrix};
pub use par::Parallelism;

use thiserror::Error as ThisError;

#[derive(Debug, Clone, ThisError)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("wrong shape: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("minor order {k} out of range for {rows}x{cols} matrix")]
    MinorOrderOutOfRange { k: usize, rows: usize, cols: usize },
    #[error("weight entry {value} is odd; biquotient conversion needs all weights even")]
    OddWeight { value: i64 },
    #[error("oracle bound {given} too small; largest prime to test is {required}")]
    OracleBoundTooSmall { given: u64, required: u64 },
    #[error("action matrix is not valid (needs unit diagonal, det +-1 and diagonal cofactors +-1)")]
    InvalidActionMatrix,
    #[error("unclassified within move-search budget {budget}")]
    BudgetExhausted { budget: usize },
    #[error("triple ({0}, {1}, {2}) does not define a free action")]
    NotFree(i64, i64, i64),
    #[error("unknown family id: {0}")]
    UnknownFamily(String),
    #[error("family {family} takes {expected} parameters, got {got}")]
    FamilyArity { family: String, expected: usize, got: usize },
    #[error("unknown reference tag: {0}")]
    UnknownReferenceTag(String),
    #[error("records have mismatched dimension: {left} vs {right}")]
    DimensionMismatch { left: u8, right: u8 },
    #[error("unsupported dimension {0}; only 6 and 7 are catalogued")]
    UnsupportedDimension(u8),
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },
    #[error("unknown base lattice: {0}")]
    UnknownBaseLattice(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}
