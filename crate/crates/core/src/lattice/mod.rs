//! Exact arithmetic in the lattice H₂(ℂP² # n C̄P²) and the small exact linear
//! algebra (over ℚ and GF(2)) the rest of the crate is built on.
//!
//! Nothing here uses floating point.

mod class;
mod gf2;
mod matrix;

pub use class::{pair, DivisorClass};
pub use gf2::{solve_gf2, BitMatrix, BitVector, Gf2Solution};
pub use matrix::{
    det, integer, is_negative_definite, rational, solve_rational, IntMatrix, Rational,
    RationalVector,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    Singular,
}
