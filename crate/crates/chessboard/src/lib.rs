#![allow(clippy::needless_range_loop)]
//! Ternary (Z3-graded) algebra toolkit: cubic matrices, j-brackets, Grassmann and exterior calculus.

pub mod automorphism;
pub mod cli;
pub mod cubic;
pub mod dirac;
pub mod enveloping;
pub mod error;
pub mod exterior;
pub mod geometry;
pub mod graded;
pub mod grassmann;
pub mod linalg;
pub mod sampling;
pub mod scalar;
pub mod verify;

pub use error::{ChessError, Result};
pub use scalar::ExactScalar;
