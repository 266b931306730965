//! Exact tools for progressions mapped onto sets with distinct sums of pairs.
//!
//! * [`sets`] and [`epoly`]: Sidon checks, additive energy, the forbidden-value
//!   closure `γ(M)`, and exact `B²`/`B⁴` norm powers of exponential sums.
//! * [`mappings`]: continuous mappings that evaluate exactly on rationals,
//!   including the Cantor staircase.
//! * [`construct`]: admissible progressions, the inductive chain, the kernel
//!   verifier and affine copies of `ℤ`.
//! * [`lemma3`]: interval unions and progressions with a membership pattern.
//! * [`cli`]: the `apsidon` command line.

// rejections carry exact rationals for diagnostics
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod construct;
pub mod epoly;
pub mod error;
pub mod lemma3;
pub mod mappings;
pub mod rational;
pub mod search;
pub mod sets;

pub use error::{Error, Result};
pub use mappings::Mapping;
pub use rational::Rational;
pub use sets::FiniteSet;
