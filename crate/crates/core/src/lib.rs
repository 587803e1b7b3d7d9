//! Exact computation of the Gassner invariant of braids.
//!
//! - [`laurent`]: sparse Laurent polynomials over the integers.
//! - [`matrix`]: square matrices over that ring, with cleared denominators.
//! - [`braid`]: braid words, permutations, and over-strand annotation.
//! - [`gassner`]: the invariant, its unitarity identity, and v/w words.
//! - [`numeric`]: evaluation on the unit torus and the Hermitian form `Ψ`.
//! - [`selftest`]: randomized sweeps over the exact identities.
//! - [`cli`]: the command-line front end.

pub mod braid;
pub mod cli;
pub mod error;
pub mod gassner;
pub mod laurent;
pub mod matrix;
pub mod numeric;
pub mod selftest;

pub use error::{Error, Result};
