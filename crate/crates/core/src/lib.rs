//! Exact structure-constant checking for Rota-Baxter structures graded by
//! finite semigroups, their split and Lie-type descendants, and the dual
//! coalgebra side.

pub mod coalgebra;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod format;
pub mod grading;
pub mod laws;
pub mod paper;
pub mod scalar;
pub mod search;
pub mod structures;

pub use error::{Error, Result};
