//! Exact GF(2) computations of endomorphism algebras of Specht modules in
//! characteristic two, through relation systems on matrix-indexed
//! homomorphism bases and a permutation-module oracle.

use serde::{Deserialize, Serialize};

pub mod checks;
pub mod error;
pub mod gf2;
pub mod partitions;
pub mod relations;
pub mod staircase;
pub mod tabloids;

pub use error::{Error, Result};

/// Resource limits shared by every engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest table set a relation system may index.
    pub max_tables: usize,
    /// Largest dense bit budget for a materialized map.
    pub max_bits: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_tables: 200_000,
            max_bits: 1 << 31,
        }
    }
}
