//! Stabilizer codes, their maximum-likelihood decoding, and the disordered
//! Wegner spin models whose partition functions are the decoding
//! probabilities.
//!
//! The crate is `no_std` and only needs an allocator. Everything here is a
//! pure function of its inputs; randomness is always passed in as an RNG.
//!
//! Layout:
//! - [`gf2`]: bit-packed vectors and matrices over GF(2).
//! - [`codes`]: stabilizer/CSS codes, hypergraph products, code parameters.
//! - [`wegner`]: exact partition and correlation functions.
//! - [`decoder`]: error sampling and ML decoding by class comparison.
//! - [`montecarlo`]: Metropolis estimates for larger models.
//! - [`analysis`]: defect free energies, bounds and transition estimates.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod codes;
pub mod decoder;
mod error;
pub mod gf2;
mod math;
pub mod montecarlo;
pub mod rng;
pub mod wegner;

pub use codes::{CodeParams, Sector, SectorProblem, StabilizerCode};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BinaryVector};
pub use wegner::{PartitionValue, WegnerModel};
