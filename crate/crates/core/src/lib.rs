//! Numerical core for simulating environment-induced decoherence.
//!
//! Everything here works in natural units (ħ = k_B = 1) on dense complex
//! matrices and needs only `alloc`. File formats, the command line and
//! parallel trajectory fan-out live in the companion `decoh` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bath;
pub mod channels;
pub mod error;
pub mod fit;
pub mod fock;
pub mod grid;
pub mod lindblad;
pub mod linalg;
pub mod measures;
pub mod models;
pub mod protection;
pub mod quad;
pub mod random;
pub mod trajectories;
pub mod units;
pub mod wigner;

pub use error::{Error, Result};
pub use linalg::{DensityMatrix, Operator, StateVector, C64};
