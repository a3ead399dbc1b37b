//! Eavesdropping bounds for qubit-based quantum key recycling.
//!
//! The crate covers 4-state (BB84), 6-state and 8-state conjugate coding.
//! It computes the information an adversary can extract per qubit under four
//! attacks (M1, M2, K1, K2), certifies the optimal discrimination POVMs with
//! the Holevo condition, turns leakages into capacities, and searches POVM
//! space numerically for anything better than the known constructions.
//!
//! ```
//! use qkr::attacks::{leakage, Attack, Measure};
//! use qkr::encodings::Scheme;
//! use qkr::eve::NoiseLevel;
//!
//! let beta = NoiseLevel::new(0.1)?;
//! let k2 = leakage(Scheme::EightState, Attack::K2, Measure::Shannon, beta);
//! assert!((k2 - 0.1569412).abs() < 1e-6);
//! # Ok::<(), qkr::error::Error>(())
//! ```
//!
//! Modules, bottom up:
//!
//! - [`linalg`]: 2×2 and 4×4 complex matrices, Jacobi eigensolver, trace norm.
//! - [`encodings`]: bases, Bloch vectors and qubit states of each scheme.
//! - [`eve`]: noise symmetrization, purification and the ancilla states `ζ_b`.
//! - [`entropy`]: POVMs, entropies, guessing probabilities, Holevo certificates.
//! - [`attacks`]: closed-form leakages and the POVMs that attain them.
//! - [`search`]: multi-start Shannon minimization and Monte Carlo sampling.
//! - [`capacity`]: capacities, crossovers and the artificial-noise extension.
//! - [`cli`]: the `qkr` command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN along with out-of-range values

pub mod attacks;
pub mod capacity;
pub mod cli;
pub mod encodings;
pub mod entropy;
pub mod error;
pub mod eve;
pub mod linalg;
pub mod search;

pub use attacks::{Attack, Measure};
pub use encodings::Scheme;
pub use error::{Error, Result};
pub use eve::NoiseLevel;
