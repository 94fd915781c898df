//! Multiphoton coherent states of the harmonic oscillator.
//!
//! The k-th powers `(a^±)^k` of the oscillator ladder operators close a
//! polynomial Heisenberg algebra of degree `k − 1`; their annihilator's
//! eigenstates are the multiphoton coherent states `|α⟩_j`. This crate builds
//! those states in a truncated Fock space, evaluates their closed-form
//! statistics, decomposes them into standard coherent states, and computes
//! Wigner functions, time evolution, geometric phases and partial
//! resolutions of the identity. Closed forms are always paired with an
//! independent numerical route.

pub mod completeness;
pub mod error;
pub mod fock;
pub mod hermite;
pub mod mcs;
pub mod phase_space;
pub mod quad;
pub mod scs;
pub mod series;

pub use error::{Error, Result};
pub use fock::FockVector;
pub use mcs::{McsLabel, MomentSet};
pub use num_complex::Complex64 as C64;
