//! Deterministic simulator for detecting mode entanglement with two-level
//! target particles.
//!
//! The crate is organised bottom-up:
//!
//! * [`hilbert`] builds composite spaces of two-level particles and truncated
//!   field modes, with states, operators, tensor products and partial traces.
//! * [`dynamics`] holds the Jaynes-Cummings style exchange Hamiltonians, the
//!   controlled mixing unitary used for massive fermions, and time evolution.
//! * [`entanglement`] computes fidelity, concurrence and the Horodecki CHSH
//!   criterion on two-qubit states.
//! * [`protocols`] drives the end-to-end experiments (absorption, sequential
//!   ancilla rotations, collective coupling, the massive-fermion ancilla-pair
//!   protocol and its angle search) and assembles the summary table.
//! * [`cli`] is the command-line front end used by the `modent` binary.
//!
//! Units: ħ = 1 and the coupling strength J defaults to 1, so times are in
//! units of 1/J.

pub mod cli;
pub mod dynamics;
pub mod entanglement;
mod error;
pub mod hilbert;
pub mod protocols;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
