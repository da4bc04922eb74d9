//! Simulation laboratory for adiabatic quantum computation and quantum
//! annealing at desk scale.
//!
//! * [`operator`]: state vectors, Pauli-term Hamiltonians, eigensolvers and
//!   real/imaginary-time propagation.
//! * [`models`]: Ising instances, cost-function families, instance
//!   generators and brute-force oracles.
//! * [`adiabatic`]: interpolation paths, gap profiles, the adiabatic time
//!   estimate, population traces, susceptibility and Zeno-path transport.
//! * [`annealers`]: simulated annealing, state-vector quantum annealing,
//!   freeze-time formulas and free energy.
//! * [`bridge`]: detailed-balance kernels, their quantized Hamiltonians,
//!   Perron stochasticization and conductance bounds.
//! * [`clock`]: circuits, history states and clock Hamiltonians.
//! * [`chimera`]: Chimera graphs, minor embedding and unembedding.
//! * [`bench`]: success probabilities, repeat counts, speedup metrics and
//!   ensemble diagnostics.
//! * [`runlog`]: JSON-lines records of individual solver runs.
//! * [`cli`]: the `aqclab` command-line front end.
//!
//! Basis convention everywhere: qubit 0 is the least significant bit of a
//! basis index and `|0⟩` corresponds to spin σ = +1.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adiabatic;
pub mod annealers;
pub mod bench;
pub mod bridge;
pub mod chimera;
pub mod cli;
pub mod clock;
pub mod error;
pub mod models;
pub mod operator;
pub mod runlog;

pub use error::{Error, Result};
