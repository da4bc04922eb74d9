//! Circuit → history-state compiler.
//!
//! The clock is an explicit `(L+1)`-level register; full-space index is
//! `l·2^n + x` for clock value `l` and system basis state `x`.

mod circuit;
mod gate;
mod hamiltonian;
mod parse;

pub use circuit::{
    grover_two_qubit, history_vector, measure_clock, measure_history, random_circuit, HistoryState, QuantumCircuit,
};
pub use gate::{random_unitary, Gate, UNITARY_TOLERANCE};
pub use hamiltonian::{
    clock_chain_hamiltonian, clock_hamiltonian, clock_initial_hamiltonian, compile_to_path, reduced_toeplitz,
    toeplitz_gap, toeplitz_matrix, ClockHamiltonian, MAX_CLOCK_DIM,
};
pub use parse::{parse_circuit, parse_complex};
