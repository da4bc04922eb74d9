//! Ising instances, cost-function families, generators, and the
//! brute-force oracle.
//!
//! Basis index bit `i` set means spin `i` is −1; `|0…0⟩` is all spins up.

mod cost;
mod generate;
mod io;
mod ising;

pub use cost::{brute_force_ground, CostFamily, CostFunction, GroundTruth, GROUND_TOLERANCE, MAX_BRUTE_FORCE};
pub use generate::{
    edges, gen_exact_cover, gen_hamming_family, gen_random_ising, gen_spin_glass, CouplingRange, ExactCoverInstance,
    HammingKind, MAX_EXACT_COVER,
};
pub use io::InstanceDocument;
pub use ising::{zx_hamiltonian, zzxx_hamiltonian, IsingInstance, SpinConfiguration};
