//! Four independent routes to the ground state of a small spin glass.

use aqclab::models::{brute_force_ground, edges, gen_random_ising, CostFunction, CouplingRange};
use aqclab::operator::{
    evolve_imaginary, lanczos_lowest, lowest_eigenpairs_with, EigenMethod, LanczosOptions, StateVector,
};

pub fn main() -> aqclab::Result<()> {
    let n = 8;
    let field = CouplingRange::Uniform { lo: -0.5, hi: 0.5 };
    let inst = gen_random_ising(n, &edges::random(n, 0.5, 7), CouplingRange::PlusMinusOne, field, 7)?;
    let h = inst.problem_hamiltonian()?;

    let truth = brute_force_ground(&CostFunction::ising(inst.clone()))?;
    let dense = lowest_eigenpairs_with(&h, 2, 1e-12, EigenMethod::Dense)?;
    let lanczos = lanczos_lowest(&h.to_sparse(), 2, 1e-10, &LanczosOptions::default())?;
    let relaxed = evolve_imaginary(&h, &StateVector::uniform(1 << n), 60.0, 0.05)?;

    println!(
        "brute force    E0 = {:.10}  minimizers = {:?}",
        truth.energy,
        truth.indices()
    );
    println!(
        "dense          E0 = {:.10}  gap = {:.6}",
        dense.ground_energy(),
        dense.gap().unwrap_or(0.0)
    );
    println!("lanczos        E0 = {:.10}", lanczos.ground_energy());
    println!("imaginary time E0 = {:.10}", relaxed.energy);

    let best = truth.indices()[0];
    let weight = relaxed.state.probabilities()[best];
    println!("imaginary-time weight on |{best}⟩ = {weight:.8}");
    Ok(())
}
