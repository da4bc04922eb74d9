//! Compiling a Grover iteration into a clock Hamiltonian and running it adiabatically.

use aqclab::adiabatic::{adiabatic_time_estimate, gap_profile, run_adiabatic, RunConfig};
use aqclab::clock::{
    clock_hamiltonian, compile_to_path, grover_two_qubit, history_vector, measure_history, reduced_toeplitz,
    toeplitz_gap, toeplitz_matrix,
};
use aqclab::operator::{lowest_eigenpairs, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn main() -> aqclab::Result<()> {
    let circuit = grover_two_qubit(2)?;
    let input = StateVector::basis(4, 0);
    let history = history_vector(&circuit, &input)?;
    println!("L = {} gates", history.length());
    println!("output amplitudes {:?}", circuit.output(&input)?.probabilities());

    let h = clock_hamiltonian(&circuit, true)?;
    let image = h.hamiltonian.apply_state(&history.eta)?;
    println!("‖H η‖ = {:.2e}", image.norm());
    let spec = lowest_eigenpairs(&h.hamiltonian, 2, 1e-10)?;
    println!(
        "clock Hamiltonian E0 = {:.2e}, E1 = {:.6}",
        spec.eigenvalues[0], spec.eigenvalues[1]
    );

    let reduced = reduced_toeplitz(&circuit, &input)?;
    let deviation = (&reduced - toeplitz_matrix(history.length())).abs().max();
    println!(
        "reduced matrix deviation from Toeplitz {deviation:.1e}, gap {:.6}",
        toeplitz_gap(history.length())
    );

    let path = compile_to_path(&circuit, 1.0)?;
    let estimate = adiabatic_time_estimate(&gap_profile(&path, 41)?)?;
    let run = run_adiabatic(&path.with_tau(10.0 * estimate)?, &RunConfig::default())?;
    println!(
        "adiabatic run τ = {:.1}: history-state fidelity {:.4}",
        10.0 * estimate,
        history.eta.fidelity(&run.final_state)
    );

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut at_end = 0;
    for _ in 0..200 {
        let (l, sys) = measure_history(&history, &mut rng)?;
        if l == history.length() && sys.probabilities()[2] > 0.999 {
            at_end += 1;
        }
    }
    println!("clock readouts at l = L carrying the marked item: {at_end}/200");
    Ok(())
}
