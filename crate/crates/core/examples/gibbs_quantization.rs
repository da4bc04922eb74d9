//! Classical Metropolis chains, their quantized Hamiltonians, and conductance bounds.

use aqclab::bridge::{gap_bounds_check, metropolis_matrix, perron_stochasticize, quantize, GibbsState};
use aqclab::clock::clock_chain_hamiltonian;
use aqclab::models::{CostFunction, IsingInstance};

pub fn main() -> aqclab::Result<()> {
    let inst = IsingInstance::new(3, [((0, 1), 1.0), ((1, 2), -0.7)], vec![0.2, 0.0, 0.4])?;
    let cost = CostFunction::ising(inst);
    for beta in [0.0, 0.5, 1.0, 2.0] {
        let p = metropolis_matrix(&cost, beta, true)?;
        let q = quantize(&p, &cost, beta)?;
        let gibbs = GibbsState::new(&cost, beta)?;
        let gap = p.spectral_gap(&gibbs.distribution())?;
        println!(
            "β = {beta}: Z = {:.4}  detailed balance {:.1e}  H ψ residual {:.1e}  chain gap {gap:.4}",
            gibbs.partition_function, q.detailed_balance_violation, q.residual
        );
    }

    for length in [4, 8, 16] {
        let h = clock_chain_hamiltonian(length, 0.9)?;
        let (p, perron) = perron_stochasticize(&h)?;
        let r = gap_bounds_check(&p, &perron.limiting, Some(length))?;
        println!(
            "clock chain L = {length:>2}: φ = {:.4} ≥ {:.4}  gap = {:.4} ≥ ½φ² = {:.4}  (predicted {:.4})",
            r.phi,
            r.clock_bound.unwrap_or(0.0),
            r.gap,
            r.half_phi_squared,
            perron.predicted_chain_gap()
        );
    }
    Ok(())
}
