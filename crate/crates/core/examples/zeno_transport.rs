//! Dragging a state with a chain of randomly timed evolutions.

use aqclab::adiabatic::{zeno_cost, zeno_run, DwellDistribution, ZenoOptions, ZenoSchedule};
use aqclab::models::IsingInstance;
use aqclab::operator::{HermitianOperator, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn main() -> aqclab::Result<()> {
    let inst = IsingInstance::new(2, [((0, 1), 1.0)], vec![0.5, 0.0])?;
    let h0 = HermitianOperator::linear_combination(&[(-1.0, &inst.driver_hamiltonian()?)])?;
    let ht = inst.problem_hamiltonian()?;
    let steps = 20;
    for mean in [1.0, 20.0, 200.0] {
        let schedule = ZenoSchedule::interpolated(&h0, &ht, steps, DwellDistribution::Exponential { mean }, 0.9)?;
        let opts = ZenoOptions { dwell_factor: None };
        let mut fid = 0.0;
        let trials = 50;
        let mut gap = 0.0;
        for seed in 0..trials {
            let r = zeno_run(
                &schedule,
                &StateVector::uniform(4),
                &mut ChaCha8Rng::seed_from_u64(seed),
                &opts,
            )?;
            fid += r.fidelity / trials as f64;
            gap = r.gap;
        }
        println!(
            "mean dwell {mean:>6}: mean fidelity {fid:.4}  (Δ = {gap:.4}, 10/Δ = {:.2})",
            10.0 / gap
        );
    }
    println!("cost(L=10, p=0.9, Δ=0.1) = {:.2}", zeno_cost(10, 0.9, 0.1)?);
    Ok(())
}
