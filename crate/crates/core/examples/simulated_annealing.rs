//! Metropolis annealing of a ±1 spin glass under several temperature schedules.

use aqclab::annealers::{oracle_for, simulated_anneal, SAConfig, TemperatureSchedule};
use aqclab::models::{edges, gen_spin_glass, CostFunction, CouplingRange};

pub fn main() -> aqclab::Result<()> {
    let n = 16;
    let cost = CostFunction::ising(gen_spin_glass(
        n,
        &edges::random(n, 0.3, 3),
        CouplingRange::Uniform { lo: -1.0, hi: 1.0 },
        3,
    )?);
    let truth = oracle_for(&cost).expect("small enough to enumerate");
    println!("ground energy {}", truth.energy);
    let schedules = [
        ("logarithmic", TemperatureSchedule::Logarithmic { k: 1.0, t_start: 2.0 }),
        ("linear", TemperatureSchedule::Linear { t0: 3.0, t1: 0.05 }),
        ("geometric", TemperatureSchedule::Geometric { t0: 3.0, ratio: 0.95 }),
        ("greedy", TemperatureSchedule::Constant(0.0)),
    ];
    for (name, schedule) in schedules {
        let mut hits = 0;
        for seed in 0..50 {
            let cfg = SAConfig {
                schedule,
                sweeps: 30,
                seed,
                initial: None,
            };
            let r = simulated_anneal(&cost, &cfg, Some(&truth))?;
            hits += usize::from(r.residual == Some(0.0));
        }
        println!("{name:>12}: {hits}/50 runs found a ground state");
    }
    Ok(())
}
