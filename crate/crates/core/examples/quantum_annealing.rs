//! State-vector quantum annealing and the freeze-time comparison with thermal annealing.

use aqclab::annealers::{freeze_time, quantum_anneal, FieldSchedule, FreezeMode, QAConfig};
use aqclab::models::{edges, gen_spin_glass, CouplingRange};

pub fn main() -> aqclab::Result<()> {
    let n = 6;
    let inst = gen_spin_glass(n, &edges::ring(n), CouplingRange::Uniform { lo: -1.0, hi: 1.0 }, 11)?;
    for tau in [1.0, 5.0, 25.0] {
        for (name, schedule) in [
            (
                "power",
                FieldSchedule::PowerLaw {
                    gamma0: 5.0,
                    gamma: 4.0,
                },
            ),
            ("linear", FieldSchedule::LinearRamp { gamma0: 5.0 }),
        ] {
            let r = quantum_anneal(
                &inst,
                &QAConfig {
                    schedule,
                    tau,
                    dt: 0.05,
                },
            )?;
            println!(
                "τ = {tau:>4} {name:>6}: success {:.4}  ⟨E⟩ = {:.4}  best readout E = {:.4}",
                r.success.unwrap_or(0.0),
                r.final_energy,
                r.best_energy
            );
        }
    }
    for n in [4, 8, 16] {
        let qa = freeze_time(FreezeMode::Quantum { gamma: 1.0 }, n, 0.1)?;
        let sa = freeze_time(FreezeMode::Classical { k: 1.0 }, n, 0.1)?;
        println!("n = {n:>2}: freeze time quantum {qa:.4e}  classical {sa:.4e}");
    }
    Ok(())
}
