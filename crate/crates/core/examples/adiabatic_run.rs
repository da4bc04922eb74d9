//! Success probability against total time, from the sudden to the adiabatic regime.

use aqclab::adiabatic::{adiabatic_time_estimate, gap_profile, run_adiabatic, InterpolationPath, RunConfig};
use aqclab::models::IsingInstance;

pub fn main() -> aqclab::Result<()> {
    let inst = IsingInstance::new(3, [((0, 1), 1.0), ((1, 2), 1.0)], vec![0.5, 0.0, 0.0])?;
    let path = InterpolationPath::transverse_field(&inst, 1.0)?;
    let estimate = adiabatic_time_estimate(&gap_profile(&path, 101)?)?;
    println!("τ estimate = {estimate:.4}");
    for factor in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let run = run_adiabatic(&path.with_tau(factor * estimate)?, &RunConfig::default())?;
        println!("τ = {factor:>6} × estimate  success = {:.6}", run.success);
    }

    let cfg = RunConfig {
        track: 3,
        samples: 6,
        ..RunConfig::default()
    };
    let traced = run_adiabatic(&path.with_tau(10.0 * estimate)?, &cfg)?;
    print!("{}", traced.trace.to_csv());
    Ok(())
}
