//! Interpolating Hamiltonians, their spectra and the dynamics along them.

mod gap;
mod path;
mod run;
mod zeno;

pub use gap::{
    adiabatic_time_estimate, gap_profile, gap_profile_on, susceptibility, uniform_grid, GapProfile, GAP_FLOOR,
};
pub use path::{InterpolationPath, Schedule};
pub use run::{run_adiabatic, AdiabaticRun, EvolutionTrace, RunConfig};
pub use zeno::{zeno_cost, zeno_run, DwellDistribution, ZenoOptions, ZenoResult, ZenoSchedule};
