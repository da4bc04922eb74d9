//! Ensemble experiments: success probabilities, repeat counts, speedup
//! metrics, success histograms and Hamming-distance diagnostics.

mod metrics;
mod run;
mod solver;

pub use metrics::{
    bimodality_coefficient, distance_to_ground, hamming_tunneling_diagnostic, quantile, repeats_needed,
    speedup_metrics, success_histogram, time_to_solution, HammingDiagnostic, HammingRow, InstanceOutcome, SolverReport,
    SpeedupReport, SuccessHistogram, BIMODALITY_THRESHOLD,
};
pub use run::{
    csv_field, derive_seed, evaluate_instance, generate_ensemble, run_benchmark, success_probability, BenchConfig,
    BenchOutcome, EnsembleSpec, InstanceRun, RunDetail, Timing,
};
pub use solver::{
    AdiabaticSolver, Exhaustive, QuantumAnnealer, RandomGuess, RunOutcome, Sampler, SimulatedAnnealer, Solver,
    SolverSpec, ZenoSolver,
};
