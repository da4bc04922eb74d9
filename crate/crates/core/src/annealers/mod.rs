//! Simulated annealing, state-vector quantum annealing and the closed-form
//! schedule diagnostics that compare them.

mod classical;
mod formulas;
mod quantum;

use std::time::Duration;

use crate::models::SpinConfiguration;
use crate::operator::StateVector;

pub use classical::{oracle_for, simulated_anneal, MetropolisChain, SAConfig, TemperatureSchedule};
pub use formulas::{free_energy, freeze_time, FreezeMode};
pub use quantum::{quantum_anneal, quantum_anneal_cost, quantum_anneal_state, FieldSchedule, QAConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum AnnealOutput {
    Classical {
        final_config: SpinConfiguration,
        best_config: SpinConfiguration,
    },
    Quantum(StateVector),
}

#[derive(Clone, Debug)]
pub struct AnnealResult {
    pub output: AnnealOutput,
    /// Energy of the final configuration, or `⟨H_P⟩` of the final state.
    pub final_energy: f64,
    pub best_energy: f64,
    /// `best_energy − E_min`; `None` without an oracle.
    pub residual: Option<f64>,
    /// Probability that a readout is a ground state; 0 or 1 for classical runs.
    pub success: Option<f64>,
    pub elapsed: Duration,
    pub seed: Option<u64>,
}
