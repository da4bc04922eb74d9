use std::time::Instant;

use crate::error::{invalid, Result};
use crate::models::{brute_force_ground, CostFunction, IsingInstance};
use crate::operator::{evolve_real, HermitianOperator, StateVector};

use super::{AnnealOutput, AnnealResult};

/// Transverse-field strength `Γ(t)` multiplying the per-qubit `Δ_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldSchedule {
    /// `Γ(t) = Γ0 (1 + t)^{−γ/n}`.
    PowerLaw {
        gamma0: f64,
        gamma: f64,
    },
    /// `Γ(t) = Γ0 (1 − t/τ)`.
    LinearRamp {
        gamma0: f64,
    },
    Constant(f64),
}

impl FieldSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::PowerLaw { gamma0, gamma } => gamma0 >= 0.0 && gamma > 0.0 && gamma0.is_finite(),
            Self::LinearRamp { gamma0 } | Self::Constant(gamma0) => gamma0 >= 0.0 && gamma0.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("invalid field schedule {self:?}")))
        }
    }

    pub fn field(&self, t: f64, tau: f64, n: usize) -> f64 {
        match *self {
            Self::PowerLaw { gamma0, gamma } => gamma0 * (1.0 + t).powf(-gamma / n as f64),
            Self::LinearRamp { gamma0 } => {
                if tau == 0.0 {
                    0.0
                } else {
                    gamma0 * (1.0 - t / tau).max(0.0)
                }
            }
            Self::Constant(g) => g,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QAConfig {
    pub schedule: FieldSchedule,
    pub tau: f64,
    pub dt: f64,
}

/// Evolves the uniform superposition under `H_P − Γ(t) Σ Δ_i σ^x_i` for
/// `t ∈ [0, τ]`, then reads out with `Γ = 0`.
///
/// `success` is the readout probability of the ground space and
/// `best_energy` is the energy of the most probable basis state.
pub fn quantum_anneal(instance: &IsingInstance, cfg: &QAConfig) -> Result<AnnealResult> {
    quantum_anneal_cost(&CostFunction::ising(instance.clone()), cfg)
}

/// [`quantum_anneal`] for any cost family; non-Ising costs use `Δ_i = 1`.
pub fn quantum_anneal_cost(cost: &CostFunction, cfg: &QAConfig) -> Result<AnnealResult> {
    let clock = Instant::now();
    let psi = quantum_anneal_state(cost, cfg)?;
    let truth = brute_force_ground(cost)?;
    let probs = psi.probabilities();
    let success = truth.indices().iter().map(|&b| probs[b]).sum::<f64>().min(1.0);
    let mode = (0..probs.len())
        .max_by(|&a, &b| probs[a].total_cmp(&probs[b]))
        .expect("non-empty state");
    let best_energy = cost.evaluate_index(mode);
    let final_energy = probs.iter().enumerate().map(|(b, p)| p * cost.evaluate_index(b)).sum();
    Ok(AnnealResult {
        output: AnnealOutput::Quantum(psi),
        final_energy,
        best_energy,
        residual: Some(best_energy - truth.energy),
        success: Some(success),
        elapsed: clock.elapsed(),
        seed: None,
    })
}

/// Final state of a quantum anneal, before readout.
pub fn quantum_anneal_state(cost: &CostFunction, cfg: &QAConfig) -> Result<StateVector> {
    cfg.schedule.validate()?;
    if !(cfg.tau >= 0.0) || !cfg.tau.is_finite() {
        return Err(invalid("τ must be finite and non-negative"));
    }
    let n = cost.n();
    let problem = cost.cost_hamiltonian()?;
    let driver = match cost.as_ising() {
        Some(inst) => inst.driver_hamiltonian()?,
        None => IsingInstance::zero(n).driver_hamiltonian()?,
    };
    let h = |t: f64| -> Result<HermitianOperator> {
        let g = cfg.schedule.field(t, cfg.tau, n);
        HermitianOperator::linear_combination(&[(1.0, &problem), (-g, &driver)])
    };
    evolve_real(&h, &StateVector::uniform(problem.dim()), cfg.tau, cfg.dt)
}
