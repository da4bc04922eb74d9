use crate::error::{invalid, Error, Result};
use crate::operator::{
    evolve_real_observed, ground_space, lowest_eigenpairs, StateVector, DENSE_TOLERANCE, ITERATIVE_TOLERANCE,
};

use super::path::InterpolationPath;

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Integrator step.
    pub dt: f64,
    /// Instantaneous eigenstates tracked in the trace (0 disables the trace).
    pub track: usize,
    /// Trace sample points including both endpoints.
    pub samples: usize,
    /// Required when the ground space of `H0` is degenerate.
    pub initial_state: Option<StateVector>,
    /// Accumulate dynamic phases `θ_n(t) = −∫ E_n dt` (trapezoidal on the samples).
    pub track_phases: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            track: 0,
            samples: 11,
            initial_state: None,
            track_phases: false,
        }
    }
}

/// Populations `|c_n(t)|²` in the instantaneous eigenbasis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub s: Vec<f64>,
    pub energies: Vec<Vec<f64>>,
    pub populations: Vec<Vec<f64>>,
    pub phases: Option<Vec<Vec<f64>>>,
}

impl EvolutionTrace {
    pub fn ground_population(&self) -> Vec<f64> {
        self.populations.iter().map(|p| p[0]).collect()
    }

    /// Columns `t,s,E0..,p0..`.
    pub fn to_csv(&self) -> String {
        let k = self.energies.first().map_or(0, Vec::len);
        let mut out = String::from("t,s");
        for n in 0..k {
            out += &format!(",E{n}");
        }
        for n in 0..k {
            out += &format!(",p{n}");
        }
        out.push('\n');
        for i in 0..self.times.len() {
            out += &format!("{},{}", self.times[i], self.s[i]);
            for e in &self.energies[i] {
                out += &format!(",{e}");
            }
            for p in &self.populations[i] {
                out += &format!(",{p}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct AdiabaticRun {
    pub final_state: StateVector,
    /// Weight of the final state in the ground space of `HT`.
    pub success: f64,
    pub trace: EvolutionTrace,
}

/// Evolves the ground state of `H0` along `path` over `[0, τ]`.
pub fn run_adiabatic(path: &InterpolationPath, config: &RunConfig) -> Result<AdiabaticRun> {
    if config.track > path.dim() {
        return Err(invalid("cannot track more levels than the dimension"));
    }
    if config.track > 0 && config.samples < 2 {
        return Err(invalid("a trace needs at least 2 samples"));
    }
    let psi0 = match &config.initial_state {
        Some(psi) => {
            if psi.dim() != path.dim() {
                return Err(Error::DimensionMismatch {
                    expected: path.dim(),
                    actual: psi.dim(),
                });
            }
            psi.normalized()?
        }
        None => {
            let g = ground_space(path.h0())?;
            if g.degeneracy() > 1 {
                return Err(Error::Degenerate {
                    what: "ground space of H0; supply an initial state",
                    gap: 0.0,
                });
            }
            g.basis.into_iter().next().expect("non-empty ground space")
        }
    };
    let tau = path.tau();
    let mut trace = EvolutionTrace::default();
    let record = |t: f64, psi: &StateVector, trace: &mut EvolutionTrace| -> Result<()> {
        if config.track == 0 {
            return Ok(());
        }
        let s = path.s_at(t);
        let h = path.at_s(s)?;
        let tol = if h.is_dense() {
            DENSE_TOLERANCE
        } else {
            ITERATIVE_TOLERANCE
        };
        let spec =
            lowest_eigenpairs(&h, config.track, tol).map_err(|e| Error::AtParameter { s, source: Box::new(e) })?;
        trace.times.push(t);
        trace.s.push(s);
        trace
            .populations
            .push(spec.eigenvectors.iter().map(|v| v.fidelity(psi)).collect());
        trace.energies.push(spec.eigenvalues);
        Ok(())
    };
    record(0.0, &psi0, &mut trace)?;
    let segments = if config.track > 0 { config.samples - 1 } else { 1 };
    let mut psi = psi0;
    for k in 0..segments {
        let t0 = tau * k as f64 / segments as f64;
        let t1 = tau * (k + 1) as f64 / segments as f64;
        psi = evolve_real_observed(path, &psi, t0, t1, config.dt, |_, _| Ok(()))?;
        record(t1, &psi, &mut trace)?;
    }
    if config.track_phases && config.track > 0 {
        let mut phases = vec![vec![0.0; config.track]];
        for i in 1..trace.times.len() {
            let dt = trace.times[i] - trace.times[i - 1];
            let prev = phases[i - 1].clone();
            phases.push(
                (0..config.track)
                    .map(|n| prev[n] - 0.5 * dt * (trace.energies[i][n] + trace.energies[i - 1][n]))
                    .collect(),
            );
        }
        trace.phases = Some(phases);
    }
    let success = ground_space(path.ht())?.overlap(&psi);
    Ok(AdiabaticRun {
        final_state: psi,
        success,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::adiabatic::{adiabatic_time_estimate, gap_profile};
    use crate::operator::HermitianOperator;

    fn one_qubit_path(tau: f64) -> InterpolationPath {
        let h0 = HermitianOperator::from_real_dense(&DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5])).unwrap();
        let ht = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        InterpolationPath::linear(h0, ht, tau).unwrap()
    }

    #[test]
    fn sudden_limit_is_the_projection() {
        let run = run_adiabatic(&one_qubit_path(0.0), &RunConfig::default()).unwrap();
        assert!((run.success - 0.5).abs() < 1e-12);
    }

    #[test]
    fn slow_and_fast_regimes() {
        let est = adiabatic_time_estimate(&gap_profile(&one_qubit_path(1.0), 101).unwrap()).unwrap();
        let cfg = RunConfig {
            dt: 0.02,
            track: 2,
            samples: 21,
            ..RunConfig::default()
        };
        let slow = run_adiabatic(&one_qubit_path(100.0 * est), &cfg).unwrap();
        assert!(slow.success >= 0.99, "slow success {}", slow.success);
        assert!(slow.trace.ground_population().iter().all(|&p| p >= 0.99));
        for pops in &slow.trace.populations {
            assert!(pops.iter().sum::<f64>() <= 1.0 + 1e-6);
        }
        let fast = run_adiabatic(&one_qubit_path(est / 100.0), &cfg).unwrap();
        assert!(fast.success < 0.9, "fast success {}", fast.success);
    }

    #[test]
    fn degenerate_start_needs_explicit_state() {
        let h0 = HermitianOperator::zeros(2).unwrap();
        let ht = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        let path = InterpolationPath::linear(h0, ht, 1.0).unwrap();
        assert!(matches!(
            run_adiabatic(&path, &RunConfig::default()),
            Err(Error::Degenerate { .. })
        ));
        let cfg = RunConfig {
            initial_state: Some(StateVector::basis(2, 0)),
            ..RunConfig::default()
        };
        assert!((run_adiabatic(&path, &cfg).unwrap().success - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phases_follow_energies() {
        let h = HermitianOperator::diagonal_from(&[-1.0, 2.0]).unwrap();
        let path = InterpolationPath::linear(h.clone(), h, 3.0).unwrap();
        let cfg = RunConfig {
            track: 2,
            samples: 4,
            track_phases: true,
            ..RunConfig::default()
        };
        let run = run_adiabatic(&path, &cfg).unwrap();
        let last = run.trace.phases.unwrap().pop().unwrap();
        assert!((last[0] - 3.0).abs() < 1e-12 && (last[1] + 6.0).abs() < 1e-12);
    }
}
