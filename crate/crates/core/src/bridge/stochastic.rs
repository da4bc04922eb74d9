use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::models::CostFunction;
use crate::operator::{HermitianOperator, StateVector};

/// Column sums must match one to this tolerance.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-12;
/// Entrywise detailed-balance tolerance.
pub const DETAILED_BALANCE_TOLERANCE: f64 = 1e-12;
/// Allowed `‖H_β ψ_β‖`.
pub const QUANTIZE_RESIDUAL: f64 = 1e-10;
/// Largest register for the exact transition matrix.
pub const MAX_METROPOLIS_QUBITS: usize = 12;

/// Column-stochastic matrix: entry `(i, j)` is the probability of `j → i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    data: DMatrix<f64>,
}

impl StochasticMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::NotStochastic("matrix is not square".into()));
        }
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                let v = data[(i, j)];
                if !(v >= 0.0) {
                    return Err(Error::NotStochastic(format!("entry ({i}, {j}) = {v} is negative")));
                }
            }
            let s: f64 = data.column(j).sum();
            if (s - 1.0).abs() > STOCHASTIC_TOLERANCE {
                return Err(Error::NotStochastic(format!("column {j} sums to {s}")));
            }
        }
        Ok(Self { data })
    }

    /// Builds from a row-stochastic matrix (`rows[i][j]` = probability of `i → j`).
    pub fn from_row_stochastic(rows: &DMatrix<f64>) -> Result<Self> {
        Self::new(rows.transpose())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Probability of moving `from → to`.
    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.data[(to, from)]
    }

    /// One step of the chain applied to a distribution.
    pub fn step(&self, dist: &[f64]) -> Vec<f64> {
        (&self.data * DVector::from_column_slice(dist)).as_slice().to_vec()
    }

    /// `max_i |(Pπ)_i − π_i|`.
    pub fn stationarity_defect(&self, pi: &[f64]) -> f64 {
        self.step(pi)
            .iter()
            .zip(pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max_{i,j} |P(j→i)π_j − P(i→j)π_i|`.
    pub fn detailed_balance_violation(&self, pi: &[f64]) -> f64 {
        let m = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in i + 1..m {
                let v = (self.data[(i, j)] * pi[j] - self.data[(j, i)] * pi[i]).abs();
                worst = worst.max(v);
            }
        }
        worst
    }

    /// Iterates `π ← Pπ` from `start` until successive iterates differ by less
    /// than `tol` in the 1-norm.
    pub fn power_limit(&self, start: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        if start.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: start.len(),
            });
        }
        let mut v = start.to_vec();
        for _ in 0..max_iter {
            let next = self.step(&v);
            let diff: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            v = next;
            if diff < tol {
                return Ok(v);
            }
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            best_residual: self.stationarity_defect(&v),
        })
    }

    /// `1 − λ₂` for a chain reversible with respect to `pi` (all entries > 0).
    pub fn spectral_gap(&self, pi: &[f64]) -> Result<f64> {
        let m = self.dim();
        if pi.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: pi.len(),
            });
        }
        if pi.iter().any(|&p| !(p > 0.0)) {
            return Err(invalid("stationary distribution must be strictly positive"));
        }
        let violation = self.detailed_balance_violation(pi);
        if violation > 1e-10 {
            return Err(Error::DetailedBalance { violation });
        }
        if m == 1 {
            return Ok(1.0);
        }
        let sq: Vec<f64> = pi.iter().map(|p| p.sqrt()).collect();
        let sym = DMatrix::from_fn(m, m, |i, j| {
            let a = self.data[(i, j)] * sq[j] / sq[i];
            let b = self.data[(j, i)] * sq[i] / sq[j];
            0.5 * (a + b)
        });
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        Ok(1.0 - ev[1])
    }
}

/// `min(1, e^{−βΔE})`; downhill and level moves are always accepted.
pub fn metropolis_acceptance(delta_e: f64, beta: f64) -> f64 {
    if delta_e <= 0.0 {
        1.0
    } else {
        (-beta * delta_e).exp()
    }
}

/// Single-spin-flip Metropolis kernel for `cost` at inverse temperature `beta`.
/// A proposal picks one of the `n` spins uniformly; the lazy variant stays put
/// with probability ½ first.
pub fn metropolis_matrix(cost: &CostFunction, beta: f64, lazy: bool) -> Result<StochasticMatrix> {
    let n = cost.n();
    if n == 0 {
        return Err(invalid("cost has no spins"));
    }
    if n > MAX_METROPOLIS_QUBITS {
        return Err(Error::TooLarge {
            what: "Metropolis matrix qubits",
            size: n,
            limit: MAX_METROPOLIS_QUBITS,
        });
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid("beta must be finite and non-negative"));
    }
    let energies = cost.energies()?;
    let m = energies.len();
    let move_weight = if lazy { 0.5 } else { 1.0 } / n as f64;
    let mut data = DMatrix::zeros(m, m);
    for j in 0..m {
        let mut out = 0.0;
        for k in 0..n {
            let i = j ^ (1 << k);
            let p = move_weight * metropolis_acceptance(energies[i] - energies[j], beta);
            data[(i, j)] = p;
            out += p;
        }
        data[(j, j)] = 1.0 - out;
    }
    StochasticMatrix::new(data)
}

/// `ψ_β ∝ e^{−βE/2}` together with its partition function.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsState {
    pub beta: f64,
    /// `Z_β = Σ e^{−βE}`.
    pub partition_function: f64,
    pub amplitudes: StateVector,
    pub energies: Vec<f64>,
}

impl GibbsState {
    pub fn new(cost: &CostFunction, beta: f64) -> Result<Self> {
        let energies = cost.energies()?;
        let weights: Vec<f64> = energies.iter().map(|e| (-beta * e).exp()).collect();
        let z: f64 = weights.iter().sum();
        if !(z > 0.0) || !z.is_finite() {
            return Err(invalid(format!("partition function {z} is not usable")));
        }
        let amps = weights.iter().map(|w| (w / z).sqrt()).collect::<Vec<_>>();
        Ok(Self {
            beta,
            partition_function: z,
            amplitudes: StateVector::from_real(&amps)?,
            energies,
        })
    }

    /// `π_β(σ) = e^{−βE(σ)}/Z_β`.
    pub fn distribution(&self) -> Vec<f64> {
        self.amplitudes.probabilities()
    }
}

/// Output of [`quantize`].
#[derive(Clone, Debug)]
pub struct Quantized {
    pub hamiltonian: HermitianOperator,
    pub gibbs: GibbsState,
    /// `‖H_β ψ_β‖`.
    pub residual: f64,
    pub detailed_balance_violation: f64,
}

/// `H_β = I − √(S_ij S_ji)` entrywise; its zero-energy ground state is ψ_β.
pub fn quantize(s: &StochasticMatrix, cost: &CostFunction, beta: f64) -> Result<Quantized> {
    let gibbs = GibbsState::new(cost, beta)?;
    let m = s.dim();
    if m != gibbs.energies.len() {
        return Err(Error::DimensionMismatch {
            expected: gibbs.energies.len(),
            actual: m,
        });
    }
    let pi = gibbs.distribution();
    let violation = s.detailed_balance_violation(&pi);
    if violation > DETAILED_BALANCE_TOLERANCE {
        return Err(Error::DetailedBalance { violation });
    }
    let k = s.matrix();
    let h = DMatrix::from_fn(m, m, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - (k[(i, j)] * k[(j, i)]).sqrt()
    });
    let hamiltonian = HermitianOperator::from_real_dense(&h)?;
    let residual = hamiltonian.apply_state(&gibbs.amplitudes)?.norm();
    if residual > QUANTIZE_RESIDUAL {
        return Err(Error::KernelMismatch { residual });
    }
    Ok(Quantized {
        hamiltonian,
        gibbs,
        residual,
        detailed_balance_violation: violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::IsingInstance;

    fn close(a: &DMatrix<f64>, b: &[f64], tol: f64) -> bool {
        let b = DMatrix::from_row_slice(a.nrows(), a.ncols(), b);
        (a - b).abs().max() <= tol
    }

    #[test]
    fn one_spin_lazy_infinite_temperature() {
        let cost = CostFunction::ising(IsingInstance::zero(1));
        let s = metropolis_matrix(&cost, 0.0, true).unwrap();
        assert!(close(s.matrix(), &[0.5, 0.5, 0.5, 0.5], 1e-15));
        let swap = metropolis_matrix(&cost, 0.0, false).unwrap();
        assert!(close(swap.matrix(), &[0.0, 1.0, 1.0, 0.0], 1e-15));
    }

    #[test]
    fn quantized_one_spin_is_half_of_one_minus_sigma_x() {
        let cost = CostFunction::ising(IsingInstance::zero(1));
        let s = metropolis_matrix(&cost, 0.0, true).unwrap();
        let q = quantize(&s, &cost, 0.0).unwrap();
        let h = q.hamiltonian.to_dense().map(|c| c.re);
        assert!(close(&h, &[0.5, -0.5, -0.5, 0.5], 1e-15));
        assert!(q.residual < 1e-15);
    }

    #[test]
    fn quantized_single_field_matches_hand_algebra() {
        let cost = CostFunction::ising(IsingInstance::new(1, [], vec![1.0]).unwrap());
        for beta in [0.3, 1.0, 2.5] {
            let s = metropolis_matrix(&cost, beta, true).unwrap();
            let q = quantize(&s, &cost, beta).unwrap();
            let h = q.hamiltonian.to_dense().map(|c| c.re);
            let e = (-beta).exp();
            assert!(close(&h, &[0.5 * e * e, -0.5 * e, -0.5 * e, 0.5], 1e-14));
            assert!(q.residual < 1e-14);
        }
    }

    #[test]
    fn rejects_non_stochastic() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.6, 0.5]);
        assert!(StochasticMatrix::new(bad).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[1.5, 0.0, -0.5, 1.0]);
        assert!(StochasticMatrix::new(neg).is_err());
    }

    #[test]
    fn mismatched_kernel_is_rejected() {
        let cost = CostFunction::ising(IsingInstance::new(1, [], vec![1.0]).unwrap());
        let s = metropolis_matrix(&cost, 1.0, true).unwrap();
        assert!(matches!(quantize(&s, &cost, 2.0), Err(Error::DetailedBalance { .. })));
    }

    #[test]
    fn lazy_two_state_gap_is_one() {
        let s = StochasticMatrix::new(DMatrix::from_element(2, 2, 0.5)).unwrap();
        assert!((s.spectral_gap(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-14);
    }
}
