use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};

use super::HermitianOperator;

/// A pure state in a finite Hilbert space.
///
/// Qubit registers use the little-endian convention: qubit 0 is the least
/// significant bit of the basis index, and `|0⟩` is the spin-up state
/// (σ = +1).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// State on `n_qubits` qubits; the amplitude count must be `2^n_qubits`.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = 1usize
            .checked_shl(n_qubits as u32)
            .ok_or_else(|| invalid("qubit count overflows the address space"))?;
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// State of arbitrary (non-zero) dimension, e.g. a system ⊗ clock register.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("state vector must have at least one amplitude"));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(invalid("state vector has non-finite amplitudes"));
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    /// Computational basis vector `|index⟩` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    /// Equal superposition over all `dim` basis states.
    pub fn uniform(dim: usize) -> Self {
        let a = 1.0 / (dim as f64).sqrt();
        Self {
            amplitudes: vec![C64::new(a, 0.0); dim],
        }
    }

    pub(crate) fn from_raw(amplitudes: Vec<C64>) -> Self {
        debug_assert!(!amplitudes.is_empty());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: self.amplitudes.iter().map(|a| a / norm).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched states");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Squared overlap `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Born-rule probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨ψ|H|ψ⟩` (real part; the imaginary part vanishes for Hermitian `H`).
    pub fn expectation(&self, h: &HermitianOperator) -> f64 {
        let hv = h.apply(&self.amplitudes);
        self.amplitudes.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// `⟨σ^z_qubit⟩` under the |0⟩ ↔ +1 convention.
    pub fn z_expectation(&self, qubit: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(b, a)| {
                let sign = if (b >> qubit) & 1 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum()
    }

    /// Total probability inside the span of an orthonormal set.
    pub fn weight_in(&self, basis: &[StateVector]) -> f64 {
        basis.iter().map(|b| b.fidelity(self)).sum()
    }
}
