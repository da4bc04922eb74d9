use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FreezeMode {
    /// Power-law field decay with exponent parameter `γ`.
    Quantum { gamma: f64 },
    /// Logarithmic cooling with constant `k`.
    Classical { k: f64 },
}

/// Time after which the ground-state probability is within `δ` of its limit:
/// `e^{−n ln δ / (2γ)}` for quantum and `e^{n/(δ k)}` for classical annealing.
pub fn freeze_time(mode: FreezeMode, n: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("δ = {delta} must lie in (0, 1)")));
    }
    let n = n as f64;
    match mode {
        FreezeMode::Quantum { gamma } if gamma > 0.0 => Ok((-n * delta.ln() / (2.0 * gamma)).exp()),
        FreezeMode::Classical { k } if k > 0.0 => Ok((n / (delta * k)).exp()),
        _ => Err(invalid("γ and k must be positive")),
    }
}

/// `F_T(p) = Σ p E − T S(p)` with `S(p) = −Σ p ln p` and `0 ln 0 = 0`.
pub fn free_energy(distribution: &[f64], energies: &[f64], temperature: f64) -> Result<f64> {
    if distribution.len() != energies.len() {
        return Err(crate::error::Error::DimensionMismatch {
            expected: energies.len(),
            actual: distribution.len(),
        });
    }
    if distribution.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(invalid("probabilities must be non-negative"));
    }
    let total: f64 = distribution.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("probabilities sum to {total}, not 1")));
    }
    let mean: f64 = distribution.iter().zip(energies).map(|(p, e)| p * e).sum();
    let entropy: f64 = distribution.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    Ok(mean - temperature * entropy)
}
