//! Real- and imaginary-time propagation (ħ = 1).
//!
//! Real time uses a midpoint exponential stepper: on each interval the
//! Hamiltonian is frozen at the interval midpoint and `exp(−i H dt)` is
//! applied exactly (eigendecomposition up to [`EXACT_STEP_QUBITS`] qubits,
//! converged Krylov exponential above). The scheme is second order in `dt`.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};

use super::eigen::{self, dot, krylov, norm, FullDecomposition, DEGENERACY_TOLERANCE};
use super::{HermitianOperator, StateVector};

/// Registers up to this size use the exact small-matrix exponential.
pub const EXACT_STEP_QUBITS: usize = 6;
/// Allowed norm drift per unit evolution time.
pub const NORM_DRIFT_PER_TIME: f64 = 1e-8;

const KRYLOV_MAX: usize = 40;
const KRYLOV_TOL: f64 = 1e-13;

/// Anything that yields the Hamiltonian at time `t`.
pub trait HamiltonianSource {
    fn at(&self, t: f64) -> Result<HermitianOperator>;
}

impl<F> HamiltonianSource for F
where
    F: Fn(f64) -> Result<HermitianOperator>,
{
    fn at(&self, t: f64) -> Result<HermitianOperator> {
        self(t)
    }
}

/// Time-independent Hamiltonian as a source.
pub struct Constant<'a>(pub &'a HermitianOperator);

impl HamiltonianSource for Constant<'_> {
    fn at(&self, _t: f64) -> Result<HermitianOperator> {
        Ok(self.0.clone())
    }
}

/// `exp(z H) v` for a scalar `z`.
pub fn expm_apply(h: &HermitianOperator, v: &[C64], z: C64) -> Vec<C64> {
    if h.dim() <= 1 << EXACT_STEP_QUBITS {
        let full = FullDecomposition::new(h);
        exp_in_eigenbasis(&full, v, z)
    } else {
        krylov_expm(h, v, z)
    }
}

fn exp_in_eigenbasis(full: &FullDecomposition, v: &[C64], z: C64) -> Vec<C64> {
    let mut c = full.coefficients(v);
    for (cj, &l) in c.iter_mut().zip(&full.eigenvalues) {
        *cj *= (z * l).exp();
    }
    full.synthesize(&c)
}

/// Krylov approximation of `exp(z H) v`, splitting the step when the
/// subspace bound is not met.
fn krylov_expm(h: &HermitianOperator, v: &[C64], z: C64) -> Vec<C64> {
    let beta0 = norm(v);
    if beta0 == 0.0 {
        return v.to_vec();
    }
    let start: Vec<C64> = v.iter().map(|x| x / beta0).collect();
    let kr = krylov(h, start, KRYLOV_MAX.min(h.dim()), &[]);
    let (theta, q) = kr.ritz();
    let m = theta.len();
    // y = Q exp(zΘ) Qᵀ e1
    let y: Vec<C64> = (0..m)
        .map(|r| {
            (0..m)
                .map(|c| q[(r, c)] * q[(0, c)] * (z * theta[c]).exp())
                .sum::<C64>()
        })
        .collect();
    let err = kr.beta_last * y[m - 1].norm();
    if err > KRYLOV_TOL && kr.basis.len() == KRYLOV_MAX {
        let half = krylov_expm(h, v, z / 2.0);
        return krylov_expm(h, &half, z / 2.0);
    }
    kr.lift(y.into_iter().map(|c| c * beta0))
}

/// `ψ(t_end)` under `i dψ/dt = H(t) ψ`.
pub fn evolve_real(source: &impl HamiltonianSource, psi0: &StateVector, t_end: f64, dt: f64) -> Result<StateVector> {
    evolve_real_observed(source, psi0, 0.0, t_end, dt, |_, _| Ok(()))
}

/// Midpoint evolution from `t_start` to `t_end`; `observe(t, ψ)` is called
/// after every step.
pub fn evolve_real_observed(
    source: &impl HamiltonianSource,
    psi0: &StateVector,
    t_start: f64,
    t_end: f64,
    dt: f64,
    mut observe: impl FnMut(f64, &StateVector) -> Result<()>,
) -> Result<StateVector> {
    if !(dt > 0.0) {
        return Err(invalid("time step must be positive"));
    }
    if !(t_end >= t_start) {
        return Err(invalid("end time precedes start time"));
    }
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: norm0 });
    }
    let duration = t_end - t_start;
    let steps = (duration / dt).ceil() as usize;
    if steps == 0 {
        return Ok(psi0.clone());
    }
    let h_step = duration / steps as f64;
    let mut psi = psi0.amplitudes().to_vec();
    let minus_i_dt = C64::new(0.0, -h_step);
    for k in 0..steps {
        let t_mid = t_start + (k as f64 + 0.5) * h_step;
        let h = source.at(t_mid)?;
        if h.dim() != psi.len() {
            return Err(Error::DimensionMismatch {
                expected: psi.len(),
                actual: h.dim(),
            });
        }
        psi = expm_apply(&h, &psi, minus_i_dt);
        let state = StateVector::from_raw(psi);
        observe(t_start + (k + 1) as f64 * h_step, &state)?;
        psi = state.into_amplitudes();
    }
    let tolerance = NORM_DRIFT_PER_TIME * duration.max(1.0);
    let n = norm(&psi);
    if (n - 1.0).abs() > tolerance || !n.is_finite() {
        return Err(Error::NormDrift { norm: n, tolerance });
    }
    Ok(StateVector::from_raw(psi))
}

#[derive(Clone, Debug)]
pub struct ImaginaryTimeResult {
    /// Normalized `exp(−Hτ)ψ0`.
    pub state: StateVector,
    /// Final Rayleigh quotient `⟨ψ|H|ψ⟩`.
    pub energy: f64,
    /// Rayleigh quotient after every step, starting with the initial state.
    pub rayleigh: Vec<f64>,
    /// Set when `ψ0` has numerically zero weight on the ground space; the
    /// state then relaxes within the orthogonal complement.
    pub orthogonal_to_ground: bool,
}

/// Weight below which a state is considered orthogonal to the ground space.
const GROUND_WEIGHT_FLOOR: f64 = 1e-20;

/// Normalized `exp(−Hτ) ψ0`, stepped in increments of `dt`.
pub fn evolve_imaginary(h: &HermitianOperator, psi0: &StateVector, tau: f64, dt: f64) -> Result<ImaginaryTimeResult> {
    if !(dt > 0.0) || !(tau >= 0.0) {
        return Err(invalid("imaginary time and step must be non-negative / positive"));
    }
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: psi0.dim(),
        });
    }
    let psi0 = psi0.normalized()?;
    let steps = (tau / dt).ceil() as usize;
    let h_step = if steps == 0 { 0.0 } else { tau / steps as f64 };
    if h.is_dense() {
        imaginary_dense(h, &psi0, steps, h_step)
    } else {
        imaginary_krylov(h, &psi0, steps, h_step)
    }
}

fn imaginary_dense(
    h: &HermitianOperator,
    psi0: &StateVector,
    steps: usize,
    h_step: f64,
) -> Result<ImaginaryTimeResult> {
    let full = FullDecomposition::new(h);
    let e0 = full.eigenvalues[0];
    let mut c = full.coefficients(psi0.amplitudes());
    let ground: Vec<usize> = (0..full.dim())
        .filter(|&j| full.eigenvalues[j] - e0 <= DEGENERACY_TOLERANCE)
        .collect();
    let weight: f64 = ground.iter().map(|&j| c[j].norm_sqr()).sum();
    let orthogonal = weight < GROUND_WEIGHT_FLOOR;
    if orthogonal {
        for &j in &ground {
            c[j] = C64::new(0.0, 0.0);
        }
        renormalize(&mut c);
    }
    let rq = |c: &[C64]| -> f64 { c.iter().zip(&full.eigenvalues).map(|(x, l)| x.norm_sqr() * l).sum() };
    let mut rayleigh = vec![rq(&c)];
    // shifted decay factors keep the largest factor at one
    let decay: Vec<f64> = full.eigenvalues.iter().map(|l| (-(l - e0) * h_step).exp()).collect();
    for _ in 0..steps {
        for (x, d) in c.iter_mut().zip(&decay) {
            *x *= d;
        }
        renormalize(&mut c);
        rayleigh.push(rq(&c));
    }
    let state = StateVector::from_raw(full.synthesize(&c));
    Ok(ImaginaryTimeResult {
        energy: *rayleigh.last().unwrap(),
        state,
        rayleigh,
        orthogonal_to_ground: orthogonal,
    })
}

fn imaginary_krylov(
    h: &HermitianOperator,
    psi0: &StateVector,
    steps: usize,
    h_step: f64,
) -> Result<ImaginaryTimeResult> {
    let ground = eigen::ground_space(h)?;
    let weight = ground.overlap(psi0);
    let orthogonal = weight < GROUND_WEIGHT_FLOOR;
    let mut psi = psi0.amplitudes().to_vec();
    let project_out = |psi: &mut Vec<C64>| {
        for g in &ground.basis {
            let p = dot(g.amplitudes(), psi);
            for (x, y) in psi.iter_mut().zip(g.amplitudes()) {
                *x -= p * y;
            }
        }
    };
    if orthogonal {
        project_out(&mut psi);
        renormalize(&mut psi);
    }
    let energy_of = |psi: &[C64]| dot(psi, &h.apply(psi)).re;
    let mut rayleigh = vec![energy_of(&psi)];
    // shift by the ground energy so the propagator never amplifies
    let shifted = HermitianOperator::linear_combination(&[
        (1.0, h),
        (-ground.energy, &HermitianOperator::identity(h.dim())?.to_sparse()),
    ])?;
    for _ in 0..steps {
        psi = krylov_expm(&shifted, &psi, C64::new(-h_step, 0.0));
        if orthogonal {
            project_out(&mut psi);
        }
        renormalize(&mut psi);
        rayleigh.push(energy_of(&psi));
    }
    Ok(ImaginaryTimeResult {
        energy: *rayleigh.last().unwrap(),
        state: StateVector::from_raw(psi),
        rayleigh,
        orthogonal_to_ground: orthogonal,
    })
}

fn renormalize(v: &mut [C64]) {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Dense `exp(z H)` matrix, for reference checks.
pub fn expm_dense(h: &HermitianOperator, z: C64) -> DMatrix<C64> {
    let full = FullDecomposition::new(h);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        full.dim(),
        full.eigenvalues.iter().map(|&l| (z * l).exp()),
    ));
    &full.eigenvectors * d * full.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::super::{build_operator, Pauli, PauliTerm, Storage};
    use super::*;

    fn sigma_z() -> HermitianOperator {
        build_operator(1, vec![PauliTerm::single(1.0, 0, Pauli::Z)]).unwrap()
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let h = HermitianOperator::zeros(4).unwrap();
        let psi = StateVector::uniform(4);
        let out = evolve_real(&Constant(&h), &psi, 3.0, 0.1).unwrap();
        for (a, b) in out.amplitudes().iter().zip(psi.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_phase() {
        let out = evolve_real(&Constant(&sigma_z()), &StateVector::basis(2, 0), PI / 2.0, 0.01).unwrap();
        let a = out.amplitudes();
        assert!((a[0] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!(a[1].norm() < 1e-14);
    }

    #[test]
    fn krylov_exponential_matches_dense() {
        let n = 8;
        let mut terms = Vec::new();
        for i in 0..n {
            terms.push(PauliTerm::single(-1.0, i, Pauli::X));
            terms.push(PauliTerm::single(0.3, i, Pauli::Z));
            if i + 1 < n {
                terms.push(PauliTerm::pair(0.8, i, Pauli::Z, i + 1, Pauli::Z));
            }
        }
        let h = HermitianOperator::from_terms(n, terms, Storage::Sparse).unwrap();
        let psi = StateVector::uniform(1 << n);
        let z = C64::new(0.0, -0.7);
        let a = krylov_expm(&h, psi.amplitudes(), z);
        let full = FullDecomposition::new(&h);
        let b = exp_in_eigenbasis(&full, psi.amplitudes(), z);
        let err: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10, "krylov error {err}");
    }

    #[test]
    fn imaginary_time_reaches_ground() {
        let h = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        let r = evolve_imaginary(&h, &StateVector::uniform(2), 50.0, 0.1).unwrap();
        assert!((r.state.amplitudes()[0].norm() - 1.0).abs() < 1e-10);
        assert!(!r.orthogonal_to_ground);
        assert!(r.rayleigh.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn excited_state_is_invariant_and_flagged() {
        let h = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        let r = evolve_imaginary(&h, &StateVector::basis(2, 1), 20.0, 0.5).unwrap();
        assert!(r.orthogonal_to_ground);
        assert!((r.state.amplitudes()[1].norm() - 1.0).abs() < 1e-14);
        assert!((r.energy - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_positive_step() {
        let h = sigma_z();
        assert!(evolve_real(&Constant(&h), &StateVector::basis(2, 0), 1.0, 0.0).is_err());
        assert!(evolve_imaginary(&h, &StateVector::basis(2, 0), 1.0, -1.0).is_err());
    }
}
