//! Lowest-eigenpair solvers: dense diagonalization for small operators and a
//! locking Lanczos iteration with full reorthogonalization above the dense
//! cutoff.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

use super::matrix::{HermitianOperator, Realization};
use super::StateVector;

pub const DENSE_TOLERANCE: f64 = 1e-10;
pub const ITERATIVE_TOLERANCE: f64 = 1e-8;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Lowest eigenpairs of an operator, ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<StateVector>,
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_state(&self) -> &StateVector {
        &self.eigenvectors[0]
    }

    /// `E_1 − E_0`, if at least two levels were requested.
    pub fn gap(&self) -> Option<f64> {
        (self.eigenvalues.len() >= 2).then(|| self.eigenvalues[1] - self.eigenvalues[0])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMethod {
    /// Dense for dense realizations, Lanczos for sparse ones.
    Auto,
    Dense,
    Lanczos,
}

/// The `k` lowest eigenpairs with residual `‖Hv − λv‖ ≤ tol`.
pub fn lowest_eigenpairs(h: &HermitianOperator, k: usize, tol: f64) -> Result<Spectrum> {
    lowest_eigenpairs_with(h, k, tol, EigenMethod::Auto)
}

pub fn lowest_eigenpairs_with(h: &HermitianOperator, k: usize, tol: f64, method: EigenMethod) -> Result<Spectrum> {
    if k == 0 || k > h.dim() {
        return Err(invalid(format!(
            "requested {k} eigenpairs of a {}-dimensional operator",
            h.dim()
        )));
    }
    if !(tol > 0.0) {
        return Err(invalid("eigensolver tolerance must be positive"));
    }
    let dense = match method {
        EigenMethod::Auto => matches!(h.realization(), Realization::Dense(_)),
        EigenMethod::Dense => true,
        EigenMethod::Lanczos => false,
    };
    if dense {
        let full = FullDecomposition::new(h);
        let spectrum = full.lowest(h, k);
        let worst = spectrum.residuals.iter().copied().fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::NoConvergence {
                iterations: 1,
                best_residual: worst,
            });
        }
        Ok(spectrum)
    } else {
        lanczos_lowest(h, k, tol, &LanczosOptions::default())
    }
}

/// Orthonormal basis of the lowest eigenspace.
#[derive(Clone, Debug)]
pub struct GroundSpace {
    pub energy: f64,
    pub basis: Vec<StateVector>,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.basis.len()
    }

    /// Probability that `psi` lies in this eigenspace.
    pub fn overlap(&self, psi: &StateVector) -> f64 {
        psi.weight_in(&self.basis)
    }
}

/// Lowest eigenspace, resolving degeneracies within [`DEGENERACY_TOLERANCE`].
pub fn ground_space(h: &HermitianOperator) -> Result<GroundSpace> {
    if h.is_diagonal() {
        let diag = h.diagonal();
        let energy = diag.iter().copied().fold(f64::INFINITY, f64::min);
        let basis = diag
            .iter()
            .enumerate()
            .filter(|(_, &e)| e - energy <= DEGENERACY_TOLERANCE)
            .map(|(i, _)| StateVector::basis(h.dim(), i))
            .collect();
        return Ok(GroundSpace { energy, basis });
    }
    let tol = if h.is_dense() {
        DENSE_TOLERANCE
    } else {
        ITERATIVE_TOLERANCE
    };
    let mut k = 2.min(h.dim());
    loop {
        let spec = lowest_eigenpairs(h, k, tol)?;
        let e0 = spec.eigenvalues[0];
        let count = spec
            .eigenvalues
            .iter()
            .take_while(|&&e| e - e0 <= DEGENERACY_TOLERANCE)
            .count();
        if count < k || k == h.dim() {
            return Ok(GroundSpace {
                energy: e0,
                basis: spec.eigenvectors.into_iter().take(count).collect(),
            });
        }
        k = (2 * k).min(h.dim());
    }
}

/// Complete eigendecomposition of a dense operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct FullDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: DMatrix<C64>,
}

impl FullDecomposition {
    pub fn new(h: &HermitianOperator) -> Self {
        let m = h.to_dense();
        let dim = m.nrows();
        let (values, vectors) = if h.is_real() {
            let real = m.map(|v| v.re);
            let eig = real.symmetric_eigen();
            (eig.eigenvalues, eig.eigenvectors.map(|v| C64::new(v, 0.0)))
        } else {
            let eig = m.symmetric_eigen();
            (eig.eigenvalues, eig.eigenvectors)
        };
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues = order.iter().map(|&i| values[i]).collect();
        let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| vectors[(r, order[c])]);
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, j: usize) -> StateVector {
        StateVector::from_raw(self.eigenvectors.column(j).iter().copied().collect())
    }

    /// Coefficients `V† ψ` in the eigenbasis.
    pub fn coefficients(&self, psi: &[C64]) -> Vec<C64> {
        let v = DVector::from_column_slice(psi);
        (self.eigenvectors.adjoint() * v).iter().copied().collect()
    }

    /// `Σ_j coefficients_j |v_j⟩`.
    pub fn synthesize(&self, coefficients: &[C64]) -> Vec<C64> {
        let c = DVector::from_column_slice(coefficients);
        (&self.eigenvectors * c).iter().copied().collect()
    }

    fn lowest(&self, h: &HermitianOperator, k: usize) -> Spectrum {
        let eigenvectors: Vec<StateVector> = (0..k).map(|j| self.vector(j)).collect();
        let residuals = eigenvectors
            .iter()
            .zip(&self.eigenvalues)
            .map(|(v, &l)| residual(h, v.amplitudes(), l))
            .collect();
        Spectrum {
            eigenvalues: self.eigenvalues[..k].to_vec(),
            eigenvectors,
            residuals,
        }
    }
}

pub(crate) fn residual(h: &HermitianOperator, v: &[C64], lambda: f64) -> f64 {
    let hv = h.apply(v);
    hv.iter()
        .zip(v)
        .map(|(a, b)| (a - b * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    pub max_krylov: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_krylov: 80,
            max_restarts: 200,
            seed: 0x1a2c_05e5,
        }
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [C64], against: &[Vec<C64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for u in against {
            let p = dot(u, v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
    }
}

pub(crate) struct Krylov {
    pub basis: Vec<Vec<C64>>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Norm of the residual vector after the last basis vector.
    pub beta_last: f64,
}

/// Lanczos tridiagonalization started at normalized `start`, fully
/// reorthogonalized against the basis and against `locked`.
pub(crate) fn krylov(h: &HermitianOperator, start: Vec<C64>, max_dim: usize, locked: &[Vec<C64>]) -> Krylov {
    let mut basis: Vec<Vec<C64>> = vec![start];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut w = vec![ZERO; h.dim()];
    loop {
        let j = basis.len() - 1;
        h.apply_into(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for (x, y) in w.iter_mut().zip(&basis[j]) {
            *x -= y * a;
        }
        if j > 0 {
            for (x, y) in w.iter_mut().zip(&basis[j - 1]) {
                *x -= y * beta[j - 1];
            }
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = norm(&w);
        let scale = alpha.iter().map(|a| a.abs()).fold(1.0, f64::max);
        if basis.len() >= max_dim || b <= 1e-13 * scale {
            return Krylov {
                basis,
                alpha,
                beta,
                beta_last: b,
            };
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
}

impl Krylov {
    /// Eigen-decomposition of the tridiagonal projection, ascending.
    pub fn ritz(&self) -> (Vec<f64>, DMatrix<f64>) {
        let m = self.alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                self.alpha[r]
            } else if r == c + 1 {
                self.beta[c]
            } else if c == r + 1 {
                self.beta[r]
            } else {
                0.0
            }
        });
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(m, m, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn lift(&self, coefficients: impl Iterator<Item = C64>) -> Vec<C64> {
        let mut out = vec![ZERO; self.basis[0].len()];
        for (c, v) in coefficients.zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }
}

/// Lanczos with locking: each pass converges the lowest Ritz pair in the
/// complement of the already-locked vectors, restarting from the current
/// Ritz vector until its residual meets `tol`.
pub fn lanczos_lowest(h: &HermitianOperator, k: usize, tol: f64, opts: &LanczosOptions) -> Result<Spectrum> {
    let dim = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Vec<C64>> = Vec::new();
    let mut values = Vec::new();
    let mut residuals = Vec::new();
    let mut iterations = 0;
    while locked.len() < k {
        let mut start: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        orthogonalize(&mut start, &locked);
        let n = norm(&start);
        start.iter_mut().for_each(|x| *x /= n);
        let room = dim - locked.len();
        let mut best = f64::INFINITY;
        let mut converged = None;
        for _ in 0..opts.max_restarts {
            iterations += 1;
            let kr = krylov(h, start, opts.max_krylov.min(room), &locked);
            let (_, y) = kr.ritz();
            let mut v = kr.lift(y.column(0).iter().map(|&c| C64::new(c, 0.0)));
            orthogonalize(&mut v, &locked);
            let nv = norm(&v);
            v.iter_mut().for_each(|x| *x /= nv);
            let lambda = h.apply(&v).iter().zip(&v).map(|(a, b)| (b.conj() * a).re).sum::<f64>();
            let r = residual(h, &v, lambda);
            best = best.min(r);
            if r <= tol {
                converged = Some((lambda, v, r));
                break;
            }
            start = v;
        }
        match converged {
            Some((lambda, v, r)) => {
                values.push(lambda);
                residuals.push(r);
                locked.push(v);
            }
            None => {
                return Err(Error::NoConvergence {
                    iterations,
                    best_residual: best,
                })
            }
        }
    }
    // locking order is ascending up to round-off; sort to be safe
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(Spectrum {
        eigenvalues: order.iter().map(|&i| values[i]).collect(),
        eigenvectors: order
            .iter()
            .map(|&i| StateVector::from_raw(locked[i].clone()))
            .collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_operator, Pauli, PauliTerm, Storage};
    use super::*;

    fn ising_pair() -> HermitianOperator {
        // H = −Z0 Z1
        build_operator(2, vec![PauliTerm::pair(-1.0, 0, Pauli::Z, 1, Pauli::Z)]).unwrap()
    }

    #[test]
    fn identity_minus_x() {
        let h = build_operator(1, vec![PauliTerm::identity(1.0), PauliTerm::single(-1.0, 0, Pauli::X)]).unwrap();
        let s = lowest_eigenpairs(&h, 2, DENSE_TOLERANCE).unwrap();
        assert!((s.eigenvalues[0] - 0.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-12);
        let g = s.ground_state().amplitudes();
        assert!((g[0].norm() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((g[0] - g[1]).norm() < 1e-12);
    }

    #[test]
    fn degenerate_ising_pair() {
        let s = lowest_eigenpairs(&ising_pair(), 2, DENSE_TOLERANCE).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, -1.0]);
        let g = ground_space(&ising_pair()).unwrap();
        assert_eq!(g.degeneracy(), 2);
        assert_eq!(g.energy, -1.0);
    }

    #[test]
    fn lanczos_resolves_degeneracy() {
        let h = ising_pair().to_sparse();
        let s = lowest_eigenpairs(&h, 3, ITERATIVE_TOLERANCE).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-9);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-9);
        assert!((s.eigenvalues[2] - 1.0).abs() < 1e-9);
        let overlap = s.eigenvectors[0].inner(&s.eigenvectors[1]).norm();
        assert!(overlap < 1e-8);
    }

    #[test]
    fn lanczos_matches_dense_on_transverse_chain() {
        let n = 6;
        let mut terms = Vec::new();
        for i in 0..n {
            terms.push(PauliTerm::single(-0.7, i, Pauli::X));
            terms.push(PauliTerm::single(0.1 * i as f64, i, Pauli::Z));
            if i + 1 < n {
                terms.push(PauliTerm::pair(-1.0, i, Pauli::Z, i + 1, Pauli::Z));
            }
        }
        let dense = HermitianOperator::from_terms(n, terms.clone(), Storage::Dense).unwrap();
        let sparse = HermitianOperator::from_terms(n, terms, Storage::Sparse).unwrap();
        let a = lowest_eigenpairs(&dense, 3, DENSE_TOLERANCE).unwrap();
        let b = lowest_eigenpairs(&sparse, 3, ITERATIVE_TOLERANCE).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
        assert!(b.residuals.iter().all(|&r| r <= ITERATIVE_TOLERANCE));
    }

    #[test]
    fn rejects_bad_k() {
        assert!(lowest_eigenpairs(&ising_pair(), 0, 1e-10).is_err());
        assert!(lowest_eigenpairs(&ising_pair(), 5, 1e-10).is_err());
    }
}
