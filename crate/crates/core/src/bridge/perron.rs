use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::operator::HermitianOperator;

use super::stochastic::StochasticMatrix;

/// Entries of `G = I − H` above `−KERNEL_TOLERANCE` are treated as nonnegative.
const KERNEL_TOLERANCE: f64 = 1e-13;
const MAX_PERRON_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronData {
    /// Top eigenvalue of `G`.
    pub mu: f64,
    /// Perron vector of `G`, unit norm, strictly positive.
    pub alpha: Vec<f64>,
    /// `α_i² / Σ α²`.
    pub limiting: Vec<f64>,
    /// `E₁ − E₀` of `H`.
    pub hamiltonian_gap: f64,
}

impl PerronData {
    /// `ΔH / μ`, the predicted gap of the induced chain.
    pub fn predicted_chain_gap(&self) -> f64 {
        self.hamiltonian_gap / self.mu
    }
}

/// Turns a Hamiltonian with nonnegative primitive kernel `G = I − H` into the
/// chain `P(i → j) = α_j G_ij / (μ α_i)`.
pub fn perron_stochasticize(h: &HermitianOperator) -> Result<(StochasticMatrix, PerronData)> {
    let m = h.dim();
    if m > MAX_PERRON_DIM {
        return Err(Error::TooLarge {
            what: "Perron kernel dimension",
            size: m,
            limit: MAX_PERRON_DIM,
        });
    }
    if !h.is_real() {
        return Err(invalid("Perron stochasticization needs a real Hamiltonian"));
    }
    let hd = h.to_dense().map(|c| c.re);
    let g = DMatrix::from_fn(m, m, |i, j| if i == j { 1.0 } else { 0.0 } - hd[(i, j)]);
    for j in 0..m {
        for i in 0..m {
            if g[(i, j)] < -KERNEL_TOLERANCE {
                return Err(Error::NegativeKernel {
                    row: i,
                    col: j,
                    value: g[(i, j)],
                });
            }
        }
    }
    let g = g.map(|v| v.max(0.0));
    if !is_primitive(&g) {
        return Err(Error::Reducible);
    }
    let eig = g.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mu = eig.eigenvalues[order[0]];
    if !(mu > 0.0) {
        return Err(invalid(format!("Perron root {mu} is not positive")));
    }
    let hamiltonian_gap = if m > 1 { mu - eig.eigenvalues[order[1]] } else { 0.0 };
    let v = eig.eigenvectors.column(order[0]);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let alpha: Vec<f64> = v.iter().map(|x| sign * x).collect();
    if let Some(bad) = alpha.iter().find(|&&a| !(a > 0.0)) {
        return Err(invalid(format!("Perron vector has non-positive entry {bad}")));
    }
    let z: f64 = alpha.iter().map(|a| a * a).sum();
    let limiting = alpha.iter().map(|a| a * a / z).collect();
    let rows = DMatrix::from_fn(m, m, |i, j| alpha[j] * g[(i, j)] / (mu * alpha[i]));
    // remove rounding so columns of the stored form sum to one
    let rows = DMatrix::from_fn(m, m, |i, j| rows[(i, j)] / rows.row(i).sum());
    let p = StochasticMatrix::from_row_stochastic(&rows)?;
    Ok((
        p,
        PerronData {
            mu,
            alpha,
            limiting,
            hamiltonian_gap,
        },
    ))
}

/// Symmetric nonnegative `g` is primitive iff its graph is connected and
/// either has a self-loop or is not bipartite.
fn is_primitive(g: &DMatrix<f64>) -> bool {
    let m = g.nrows();
    if m == 0 {
        return false;
    }
    let mut colour = vec![-1i8; m];
    colour[0] = 0;
    let mut stack = vec![0];
    let mut bipartite = true;
    let mut seen = 1;
    while let Some(i) = stack.pop() {
        for j in 0..m {
            if i == j || g[(i, j)] <= 0.0 {
                continue;
            }
            if colour[j] < 0 {
                colour[j] = 1 - colour[i];
                seen += 1;
                stack.push(j);
            } else if colour[j] == colour[i] {
                bipartite = false;
            }
        }
    }
    let self_loop = (0..m).any(|i| g[(i, i)] > 0.0);
    seen == m && (self_loop || !bipartite)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_of_one_minus_sigma_x() {
        let h = HermitianOperator::from_real_dense(&DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5])).unwrap();
        let (p, d) = perron_stochasticize(&h).unwrap();
        assert!((d.mu - 1.0).abs() < 1e-14);
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.transition(i, j) - 0.5).abs() < 1e-14);
            }
            assert!((d.limiting[i] - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_hamiltonian_is_reducible() {
        let h = HermitianOperator::zeros(2).unwrap();
        assert!(matches!(perron_stochasticize(&h), Err(Error::Reducible)));
    }

    #[test]
    fn positive_off_diagonal_is_rejected() {
        let h = HermitianOperator::from_real_dense(&DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        assert!(matches!(perron_stochasticize(&h), Err(Error::NegativeKernel { .. })));
    }
}
