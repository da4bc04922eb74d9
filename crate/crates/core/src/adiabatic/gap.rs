use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::operator::{lowest_eigenpairs, StateVector, DENSE_TOLERANCE, ITERATIVE_TOLERANCE};

use super::path::InterpolationPath;

/// Gaps at or below this are treated as a level crossing.
pub const GAP_FLOOR: f64 = 1e-9;

/// Low spectrum of `H(s)` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GapProfile {
    pub s: Vec<f64>,
    /// Lowest `k ≥ 2` eigenvalues at each grid point.
    pub levels: Vec<Vec<f64>>,
    /// `Δ10(s) = E1 − E0`.
    pub gap: Vec<f64>,
    /// `m(s) = |⟨1(s)| dH/ds |0(s)⟩|`.
    pub matrix_element: Vec<f64>,
}

impl GapProfile {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `(s, Δ10)` at the smallest gap.
    pub fn min_gap(&self) -> Option<(f64, f64)> {
        self.gap
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &g)| (self.s[i], g))
    }

    pub fn max_matrix_element(&self) -> Option<f64> {
        self.matrix_element.iter().copied().reduce(f64::max)
    }

    /// Columns `s,E0,E1,gap,m`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,E0,E1,gap,m\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                self.s[i], self.levels[i][0], self.levels[i][1], self.gap[i], self.matrix_element[i]
            );
        }
        out
    }
}

/// Evenly spaced grid of `points` values covering `[0, 1]`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 / (points - 1) as f64).collect()
}

pub fn gap_profile(path: &InterpolationPath, points: usize) -> Result<GapProfile> {
    if points < 3 {
        return Err(invalid("gap profile needs at least 3 grid points"));
    }
    gap_profile_on(path, &uniform_grid(points), 2)
}

/// Profile on an explicit ascending grid with `k` tracked levels.
pub fn gap_profile_on(path: &InterpolationPath, grid: &[f64], k: usize) -> Result<GapProfile> {
    if k < 2 || k > path.dim() {
        return Err(invalid(format!(
            "cannot track {k} levels of a {}-dimensional path",
            path.dim()
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(invalid("grid must be strictly ascending within [0, 1]"));
    }
    let dh = path.derivative()?;
    let rows: Vec<(Vec<f64>, f64)> = grid
        .par_iter()
        .map(|&s| {
            let at = |e: Error| Error::AtParameter { s, source: Box::new(e) };
            let h = path.at_s(s).map_err(at)?;
            let tol = if h.is_dense() {
                DENSE_TOLERANCE
            } else {
                ITERATIVE_TOLERANCE
            };
            let spec = lowest_eigenpairs(&h, k, tol).map_err(at)?;
            let image = dh.apply_state(&spec.eigenvectors[0]).map_err(at)?;
            let m = spec.eigenvectors[1].inner(&image).norm();
            Ok((spec.eigenvalues, m))
        })
        .collect::<Result<_>>()?;
    let (levels, matrix_element): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
    let gap = levels.iter().map(|l| (l[1] - l[0]).max(0.0)).collect();
    Ok(GapProfile {
        s: grid.to_vec(),
        levels,
        gap,
        matrix_element,
    })
}

/// `max m(s) / (min Δ10(s))²`. Multiply by a safety factor before use.
pub fn adiabatic_time_estimate(profile: &GapProfile) -> Result<f64> {
    let (at, gmin) = profile.min_gap().ok_or_else(|| invalid("empty gap profile"))?;
    if gmin <= GAP_FLOOR {
        return Err(Error::GapClosed {
            gap: gmin,
            floor: GAP_FLOOR,
            at: Some(at),
        });
    }
    let m = profile.max_matrix_element().unwrap_or(0.0);
    Ok(m / (gmin * gmin))
}

/// `χ_i(s) = ∂⟨σ^z_i⟩/∂s` in the instantaneous ground state, by central
/// difference with step `ds`.
pub fn susceptibility(path: &InterpolationPath, qubit: usize, s: f64, ds: f64) -> Result<f64> {
    if !(ds > 0.0) || s - ds < 0.0 || s + ds > 1.0 {
        return Err(invalid("need 0 ≤ s − ds and s + ds ≤ 1 with ds > 0"));
    }
    let z = |s: f64| -> Result<f64> {
        let psi = nondegenerate_ground(path, s)?;
        if psi.n_qubits().is_none_or(|n| qubit >= n) {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: psi.n_qubits().unwrap_or(0),
            });
        }
        Ok(psi.z_expectation(qubit))
    };
    Ok((z(s + ds)? - z(s - ds)?) / (2.0 * ds))
}

fn nondegenerate_ground(path: &InterpolationPath, s: f64) -> Result<StateVector> {
    let h = path.at_s(s)?;
    let tol = if h.is_dense() {
        DENSE_TOLERANCE
    } else {
        ITERATIVE_TOLERANCE
    };
    let spec = lowest_eigenpairs(&h, 2, tol)?;
    let gap = spec.gap().unwrap_or(f64::INFINITY);
    if gap <= crate::operator::DEGENERACY_TOLERANCE {
        return Err(Error::AtParameter {
            s,
            source: Box::new(Error::Degenerate {
                what: "instantaneous ground state",
                gap,
            }),
        });
    }
    Ok(spec.eigenvectors.into_iter().next().expect("k = 2"))
}

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;

    use super::*;
    use crate::models::IsingInstance;
    use crate::operator::HermitianOperator;

    pub(crate) fn one_qubit_path(tau: f64) -> InterpolationPath {
        let h0 = HermitianOperator::from_real_dense(&DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5])).unwrap();
        let ht = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        InterpolationPath::linear(h0, ht, tau).unwrap()
    }

    #[test]
    fn one_qubit_gap_matches_closed_form() {
        let p = gap_profile(&one_qubit_path(1.0), 101).unwrap();
        for (i, &s) in p.s.iter().enumerate() {
            let r = ((1.0 - s) * (1.0 - s) + s * s).sqrt();
            assert!((p.gap[i] - r).abs() < 1e-12);
            let m = (0.5 - (1.0 - 2.0 * s).powi(2) / (4.0 * r * r)).sqrt();
            assert!((p.matrix_element[i] - m).abs() < 1e-10);
        }
        let (s, g) = p.min_gap().unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (g - 0.5f64.sqrt()).abs() < 1e-12);
        let est = adiabatic_time_estimate(&p).unwrap();
        assert!((est - 2.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn constant_path_has_zero_estimate() {
        let h = HermitianOperator::diagonal_from(&[0.0, 1.0, 3.0]).unwrap();
        let p = gap_profile(&InterpolationPath::linear(h.clone(), h, 1.0).unwrap(), 5).unwrap();
        assert!(p.gap.iter().all(|&g| (g - 1.0).abs() < 1e-14));
        assert!(p.matrix_element.iter().all(|&m| m == 0.0));
        assert_eq!(adiabatic_time_estimate(&p).unwrap(), 0.0);
    }

    #[test]
    fn halving_gaps_quadruples_estimate() {
        let mut p = gap_profile(&one_qubit_path(1.0), 11).unwrap();
        let e = adiabatic_time_estimate(&p).unwrap();
        p.gap.iter_mut().for_each(|g| *g /= 2.0);
        assert!((adiabatic_time_estimate(&p).unwrap() - 4.0 * e).abs() < 1e-12 * e);
    }

    #[test]
    fn closed_gap_is_reported() {
        let inst = IsingInstance::new(2, [((0, 1), 1.0)], vec![0.0; 2]).unwrap();
        let p = gap_profile(&InterpolationPath::transverse_field(&inst, 1.0).unwrap(), 5).unwrap();
        assert!(matches!(
            adiabatic_time_estimate(&p),
            Err(Error::GapClosed { at: Some(s), .. }) if s == 1.0
        ));
    }

    #[test]
    fn one_qubit_susceptibility() {
        let inst = IsingInstance::new(1, [], vec![1.0]).unwrap();
        let path = InterpolationPath::transverse_field(&inst, 1.0).unwrap();
        let chi = susceptibility(&path, 0, 0.5, 1e-4).unwrap();
        let r = 0.5f64.sqrt();
        assert!((chi - 0.5 / (r * r * r)).abs() < 1e-6);
        let flat = InterpolationPath::linear(path.ht().clone(), path.ht().clone(), 1.0).unwrap();
        assert_eq!(susceptibility(&flat, 0, 0.5, 1e-3).unwrap(), 0.0);
    }

    #[test]
    fn symmetric_instance_has_zero_susceptibility() {
        let inst = IsingInstance::new(3, [((0, 1), 1.0), ((1, 2), -0.5)], vec![0.0; 3]).unwrap();
        let path = InterpolationPath::transverse_field(&inst, 1.0).unwrap();
        assert!(susceptibility(&path, 1, 0.4, 1e-3).unwrap().abs() < 1e-10);
    }
}
