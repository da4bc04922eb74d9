use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operator::{build_operator, HermitianOperator, Pauli, PauliTerm};

/// A configuration of ±1 spins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinConfiguration(Vec<i8>);

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(invalid(format!("spin value {bad} is not ±1")));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Spin `i` is +1 when bit `i` of `index` is 0 (|0⟩ ↔ σ = +1).
    pub fn from_index(n: usize, index: usize) -> Self {
        Self((0..n).map(|i| if (index >> i) & 1 == 0 { 1 } else { -1 }).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == -1)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// Number of −1 spins (bits set to 1).
    pub fn hamming_weight(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

/// `H_0 = −Σ_{i<j} J_ij σ_i σ_j − Σ_i h_i σ_i` with transverse strengths `Δ_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsingInstance {
    n: usize,
    couplings: BTreeMap<(usize, usize), f64>,
    fields: Vec<f64>,
    transverse: Vec<f64>,
}

impl IsingInstance {
    pub fn new(n: usize, couplings: impl IntoIterator<Item = ((usize, usize), f64)>, fields: Vec<f64>) -> Result<Self> {
        Self::with_transverse(n, couplings, fields, vec![1.0; n])
    }

    pub fn with_transverse(
        n: usize,
        couplings: impl IntoIterator<Item = ((usize, usize), f64)>,
        fields: Vec<f64>,
        transverse: Vec<f64>,
    ) -> Result<Self> {
        if fields.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: fields.len(),
            });
        }
        if transverse.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: transverse.len(),
            });
        }
        if fields.iter().chain(&transverse).any(|v| !v.is_finite()) {
            return Err(invalid("non-finite field value"));
        }
        let mut map = BTreeMap::new();
        for ((i, j), v) in couplings {
            if i == j {
                return Err(invalid(format!("self-coupling on spin {i}")));
            }
            let key = (i.min(j), i.max(j));
            if key.1 >= n {
                return Err(Error::QubitOutOfRange {
                    index: key.1,
                    n_qubits: n,
                });
            }
            if !v.is_finite() {
                return Err(invalid("non-finite coupling"));
            }
            *map.entry(key).or_insert(0.0) += v;
        }
        Ok(Self {
            n,
            couplings: map,
            fields,
            transverse,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, [], vec![0.0; n]).expect("valid zero instance")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn transverse(&self) -> &[f64] {
        &self.transverse
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.couplings.keys().copied().collect()
    }

    /// Neighbour lists with coupling values.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(i, j), &v) in &self.couplings {
            adj[i].push((j, v));
            adj[j].push((i, v));
        }
        adj
    }

    pub fn max_abs_coupling(&self) -> f64 {
        self.couplings.values().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn energy(&self, config: &SpinConfiguration) -> Result<f64> {
        if config.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: config.len(),
            });
        }
        Ok(self.energy_unchecked(config.spins()))
    }

    pub(crate) fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let pair: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), &v)| v * f64::from(s[i] * s[j]))
            .sum();
        let single: f64 = self.fields.iter().zip(s).map(|(h, &si)| h * f64::from(si)).sum();
        -pair - single
    }

    /// Diagonal operator whose entry at basis state `b` is the energy of
    /// `SpinConfiguration::from_index(n, b)`.
    pub fn problem_hamiltonian(&self) -> Result<HermitianOperator> {
        let mut terms = Vec::new();
        for (&(i, j), &v) in &self.couplings {
            terms.push(PauliTerm::pair(-v, i, Pauli::Z, j, Pauli::Z));
        }
        for (i, &h) in self.fields.iter().enumerate() {
            if h != 0.0 {
                terms.push(PauliTerm::single(-h, i, Pauli::Z));
            }
        }
        build_operator(self.n, terms)
    }

    /// `Σ_i Δ_i σ^x_i`.
    pub fn driver_hamiltonian(&self) -> Result<HermitianOperator> {
        let terms = self
            .transverse
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0.0)
            .map(|(i, &d)| PauliTerm::single(d, i, Pauli::X))
            .collect();
        build_operator(self.n, terms)
    }
}

/// `Σ h_i Z_i + Σ Δ_i X_i + Σ J_ij Z_i Z_j + Σ K_ij X_i X_j`.
pub fn zzxx_hamiltonian(
    n: usize,
    h: &[f64],
    delta: &[f64],
    j: &[((usize, usize), f64)],
    k: &[((usize, usize), f64)],
) -> Result<HermitianOperator> {
    let mut terms = two_local_singles(n, h, delta)?;
    terms.extend(
        j.iter()
            .map(|&((a, b), v)| PauliTerm::pair(v, a, Pauli::Z, b, Pauli::Z)),
    );
    terms.extend(
        k.iter()
            .map(|&((a, b), v)| PauliTerm::pair(v, a, Pauli::X, b, Pauli::X)),
    );
    build_operator(n, terms)
}

/// `Σ h_i Z_i + Σ Δ_i X_i + Σ_{i<j} J_ij Z_i X_j + Σ_{i<j} K_ij X_i Z_j`.
pub fn zx_hamiltonian(
    n: usize,
    h: &[f64],
    delta: &[f64],
    j: &[((usize, usize), f64)],
    k: &[((usize, usize), f64)],
) -> Result<HermitianOperator> {
    let mut terms = two_local_singles(n, h, delta)?;
    for &((a, b), v) in j {
        if a >= b {
            return Err(invalid("ZX couplings require i < j"));
        }
        terms.push(PauliTerm::pair(v, a, Pauli::Z, b, Pauli::X));
    }
    for &((a, b), v) in k {
        if a >= b {
            return Err(invalid("XZ couplings require i < j"));
        }
        terms.push(PauliTerm::pair(v, a, Pauli::X, b, Pauli::Z));
    }
    build_operator(n, terms)
}

fn two_local_singles(n: usize, h: &[f64], delta: &[f64]) -> Result<Vec<PauliTerm>> {
    if h.len() != n || delta.len() != n {
        return Err(invalid("field arrays must have one entry per qubit"));
    }
    let mut terms = Vec::new();
    for i in 0..n {
        terms.push(PauliTerm::single(h[i], i, Pauli::Z));
        terms.push(PauliTerm::single(delta[i], i, Pauli::X));
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_energy() {
        let inst = IsingInstance::new(2, [((0, 1), 1.0)], vec![0.0, 0.0]).unwrap();
        let up = SpinConfiguration::all_up(2);
        assert_eq!(inst.energy(&up).unwrap(), -1.0);
    }

    #[test]
    fn zero_instance_has_zero_energy_everywhere() {
        let inst = IsingInstance::zero(3);
        for b in 0..8 {
            assert_eq!(inst.energy(&SpinConfiguration::from_index(3, b)).unwrap(), 0.0);
        }
        let h = inst.problem_hamiltonian().unwrap();
        assert!(h.diagonal().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_field_is_minus_sigma_z() {
        let inst = IsingInstance::new(1, [], vec![1.0]).unwrap();
        assert_eq!(inst.problem_hamiltonian().unwrap().diagonal(), vec![-1.0, 1.0]);
    }

    #[test]
    fn driver_for_one_qubit_is_sigma_x() {
        let inst = IsingInstance::zero(1);
        let d = inst.driver_hamiltonian().unwrap();
        assert_eq!(d.get(0, 1).re, 1.0);
        assert_eq!(d.get(0, 0).re, 0.0);
        let off = IsingInstance::with_transverse(2, [], vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert!(off
            .driver_hamiltonian()
            .unwrap()
            .to_dense()
            .iter()
            .all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(IsingInstance::new(2, [((0, 0), 1.0)], vec![0.0; 2]).is_err());
        assert!(IsingInstance::new(2, [((0, 2), 1.0)], vec![0.0; 2]).is_err());
        assert!(IsingInstance::new(2, [], vec![0.0; 3]).is_err());
        assert!(SpinConfiguration::new(vec![1, 0]).is_err());
        let inst = IsingInstance::zero(2);
        assert!(inst.energy(&SpinConfiguration::all_up(3)).is_err());
    }

    #[test]
    fn index_round_trip() {
        for b in 0..16 {
            assert_eq!(SpinConfiguration::from_index(4, b).to_index(), b);
        }
    }

    #[test]
    fn zx_family_is_hermitian() {
        let h = zx_hamiltonian(
            3,
            &[0.1, -0.2, 0.3],
            &[1.0, 0.5, 0.2],
            &[((0, 1), 0.7), ((1, 2), -0.3)],
            &[((0, 2), 0.4)],
        )
        .unwrap();
        assert!(h.max_asymmetry() <= 1e-12);
        assert!(zx_hamiltonian(2, &[0.0; 2], &[0.0; 2], &[((1, 0), 1.0)], &[]).is_err());
    }
}
