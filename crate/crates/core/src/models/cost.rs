use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operator::HermitianOperator;

use super::ising::{IsingInstance, SpinConfiguration};

/// Largest register enumerated by [`brute_force_ground`].
pub const MAX_BRUTE_FORCE: usize = 24;
/// Energies within this distance of the minimum count as minimizers.
pub const GROUND_TOLERANCE: f64 = 1e-9;

/// Which closed-form family a cost belongs to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CostFamily {
    Ising(IsingInstance),
    /// `|z|` plus `height` wherever `||z| − n/4| < width`.
    HammingSpike {
        width: f64,
        height: f64,
    },
    /// `|z|` below `(1+ε)n/2`, otherwise −1.
    VanDam {
        epsilon: f64,
    },
    /// `Σ_c (x_i + x_j + x_k − 1)²` with `x = 1` on −1 spins.
    ExactCover {
        clauses: Vec<[usize; 3]>,
    },
    /// Explicit energy per basis index.
    Table {
        values: Vec<f64>,
    },
}

/// A total, deterministic function on the `2^n` spin configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostFunction {
    n: usize,
    family: CostFamily,
}

impl CostFunction {
    pub fn ising(instance: IsingInstance) -> Self {
        Self {
            n: instance.n(),
            family: CostFamily::Ising(instance),
        }
    }

    pub fn hamming_spike(n: usize, width: f64, height: f64) -> Result<Self> {
        if !(width >= 0.0) || !height.is_finite() {
            return Err(invalid("spike width must be non-negative and height finite"));
        }
        Ok(Self {
            n,
            family: CostFamily::HammingSpike { width, height },
        })
    }

    pub fn van_dam(n: usize, epsilon: f64) -> Result<Self> {
        if !epsilon.is_finite() {
            return Err(invalid("epsilon must be finite"));
        }
        Ok(Self {
            n,
            family: CostFamily::VanDam { epsilon },
        })
    }

    pub fn exact_cover(n: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        for c in &clauses {
            if c.iter().any(|&v| v >= n) {
                return Err(invalid(format!("clause {c:?} references a variable ≥ {n}")));
            }
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(invalid(format!("clause {c:?} repeats a variable")));
            }
        }
        Ok(Self {
            n,
            family: CostFamily::ExactCover { clauses },
        })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if !values.len().is_power_of_two() {
            return Err(invalid("table length must be a power of two"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("table contains non-finite values"));
        }
        Ok(Self {
            n: values.len().trailing_zeros() as usize,
            family: CostFamily::Table { values },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &CostFamily {
        &self.family
    }

    pub fn family_tag(&self) -> &'static str {
        match self.family {
            CostFamily::Ising(_) => "ising",
            CostFamily::HammingSpike { .. } => "hamming-spike",
            CostFamily::VanDam { .. } => "van-dam",
            CostFamily::ExactCover { .. } => "exact-cover",
            CostFamily::Table { .. } => "table",
        }
    }

    pub fn as_ising(&self) -> Option<&IsingInstance> {
        match &self.family {
            CostFamily::Ising(inst) => Some(inst),
            _ => None,
        }
    }

    pub fn evaluate(&self, config: &SpinConfiguration) -> Result<f64> {
        if config.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: config.len(),
            });
        }
        Ok(match &self.family {
            CostFamily::Ising(inst) => inst.energy_unchecked(config.spins()),
            _ => self.evaluate_index(config.to_index()),
        })
    }

    /// Energy of the basis state `index` (bit `i` set ↔ spin `i` is −1).
    pub fn evaluate_index(&self, index: usize) -> f64 {
        let weight = (index.count_ones()) as f64;
        let n = self.n as f64;
        match &self.family {
            CostFamily::Ising(inst) => ising_energy_index(inst, index),
            CostFamily::HammingSpike { width, height } => {
                if (weight - n / 4.0).abs() < *width {
                    weight + height
                } else {
                    weight
                }
            }
            CostFamily::VanDam { epsilon } => {
                if weight < (1.0 + epsilon) * n / 2.0 {
                    weight
                } else {
                    -1.0
                }
            }
            CostFamily::ExactCover { clauses } => clauses
                .iter()
                .map(|c| {
                    let s: i64 = c.iter().map(|&v| ((index >> v) & 1) as i64).sum();
                    ((s - 1) * (s - 1)) as f64
                })
                .sum(),
            CostFamily::Table { values } => values[index],
        }
    }

    /// Energies of all `2^n` basis states.
    pub fn energies(&self) -> Result<Vec<f64>> {
        if self.n > MAX_BRUTE_FORCE {
            return Err(Error::TooLarge {
                what: "energy table qubits",
                size: self.n,
                limit: MAX_BRUTE_FORCE,
            });
        }
        Ok((0..1usize << self.n)
            .into_par_iter()
            .map(|b| self.evaluate_index(b))
            .collect())
    }

    /// Diagonal operator carrying the cost in the computational basis.
    pub fn cost_hamiltonian(&self) -> Result<HermitianOperator> {
        match &self.family {
            CostFamily::Ising(inst) => inst.problem_hamiltonian(),
            _ => HermitianOperator::diagonal_from(&self.energies()?),
        }
    }
}

fn ising_energy_index(inst: &IsingInstance, index: usize) -> f64 {
    let spin = |i: usize| if (index >> i) & 1 == 0 { 1.0 } else { -1.0 };
    let pair: f64 = inst.couplings().iter().map(|(&(i, j), &v)| v * spin(i) * spin(j)).sum();
    let single: f64 = inst.fields().iter().enumerate().map(|(i, h)| h * spin(i)).sum();
    -pair - single
}

/// Exact minimum and every configuration within [`GROUND_TOLERANCE`] of it.
#[derive(Clone, Debug, PartialEq)]
pub struct GroundTruth {
    pub energy: f64,
    pub minimizers: Vec<SpinConfiguration>,
}

impl GroundTruth {
    pub fn contains(&self, config: &SpinConfiguration) -> bool {
        self.minimizers.iter().any(|m| m == config)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.minimizers.iter().map(|m| m.to_index()).collect()
    }
}

pub fn brute_force_ground(cost: &CostFunction) -> Result<GroundTruth> {
    let n = cost.n();
    if n > MAX_BRUTE_FORCE {
        return Err(Error::TooLarge {
            what: "brute-force qubits",
            size: n,
            limit: MAX_BRUTE_FORCE,
        });
    }
    let dim = 1usize << n;
    let energy = (0..dim)
        .into_par_iter()
        .map(|b| cost.evaluate_index(b))
        .reduce(|| f64::INFINITY, f64::min);
    let mut idx: Vec<usize> = (0..dim)
        .into_par_iter()
        .filter(|&b| cost.evaluate_index(b) - energy <= GROUND_TOLERANCE)
        .collect();
    idx.sort_unstable();
    Ok(GroundTruth {
        energy,
        minimizers: idx.into_iter().map(|b| SpinConfiguration::from_index(n, b)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ferromagnetic_chain_has_two_minimizers() {
        let inst = IsingInstance::new(4, (0..3).map(|i| ((i, i + 1), 1.0)), vec![0.0; 4]).unwrap();
        let g = brute_force_ground(&CostFunction::ising(inst)).unwrap();
        assert_eq!(g.energy, -3.0);
        assert_eq!(g.indices(), vec![0, 15]);
    }

    #[test]
    fn zero_cost_minimizers_are_everything() {
        let g = brute_force_ground(&CostFunction::ising(IsingInstance::zero(3))).unwrap();
        assert_eq!(g.minimizers.len(), 8);
    }

    #[test]
    fn field_breaks_the_tie() {
        let inst = IsingInstance::new(2, [((0, 1), 1.0)], vec![0.5, 0.0]).unwrap();
        let g = brute_force_ground(&CostFunction::ising(inst)).unwrap();
        assert_eq!(g.minimizers, vec![SpinConfiguration::all_up(2)]);
        assert_eq!(g.energy, -1.5);
    }

    #[test]
    fn van_dam_small_case() {
        let f = CostFunction::van_dam(4, 0.0).unwrap();
        assert_eq!(f.evaluate_index(0b0000), 0.0);
        assert_eq!(f.evaluate_index(0b0011), -1.0);
        assert_eq!(f.evaluate_index(0b0001), 1.0);
        assert_eq!(brute_force_ground(&f).unwrap().energy, -1.0);
    }

    #[test]
    fn flat_spike_is_hamming_weight() {
        let f = CostFunction::hamming_spike(6, 1.5, 0.0).unwrap();
        for b in 0..64usize {
            assert_eq!(f.evaluate_index(b), b.count_ones() as f64);
        }
        let g = CostFunction::hamming_spike(8, 0.5, 5.0).unwrap();
        assert_eq!(g.evaluate_index(0b11), 7.0);
        assert_eq!(g.evaluate_index(0b111), 3.0);
    }

    #[test]
    fn exact_cover_penalty() {
        let f = CostFunction::exact_cover(3, vec![[0, 1, 2]]).unwrap();
        assert_eq!(f.evaluate_index(0b000), 1.0);
        assert_eq!(f.evaluate_index(0b010), 0.0);
        assert_eq!(f.evaluate_index(0b111), 4.0);
        assert!(CostFunction::exact_cover(3, vec![[0, 0, 2]]).is_err());
        assert!(CostFunction::exact_cover(3, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn cost_hamiltonian_matches_table() {
        let f = CostFunction::table(vec![3.0, -1.0, 2.0, 0.5]).unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.cost_hamiltonian().unwrap().diagonal(), vec![3.0, -1.0, 2.0, 0.5]);
        assert!(CostFunction::table(vec![1.0; 3]).is_err());
    }

    #[test]
    fn too_large_is_rejected() {
        let f = CostFunction::van_dam(30, 0.0).unwrap();
        assert!(matches!(brute_force_ground(&f), Err(Error::TooLarge { .. })));
    }
}
