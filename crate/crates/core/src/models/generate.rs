use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

use super::cost::CostFunction;
use super::ising::IsingInstance;

/// Distribution of spin-glass couplings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingRange {
    /// Uniform over {−1, +1}.
    #[default]
    PlusMinusOne,
    /// Uniform on `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
}

impl CouplingRange {
    fn draw(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Self::PlusMinusOne => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Self::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Self::Uniform { lo, hi } = *self {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(invalid("coupling range must satisfy lo < hi"));
            }
        }
        Ok(())
    }
}

/// Edge sets for generators.
pub mod edges {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn chain(n: usize) -> Vec<(usize, usize)> {
        (1..n).map(|i| (i - 1, i)).collect()
    }

    pub fn ring(n: usize) -> Vec<(usize, usize)> {
        let mut e = chain(n);
        if n > 2 {
            e.push((0, n - 1));
        }
        e
    }

    pub fn complete(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    /// Erdős–Rényi graph with edge probability `p`.
    pub fn random(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        complete(n).into_iter().filter(|_| rng.random::<f64>() < p).collect()
    }
}

/// Spin glass on `edges` with zero local fields.
pub fn gen_spin_glass(n: usize, edges: &[(usize, usize)], range: CouplingRange, seed: u64) -> Result<IsingInstance> {
    range.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let couplings: Vec<_> = edges.iter().map(|&e| (e, range.draw(&mut rng))).collect();
    IsingInstance::new(n, couplings, vec![0.0; n])
}

/// Spin glass with random local fields drawn from `field_range` as well.
pub fn gen_random_ising(
    n: usize,
    edges: &[(usize, usize)],
    coupling_range: CouplingRange,
    field_range: CouplingRange,
    seed: u64,
) -> Result<IsingInstance> {
    coupling_range.validate()?;
    field_range.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let couplings: Vec<_> = edges.iter().map(|&e| (e, coupling_range.draw(&mut rng))).collect();
    let fields = (0..n).map(|_| field_range.draw(&mut rng)).collect();
    IsingInstance::new(n, couplings, fields)
}

/// Largest register for the Exact Cover generator.
pub const MAX_EXACT_COVER: usize = 20;
const EXACT_COVER_ATTEMPTS: u64 = 32;

/// A generated Exact Cover instance with a unique satisfying assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCoverInstance {
    pub cost: CostFunction,
    pub clauses: Vec<[usize; 3]>,
    /// Basis index of the unique zero-cost assignment.
    pub solution: usize,
    /// Clauses per variable.
    pub ratio: f64,
    /// Seed that produced the instance (differs from the request after a retry).
    pub seed_used: u64,
    pub attempts: u64,
}

/// Adds random one-in-three clauses until exactly one assignment satisfies
/// them all. A clause that would leave no satisfying assignment is redrawn.
pub fn gen_exact_cover(n: usize, seed: u64) -> Result<ExactCoverInstance> {
    if n < 3 {
        return Err(invalid("exact cover needs at least 3 variables"));
    }
    if n > MAX_EXACT_COVER {
        return Err(Error::TooLarge {
            what: "exact cover variables",
            size: n,
            limit: MAX_EXACT_COVER,
        });
    }
    for attempt in 0..EXACT_COVER_ATTEMPTS {
        let seed_used = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        if let Some((clauses, solution)) = exact_cover_attempt(n, seed_used) {
            let ratio = clauses.len() as f64 / n as f64;
            return Ok(ExactCoverInstance {
                cost: CostFunction::exact_cover(n, clauses.clone())?,
                clauses,
                solution,
                ratio,
                seed_used,
                attempts: attempt + 1,
            });
        }
    }
    Err(invalid(format!(
        "exact cover generation for n = {n} failed after {EXACT_COVER_ATTEMPTS} seeds"
    )))
}

fn exact_cover_attempt(n: usize, seed: u64) -> Option<(Vec<[usize; 3]>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive: Vec<u32> = (0..1u32 << n).collect();
    let mut clauses = Vec::new();
    let budget = 200 * n;
    for _ in 0..budget {
        if alive.len() == 1 {
            return Some((clauses, alive[0] as usize));
        }
        let vars = sample(&mut rng, n, 3);
        let c = [vars.index(0), vars.index(1), vars.index(2)];
        let mask = (1u32 << c[0]) | (1 << c[1]) | (1 << c[2]);
        let kept: Vec<u32> = alive
            .iter()
            .copied()
            .filter(|&b| (b & mask).count_ones() == 1)
            .collect();
        if kept.is_empty() {
            continue;
        }
        alive = kept;
        clauses.push(c);
    }
    (alive.len() == 1).then(|| (clauses, alive[0] as usize))
}

/// Hamming-weight cost families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HammingKind {
    Spike { width: f64, height: f64 },
    VanDam { epsilon: f64 },
}

pub fn gen_hamming_family(kind: HammingKind, n: usize) -> Result<CostFunction> {
    match kind {
        HammingKind::Spike { width, height } => CostFunction::hamming_spike(n, width, height),
        HammingKind::VanDam { epsilon } => CostFunction::van_dam(n, epsilon),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::brute_force_ground;

    #[test]
    fn spin_glass_is_seed_deterministic() {
        let e = edges::complete(5);
        let a = gen_spin_glass(5, &e, CouplingRange::default(), 7).unwrap();
        let b = gen_spin_glass(5, &e, CouplingRange::default(), 7).unwrap();
        assert_eq!(a, b);
        assert!(a.couplings().values().all(|&j| j == 1.0 || j == -1.0));
    }

    #[test]
    fn plus_minus_mean_is_near_zero() {
        let e = edges::complete(142);
        let g = gen_spin_glass(142, &e, CouplingRange::PlusMinusOne, 11).unwrap();
        let m = g.couplings().len() as f64;
        assert!(m >= 1e4);
        let mean: f64 = g.couplings().values().sum::<f64>() / m;
        assert!(mean.abs() < 3.0 / m.sqrt(), "mean {mean}");
    }

    #[test]
    fn exact_cover_has_unique_solution() {
        for seed in 0..5 {
            let inst = gen_exact_cover(8, seed).unwrap();
            let g = brute_force_ground(&inst.cost).unwrap();
            assert_eq!(g.energy, 0.0);
            assert_eq!(g.indices(), vec![inst.solution]);
        }
    }

    #[test]
    fn exact_cover_rejects_tiny_registers() {
        assert!(gen_exact_cover(2, 0).is_err());
    }
}
