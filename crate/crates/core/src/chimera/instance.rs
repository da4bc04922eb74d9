use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::models::{IsingInstance, SpinConfiguration};

use super::embed::MinorEmbedding;
use super::graph::ChimeraGraph;

/// Where a logical coupling goes among the couplers joining two chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CouplerPlacement {
    /// The lexicographically first coupler carries all of `J`.
    #[default]
    First,
    /// `J` is divided evenly over every coupler.
    Split,
}

/// Physical instance on the used hardware vertices, indexed compactly.
#[derive(Clone, Debug)]
pub struct EmbeddedInstance {
    pub instance: IsingInstance,
    /// Hardware vertex of each physical spin.
    pub vertices: Vec<usize>,
    /// Chains in physical-spin indices.
    pub chains: Vec<Vec<usize>>,
    pub chain_strength: f64,
    /// Number of intra-chain couplers.
    pub chain_edges: usize,
}

impl EmbeddedInstance {
    /// Spreads a logical configuration over its chains.
    pub fn embed_config(&self, logical: &SpinConfiguration) -> Result<SpinConfiguration> {
        if logical.len() != self.chains.len() {
            return Err(Error::DimensionMismatch {
                expected: self.chains.len(),
                actual: logical.len(),
            });
        }
        let mut spins = vec![1i8; self.vertices.len()];
        for (v, chain) in self.chains.iter().enumerate() {
            for &p in chain {
                spins[p] = logical.get(v);
            }
        }
        SpinConfiguration::new(spins)
    }
}

/// `2 · max |J|`, or 1 for an instance without couplings.
pub fn default_chain_strength(instance: &IsingInstance) -> f64 {
    let m = instance.max_abs_coupling();
    if m > 0.0 {
        2.0 * m
    } else {
        1.0
    }
}

/// Logical fields are divided equally along each chain and chains are held
/// together by ferromagnetic couplings of `chain_strength` on every coupler
/// inside a chain.
pub fn embed_instance(
    instance: &IsingInstance,
    embedding: &MinorEmbedding,
    hw: &ChimeraGraph,
    chain_strength: Option<f64>,
    placement: CouplerPlacement,
) -> Result<EmbeddedInstance> {
    let n = instance.n();
    embedding.validate(n, &instance.edges(), hw)?;
    let strength = chain_strength.unwrap_or_else(|| default_chain_strength(instance));
    if !(strength > 0.0) || !strength.is_finite() {
        return Err(crate::error::invalid("chain strength must be positive"));
    }
    let mut vertices = Vec::new();
    let mut index = BTreeMap::new();
    let mut chains = Vec::with_capacity(n);
    for chain in embedding.chains() {
        let mut local = Vec::with_capacity(chain.len());
        for &q in chain {
            index.insert(q, vertices.len());
            local.push(vertices.len());
            vertices.push(q);
        }
        chains.push(local);
    }
    let m = vertices.len();
    let mut fields = vec![0.0; m];
    let mut transverse = vec![0.0; m];
    let mut couplings: Vec<((usize, usize), f64)> = Vec::new();
    let mut chain_edges = 0;
    for (v, chain) in embedding.chains().iter().enumerate() {
        let share = instance.fields()[v] / chain.len() as f64;
        let tshare = instance.transverse()[v] / chain.len() as f64;
        for &q in chain {
            fields[index[&q]] = share;
            transverse[index[&q]] = tshare;
        }
        for (a, &p) in chain.iter().enumerate() {
            for &q in &chain[a + 1..] {
                if hw.has_edge(p, q) {
                    couplings.push(((index[&p], index[&q]), strength));
                    chain_edges += 1;
                }
            }
        }
    }
    for (&(a, b), &j) in instance.couplings() {
        let mut couplers: Vec<(usize, usize)> = embedding
            .chain(a)
            .iter()
            .flat_map(|&p| embedding.chain(b).iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| hw.has_edge(p, q))
            .map(|(p, q)| (p.min(q), p.max(q)))
            .collect();
        couplers.sort_unstable();
        let chosen: &[(usize, usize)] = match placement {
            CouplerPlacement::First => &couplers[..1],
            CouplerPlacement::Split => &couplers,
        };
        let share = j / chosen.len() as f64;
        for &(p, q) in chosen {
            couplings.push(((index[&p], index[&q]), share));
        }
    }
    Ok(EmbeddedInstance {
        instance: IsingInstance::with_transverse(m, couplings, fields, transverse)?,
        vertices,
        chains,
        chain_strength: strength,
        chain_edges,
    })
}

/// Majority vote within each chain. A tied chain takes the value with the
/// lower logical energy given the chains decided before it.
pub fn unembed(
    physical: &SpinConfiguration,
    embedded: &EmbeddedInstance,
    logical: &IsingInstance,
) -> Result<SpinConfiguration> {
    if physical.len() != embedded.vertices.len() {
        return Err(Error::DimensionMismatch {
            expected: embedded.vertices.len(),
            actual: physical.len(),
        });
    }
    let mut spins = vec![1i8; embedded.chains.len()];
    let mut ties = Vec::new();
    for (v, chain) in embedded.chains.iter().enumerate() {
        let vote: i64 = chain.iter().map(|&p| i64::from(physical.get(p))).sum();
        match vote.cmp(&0) {
            std::cmp::Ordering::Greater => spins[v] = 1,
            std::cmp::Ordering::Less => spins[v] = -1,
            std::cmp::Ordering::Equal => ties.push(v),
        }
    }
    for v in ties {
        spins[v] = 1;
        let up = logical.energy_unchecked(&spins);
        spins[v] = -1;
        let down = logical.energy_unchecked(&spins);
        spins[v] = if up <= down { 1 } else { -1 };
    }
    SpinConfiguration::new(spins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{brute_force_ground, CostFunction};

    fn ground(inst: &IsingInstance) -> crate::models::GroundTruth {
        brute_force_ground(&CostFunction::ising(inst.clone())).unwrap()
    }

    #[test]
    fn identity_embedding_keeps_instance() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let inst = IsingInstance::new(2, [((0, 1), -0.7)], vec![0.3, -0.2]).unwrap();
        let emb = MinorEmbedding::new(vec![vec![0], vec![4]]);
        let e = embed_instance(&inst, &emb, &hw, None, CouplerPlacement::First).unwrap();
        assert_eq!(e.instance.couplings(), inst.couplings());
        assert_eq!(e.instance.fields(), inst.fields());
        assert_eq!(e.chain_edges, 0);
    }

    #[test]
    fn split_vertex_ground_states_are_aligned() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let inst = IsingInstance::new(3, [((0, 1), 1.0), ((1, 2), -1.0), ((0, 2), 0.5)], vec![0.1, 0.0, -0.3]).unwrap();
        let emb = MinorEmbedding::new(vec![vec![0, 4], vec![5], vec![1]]);
        let e = embed_instance(&inst, &emb, &hw, None, CouplerPlacement::First).unwrap();
        assert_eq!(e.chain_edges, 1);
        let phys = ground(&e.instance);
        let logical = ground(&inst);
        for g in &phys.minimizers {
            assert_eq!(g.get(e.chains[0][0]), g.get(e.chains[0][1]));
            assert!(logical.contains(&unembed(g, &e, &inst).unwrap()));
        }
        let expect = logical.energy - e.chain_strength * e.chain_edges as f64;
        assert!((phys.energy - expect).abs() < 1e-12);
    }

    #[test]
    fn split_placement_conserves_coupling() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let inst = IsingInstance::new(2, [((0, 1), 1.2)], vec![0.0; 2]).unwrap();
        let emb = MinorEmbedding::new(vec![vec![0, 4], vec![1, 5]]);
        let e = embed_instance(&inst, &emb, &hw, Some(3.0), CouplerPlacement::Split).unwrap();
        let inter: f64 = e.instance.couplings().values().filter(|&&j| j != 3.0).sum();
        assert!((inter - 1.2).abs() < 1e-12);
        let logical = SpinConfiguration::new(vec![1, -1]).unwrap();
        let phys = e.embed_config(&logical).unwrap();
        let expect = inst.energy(&logical).unwrap() - 3.0 * e.chain_edges as f64;
        assert!((e.instance.energy(&phys).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn ties_take_the_lower_energy() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let inst = IsingInstance::new(2, [((0, 1), 1.0)], vec![0.0, 0.5]).unwrap();
        let emb = MinorEmbedding::new(vec![vec![0, 4], vec![5]]);
        let e = embed_instance(&inst, &emb, &hw, None, CouplerPlacement::First).unwrap();
        // Chain 0 split evenly, spin 1 down: aligning with it is cheaper.
        let mut phys = vec![1i8; 3];
        phys[e.chains[0][1]] = -1;
        phys[e.chains[1][0]] = -1;
        let out = unembed(&SpinConfiguration::new(phys).unwrap(), &e, &inst).unwrap();
        assert_eq!(out.spins(), &[-1, -1]);
        let aligned = e.embed_config(&SpinConfiguration::new(vec![1, -1]).unwrap()).unwrap();
        assert_eq!(unembed(&aligned, &e, &inst).unwrap().spins(), &[1, -1]);
    }
}
