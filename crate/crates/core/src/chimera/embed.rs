use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

use super::graph::ChimeraGraph;

/// Logical vertex `v` is represented by the physical vertices `chains[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorEmbedding {
    chains: Vec<Vec<usize>>,
}

/// Size of an embedding next to the `|G|²` rule of thumb.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingStats {
    pub logical: usize,
    pub physical: usize,
    pub max_chain: usize,
    pub guidance: usize,
}

impl MinorEmbedding {
    /// Chains are sorted and deduplicated; validity is checked by [`Self::validate`].
    pub fn new(chains: Vec<Vec<usize>>) -> Self {
        let chains = chains
            .into_iter()
            .map(|c| c.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        Self { chains }
    }

    pub fn chains(&self) -> &[Vec<usize>] {
        &self.chains
    }

    pub fn chain(&self, v: usize) -> &[usize] {
        &self.chains[v]
    }

    pub fn n_logical(&self) -> usize {
        self.chains.len()
    }

    pub fn physical_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    pub fn stats(&self) -> EmbeddingStats {
        EmbeddingStats {
            logical: self.chains.len(),
            physical: self.physical_count(),
            max_chain: self.chains.iter().map(Vec::len).max().unwrap_or(0),
            guidance: self.chains.len() * self.chains.len(),
        }
    }

    /// Checks non-empty, in-range, disjoint, connected chains and that every
    /// logical edge has a physical edge between its two chains.
    pub fn validate(&self, n: usize, edges: &[(usize, usize)], hw: &ChimeraGraph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidEmbedding(m));
        if self.chains.len() != n {
            return bad(format!("{} chains for {n} logical vertices", self.chains.len()));
        }
        let mut owner = vec![usize::MAX; hw.len()];
        for (v, chain) in self.chains.iter().enumerate() {
            if chain.is_empty() {
                return bad(format!("chain {v} is empty"));
            }
            for &q in chain {
                if q >= hw.len() {
                    return bad(format!("chain {v} uses vertex {q} outside the hardware graph"));
                }
                if owner[q] != usize::MAX {
                    return bad(format!("vertex {q} is shared by chains {} and {v}", owner[q]));
                }
                owner[q] = v;
            }
            if !connected(chain, hw) {
                return bad(format!("chain {v} is not connected"));
            }
        }
        for &(a, b) in edges {
            if a >= n || b >= n {
                return bad(format!("logical edge ({a}, {b}) out of range"));
            }
            if !chains_touch(&self.chains[a], &self.chains[b], hw) {
                return bad(format!("logical edge ({a}, {b}) has no physical coupler"));
            }
        }
        Ok(())
    }

    /// One `v: q1 q2 …` line per logical vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, chain) in self.chains.iter().enumerate() {
            let qs: Vec<String> = chain.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{v}: {}", qs.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut chains = Vec::new();
        for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let perr = |column: usize, message: String| Error::Parse {
                line: k + 1,
                column,
                message,
            };
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| perr(1, "expected `v: q1 q2 …`".into()))?;
            let v: usize = head
                .trim()
                .parse()
                .map_err(|_| perr(1, format!("invalid logical vertex {head:?}")))?;
            if v != chains.len() {
                return Err(perr(1, format!("expected logical vertex {}, got {v}", chains.len())));
            }
            let chain = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| perr(head.len() + 2, format!("invalid vertex {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            chains.push(chain);
        }
        Ok(Self::new(chains))
    }
}

fn connected(chain: &[usize], hw: &ChimeraGraph) -> bool {
    let Some(&start) = chain.first() else {
        return false;
    };
    let members: BTreeSet<usize> = chain.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(q) = stack.pop() {
        for &r in hw.neighbors(q) {
            if members.contains(&r) && seen.insert(r) {
                stack.push(r);
            }
        }
    }
    seen.len() == members.len()
}

fn chains_touch(a: &[usize], b: &[usize], hw: &ChimeraGraph) -> bool {
    a.iter().any(|&p| b.iter().any(|&q| hw.has_edge(p, q)))
}

#[derive(Clone, Debug)]
pub struct EmbedOptions {
    /// Independent randomized attempts, run in parallel.
    pub restarts: usize,
    /// Rip-up-and-reroute passes per attempt.
    pub rounds: usize,
    pub seed: u64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            rounds: 40,
            seed: 0,
        }
    }
}

/// Checks that `edges` form a simple graph on `n` vertices and returns the
/// adjacency lists.
pub fn logical_adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(invalid(format!("edge ({a}, {b}) out of range for {n} vertices")));
        }
        if a == b {
            return Err(invalid(format!("self-loop at {a}")));
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    Ok(adj.into_iter().map(|s| s.into_iter().collect()).collect())
}

/// Randomized chain growth: each logical vertex is placed at the root that
/// minimizes the summed weighted distance to its placed neighbours. Chains
/// may overlap; every round rips up and reroutes all chains with vertex
/// weights `(1 + history)·(1 + pressure·usage)`, where `pressure` grows each
/// round and `history` accumulates past overuse, until chains are disjoint.
pub fn find_embedding(
    n: usize,
    edges: &[(usize, usize)],
    hw: &ChimeraGraph,
    options: &EmbedOptions,
) -> Result<MinorEmbedding> {
    if n > hw.len() {
        return Err(Error::TooLarge {
            what: "logical vertices",
            size: n,
            limit: hw.len(),
        });
    }
    let adj = logical_adjacency(n, edges)?;
    if options.restarts == 0 {
        return Err(invalid("at least one restart is required"));
    }
    // Restarts run in fixed-size parallel batches; the lowest-numbered
    // success wins, so the result does not depend on the thread count.
    let mut best_overlap = usize::MAX;
    let indices: Vec<usize> = (0..options.restarts).collect();
    for batch in indices.chunks(RESTART_BATCH) {
        let outcomes: Vec<std::result::Result<MinorEmbedding, usize>> = batch
            .par_iter()
            .map(|&k| {
                let seed = options
                    .seed
                    .wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                attempt(&adj, hw, options.rounds, seed)
            })
            .collect();
        for outcome in outcomes {
            match outcome {
                Ok(emb) => {
                    emb.validate(n, edges, hw)?;
                    return Ok(emb);
                }
                Err(overlap) => best_overlap = best_overlap.min(overlap),
            }
        }
    }
    Err(Error::EmbeddingFailed {
        attempts: options.restarts,
        best_overlap,
    })
}

const RESTART_BATCH: usize = 4;

#[derive(Clone, Copy, PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    hw: &'a ChimeraGraph,
    chains: Vec<Vec<usize>>,
    usage: Vec<u32>,
    history: Vec<f64>,
    pressure: f64,
}

impl Search<'_> {
    fn weight(&self, q: usize) -> f64 {
        (1.0 + self.history[q]) * (1.0 + self.pressure * f64::from(self.usage[q]))
    }

    fn end_round(&mut self) {
        for (h, &u) in self.history.iter_mut().zip(&self.usage) {
            if u > 1 {
                *h += f64::from(u - 1);
            }
        }
        self.pressure *= 1.5;
    }

    fn overlap(&self) -> usize {
        self.usage.iter().map(|&u| u.saturating_sub(1) as usize).sum()
    }

    fn remove(&mut self, v: usize) {
        for &q in &self.chains[v] {
            self.usage[q] -= 1;
        }
        self.chains[v].clear();
    }

    /// Weighted distances from `chain` (cost of a path = summed weights of the
    /// vertices on it outside `chain`) and the predecessor of each vertex.
    fn distances(&self, chain: &[usize]) -> (Vec<f64>, Vec<usize>) {
        let m = self.hw.len();
        let mut dist = vec![f64::INFINITY; m];
        let mut parent = vec![usize::MAX; m];
        let mut heap = BinaryHeap::new();
        for &q in chain {
            dist[q] = 0.0;
            heap.push(Frontier(0.0, q));
        }
        while let Some(Frontier(d, q)) = heap.pop() {
            if d > dist[q] {
                continue;
            }
            for &r in self.hw.neighbors(q) {
                let nd = d + self.weight(r);
                if nd < dist[r] {
                    dist[r] = nd;
                    parent[r] = q;
                    heap.push(Frontier(nd, r));
                }
            }
        }
        (dist, parent)
    }

    fn place(&mut self, v: usize, rng: &mut ChaCha8Rng) {
        let placed: Vec<usize> = self.adj[v]
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty())
            .collect();
        let m = self.hw.len();
        let chain = if placed.is_empty() {
            let best = (0..m).map(|q| self.usage[q]).min().unwrap_or(0);
            let free: Vec<usize> = (0..m).filter(|&q| self.usage[q] == best).collect();
            vec![free[rng.random_range(0..free.len())]]
        } else {
            let searches: Vec<(Vec<f64>, Vec<usize>)> =
                placed.iter().map(|&u| self.distances(&self.chains[u])).collect();
            let blocked: BTreeSet<usize> = placed.iter().flat_map(|&u| self.chains[u].iter().copied()).collect();
            let extra = (placed.len() - 1) as f64;
            let mut best_cost = f64::INFINITY;
            let mut roots = Vec::new();
            for q in (0..m).filter(|q| !blocked.contains(q)) {
                let total: f64 = searches.iter().map(|(d, _)| d[q]).sum::<f64>() - extra * self.weight(q);
                if total < best_cost - 1e-9 {
                    best_cost = total;
                    roots.clear();
                    roots.push(q);
                } else if (total - best_cost).abs() <= 1e-9 {
                    roots.push(q);
                }
            }
            if roots.is_empty() {
                return;
            }
            let root = roots[rng.random_range(0..roots.len())];
            let mut chain = BTreeSet::from([root]);
            for (&u, (_, parent)) in placed.iter().zip(&searches) {
                let mut x = parent[root];
                while x != usize::MAX && !self.chains[u].contains(&x) {
                    chain.insert(x);
                    x = parent[x];
                }
            }
            chain.into_iter().collect()
        };
        for &q in &chain {
            self.usage[q] += 1;
        }
        self.chains[v] = chain;
    }

    /// Drops chain vertices that are not needed for connectivity or coverage.
    fn prune(&mut self) {
        for v in 0..self.chains.len() {
            let mut k = 0;
            while k < self.chains[v].len() && self.chains[v].len() > 1 {
                let mut trial = self.chains[v].clone();
                trial.remove(k);
                let ok = connected(&trial, self.hw)
                    && self.adj[v]
                        .iter()
                        .all(|&u| chains_touch(&trial, &self.chains[u], self.hw));
                if ok {
                    self.usage[self.chains[v][k]] -= 1;
                    self.chains[v] = trial;
                } else {
                    k += 1;
                }
            }
        }
    }
}

/// Returns the embedding or the overlap left after the last round.
fn attempt(
    adj: &[Vec<usize>],
    hw: &ChimeraGraph,
    rounds: usize,
    seed: u64,
) -> std::result::Result<MinorEmbedding, usize> {
    let n = adj.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut search = Search {
        adj,
        hw,
        chains: vec![Vec::new(); n],
        usage: vec![0; hw.len()],
        history: vec![0.0; hw.len()],
        pressure: 0.5,
    };
    // Breadth-first order from random starts keeps most placements adjacent
    // to already placed neighbours.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut starts: Vec<usize> = (0..n).collect();
    starts.shuffle(&mut rng);
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = adj[v].iter().copied().filter(|&u| !seen[u]).collect();
            nb.shuffle(&mut rng);
            for u in nb {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    for &v in &order {
        search.place(v, &mut rng);
    }
    for _ in 0..rounds {
        if search.overlap() == 0 && search.chains.iter().all(|c| !c.is_empty()) {
            break;
        }
        search.end_round();
        order.shuffle(&mut rng);
        for &v in &order {
            search.remove(v);
            search.place(v, &mut rng);
        }
    }
    if search.overlap() > 0 || search.chains.iter().any(Vec::is_empty) {
        return Err(search.overlap().max(1));
    }
    search.prune();
    Ok(MinorEmbedding::new(search.chains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::edges;

    #[test]
    fn single_edge_in_one_cell() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let emb = find_embedding(2, &[(0, 1)], &hw, &EmbedOptions::default()).unwrap();
        assert_eq!(emb.stats().physical, 2);
        assert!(hw.has_edge(emb.chain(0)[0], emb.chain(1)[0]));
    }

    #[test]
    fn triangle_needs_a_longer_chain() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let emb = find_embedding(3, &edges::complete(3), &hw, &EmbedOptions::default()).unwrap();
        emb.validate(3, &edges::complete(3), &hw).unwrap();
        assert_eq!(emb.stats().max_chain, 2);
        assert_eq!(emb.physical_count(), 4);
    }

    #[test]
    fn k5_in_two_by_two() {
        let hw = ChimeraGraph::new(2, 2).unwrap();
        let k5 = edges::complete(5);
        let emb = find_embedding(5, &k5, &hw, &EmbedOptions::default()).unwrap();
        emb.validate(5, &k5, &hw).unwrap();
    }

    #[test]
    fn validator_rejects_broken_embeddings() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let e = [(0, 1)];
        assert!(MinorEmbedding::new(vec![vec![0], vec![4]]).validate(2, &e, &hw).is_ok());
        assert!(MinorEmbedding::new(vec![vec![0], vec![1]])
            .validate(2, &e, &hw)
            .is_err());
        assert!(MinorEmbedding::new(vec![vec![0], vec![0, 4]])
            .validate(2, &e, &hw)
            .is_err());
        assert!(MinorEmbedding::new(vec![vec![0, 1], vec![4]])
            .validate(2, &e, &hw)
            .is_err());
        assert!(MinorEmbedding::new(vec![vec![0], vec![]]).validate(2, &e, &hw).is_err());
    }

    #[test]
    fn text_round_trip() {
        let emb = MinorEmbedding::new(vec![vec![0, 4], vec![5], vec![1, 6]]);
        assert_eq!(MinorEmbedding::from_text(&emb.to_text()).unwrap(), emb);
        assert!(MinorEmbedding::from_text("1: 0\n").is_err());
    }

    #[test]
    fn impossible_embedding_fails() {
        let hw = ChimeraGraph::new(1, 1).unwrap();
        let opts = EmbedOptions {
            restarts: 2,
            rounds: 5,
            seed: 1,
        };
        assert!(matches!(
            find_embedding(8, &edges::complete(8), &hw, &opts),
            Err(Error::EmbeddingFailed { .. })
        ));
    }
}
