use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::models::{
    brute_force_ground, edges, gen_exact_cover, gen_random_ising, gen_spin_glass, CostFunction, CouplingRange,
    GroundTruth, SpinConfiguration, GROUND_TOLERANCE,
};
use crate::runlog::{instance_hash, RunRecord};

use super::metrics::{distance_to_ground, quantile, repeats_needed, InstanceOutcome, SolverReport};
use super::solver::{Solver, SolverSpec};

/// SplitMix64 finalizer applied to `master ⊕ mix(a) ⊕ mix(b)`; gives each
/// (instance, run) pair its own seed.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(master ^ mix(a ^ mix(b)))
}

/// How `time_per_run` is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Timing {
    /// Solver work units; reproducible byte for byte.
    #[default]
    Work,
    /// Wall-clock seconds.
    Wall,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunDetail {
    pub seed: u64,
    pub config: SpinConfiguration,
    pub energy: f64,
    pub success: bool,
    pub distance: usize,
    pub wall: f64,
    pub work: f64,
}

#[derive(Clone, Debug)]
pub struct InstanceRun {
    pub outcome: InstanceOutcome,
    pub runs: Vec<RunDetail>,
}

/// Runs `solver` `runs` times on `cost` with seeds derived from `seed`; a run
/// succeeds when its energy is within tolerance of the oracle minimum.
pub fn evaluate_instance(
    solver: &dyn Solver,
    id: &str,
    cost: &CostFunction,
    truth: &GroundTruth,
    runs: usize,
    seed: u64,
    timing: Timing,
) -> Result<InstanceRun> {
    if runs == 0 {
        return Err(invalid("at least one run is required"));
    }
    let clock = Instant::now();
    let sampler = solver.prepare(cost)?;
    let setup = clock.elapsed().as_secs_f64() / runs as f64;
    let details: Vec<RunDetail> = (0..runs)
        .into_par_iter()
        .map(|k| {
            let s = derive_seed(seed, 0, k as u64);
            let t = Instant::now();
            let out = sampler.sample(s)?;
            Ok(RunDetail {
                seed: s,
                success: out.energy - truth.energy <= GROUND_TOLERANCE,
                distance: distance_to_ground(&out.config, truth),
                energy: out.energy,
                config: out.config,
                wall: t.elapsed().as_secs_f64() + setup,
                work: out.work,
            })
        })
        .collect::<Result<_>>()?;
    let successes = details.iter().filter(|d| d.success).count();
    let mean = |f: fn(&RunDetail) -> f64| details.iter().map(f).sum::<f64>() / runs as f64;
    let work_per_run = mean(|d| d.work);
    Ok(InstanceRun {
        outcome: InstanceOutcome {
            instance: id.to_string(),
            n: cost.n(),
            runs,
            successes,
            success: successes as f64 / runs as f64,
            time_per_run: match timing {
                Timing::Work => work_per_run,
                Timing::Wall => mean(|d| d.wall),
            },
            work_per_run,
            distances: details.iter().map(|d| d.distance).collect(),
        },
        runs: details,
    })
}

/// Fraction of `runs` seeded runs that reach a ground state.
pub fn success_probability(solver: &dyn Solver, cost: &CostFunction, runs: usize, seed: u64) -> Result<f64> {
    let truth = brute_force_ground(cost)?;
    Ok(
        evaluate_instance(solver, "instance", cost, &truth, runs, seed, Timing::Work)?
            .outcome
            .success,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum EnsembleSpec {
    /// ±1 couplings on an Erdős–Rényi graph, optional uniform fields in [−1, 1).
    SpinGlass {
        n: usize,
        count: usize,
        #[serde(default = "one")]
        edge_probability: f64,
        #[serde(default)]
        fields: bool,
    },
    ExactCover {
        n: usize,
        count: usize,
    },
    HammingSpike {
        n: usize,
        width: f64,
        height: f64,
    },
    VanDam {
        n: usize,
        epsilon: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Instances with ids `i000, i001, …`; instance `k` uses seed `derive_seed(seed, k, 0)`.
pub fn generate_ensemble(spec: &EnsembleSpec, seed: u64) -> Result<Vec<(String, CostFunction, u64)>> {
    let id = |k: usize| format!("i{k:03}");
    let s = |k: usize| derive_seed(seed, k as u64, 0);
    match *spec {
        EnsembleSpec::SpinGlass {
            n,
            count,
            edge_probability,
            fields,
        } => (0..count)
            .map(|k| {
                let e = edges::random(n, edge_probability, s(k));
                let inst = if fields {
                    gen_random_ising(
                        n,
                        &e,
                        CouplingRange::PlusMinusOne,
                        CouplingRange::Uniform { lo: -1.0, hi: 1.0 },
                        s(k),
                    )?
                } else {
                    gen_spin_glass(n, &e, CouplingRange::PlusMinusOne, s(k))?
                };
                Ok((id(k), CostFunction::ising(inst), s(k)))
            })
            .collect(),
        EnsembleSpec::ExactCover { n, count } => (0..count)
            .map(|k| Ok((id(k), gen_exact_cover(n, s(k))?.cost, s(k))))
            .collect(),
        EnsembleSpec::HammingSpike { n, width, height } => {
            Ok(vec![(id(0), CostFunction::hamming_spike(n, width, height)?, seed)])
        }
        EnsembleSpec::VanDam { n, epsilon } => Ok(vec![(id(0), CostFunction::van_dam(n, epsilon)?, seed)]),
    }
}

fn default_bins() -> usize {
    10
}

/// Benchmark configuration, usually read from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub seed: u64,
    pub runs: usize,
    #[serde(default)]
    pub timing: Timing,
    #[serde(default = "default_bins")]
    pub bins: usize,
    /// Quantile level for the speedup metrics; the median when absent.
    #[serde(default)]
    pub level: Option<f64>,
    pub ensemble: EnsembleSpec,
    #[serde(rename = "solver")]
    pub solvers: Vec<SolverSpec>,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }
}

#[derive(Clone, Debug)]
pub struct BenchOutcome {
    pub reports: Vec<SolverReport>,
    pub records: Vec<RunRecord>,
}

impl BenchOutcome {
    /// Columns `solver,instance,n,runs,successes,s,t_a,work,tts99,median_failed_d`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("solver,instance,n,runs,successes,s,t_a,work,tts99,median_failed_d\n");
        for r in &self.reports {
            for i in &r.instances {
                let tts = repeats_needed(i.success, 0.99)
                    .map(|k| (k as f64 * i.time_per_run).to_string())
                    .unwrap_or_else(|_| "inf".into());
                let failed: Vec<f64> = i.distances.iter().filter(|&&d| d > 0).map(|&d| d as f64).collect();
                let median = quantile(&failed, 0.5).map(|m| m.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    csv_field(&r.solver),
                    i.instance,
                    i.n,
                    i.runs,
                    i.successes,
                    i.success,
                    i.time_per_run,
                    i.work_per_run,
                    tts,
                    median
                );
            }
        }
        out
    }
}

/// Quotes a field containing a comma or quote.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchOutcome> {
    let instances = generate_ensemble(&cfg.ensemble, cfg.seed)?;
    let truths: Vec<GroundTruth> = instances
        .iter()
        .map(|(_, c, _)| brute_force_ground(c))
        .collect::<Result<_>>()?;
    let hashes: Vec<String> = instances
        .iter()
        .map(|(_, c, _)| instance_hash(c))
        .collect::<Result<_>>()?;
    let mut reports = Vec::new();
    let mut records = Vec::new();
    for spec in &cfg.solvers {
        let solver = spec.build()?;
        let id = solver.id();
        let runs: Vec<InstanceRun> = instances
            .par_iter()
            .zip(&truths)
            .enumerate()
            .map(|(k, ((name, cost, _), truth))| {
                let seed = derive_seed(cfg.seed, k as u64, 1);
                evaluate_instance(solver.as_ref(), name, cost, truth, cfg.runs, seed, cfg.timing)
            })
            .collect::<Result<_>>()?;
        for (k, run) in runs.iter().enumerate() {
            for d in &run.runs {
                records.push(RunRecord {
                    instance_hash: hashes[k].clone(),
                    instance: run.outcome.instance.clone(),
                    solver: id.clone(),
                    seed: d.seed,
                    best_energy: d.energy,
                    success: d.success,
                    wall_time: (cfg.timing == Timing::Wall).then_some(d.wall),
                    work: d.work,
                });
            }
        }
        reports.push(SolverReport {
            solver: id,
            instances: runs.into_iter().map(|r| r.outcome).collect(),
        });
    }
    Ok(BenchOutcome { reports, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{Exhaustive, RandomGuess};
    use crate::models::IsingInstance;

    #[test]
    fn perfect_and_random_solvers() {
        let inst = IsingInstance::new(
            4,
            [((0, 1), 1.0), ((1, 2), 1.0), ((2, 3), 1.0)],
            vec![0.5, 0.0, 0.0, 0.0],
        )
        .unwrap();
        let cost = CostFunction::ising(inst);
        assert_eq!(brute_force_ground(&cost).unwrap().minimizers.len(), 1);
        assert_eq!(success_probability(&Exhaustive, &cost, 10, 1).unwrap(), 1.0);
        let runs = 10_000;
        let s = success_probability(&RandomGuess, &cost, runs, 2).unwrap();
        let p = 1.0 / 16.0;
        let sigma = (p * (1.0 - p) / runs as f64).sqrt();
        assert!((s - p).abs() < 3.0 * sigma, "s = {s}");
        assert!(success_probability(&RandomGuess, &cost, 0, 2).is_err());
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..100).map(|k| derive_seed(1, 0, k)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_eq!(derive_seed(1, 2, 3), derive_seed(1, 2, 3));
        assert_ne!(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
    }

    #[test]
    fn benchmark_is_reproducible() {
        let text = r#"
seed = 5
runs = 20

[ensemble]
family = "spin-glass"
n = 5
count = 3
edge_probability = 0.6

[[solver]]
kind = "sa"
sweeps = 10
k = 1.0

[[solver]]
kind = "random"
"#;
        let cfg = BenchConfig::from_toml(text).unwrap();
        let a = run_benchmark(&cfg).unwrap();
        let b = run_benchmark(&cfg).unwrap();
        assert_eq!(a.summary_csv(), b.summary_csv());
        assert_eq!(a.records, b.records);
        assert_eq!(a.records.len(), 2 * 3 * 20);
        assert!(a.summary_csv().starts_with("solver,instance,n,runs"));
    }
}
