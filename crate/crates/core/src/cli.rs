//! Command-line front end. The `aqclab` binary only parses arguments and
//! calls [`run`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::adiabatic::{adiabatic_time_estimate, gap_profile, InterpolationPath};
use crate::bench::{
    evaluate_instance, run_benchmark, speedup_metrics, success_histogram, BenchConfig, EnsembleSpec, SolverReport,
    SolverSpec, Timing,
};
use crate::chimera::{embed_instance, find_embedding, ChimeraGraph, CouplerPlacement, EmbedOptions, MinorEmbedding};
use crate::clock::{clock_hamiltonian, history_vector, parse_circuit, reduced_toeplitz, toeplitz_gap, toeplitz_matrix};
use crate::error::{invalid, Result};
use crate::models::{brute_force_ground, CostFunction, InstanceDocument};
use crate::operator::{lowest_eigenpairs, StateVector, DENSE_TOLERANCE, ITERATIVE_TOLERANCE};
use crate::runlog::{instance_hash, RunLog, RunRecord};

#[derive(Debug, Parser)]
#[command(
    name = "aqclab",
    version,
    about = "Adiabatic quantum computation and annealing laboratory"
)]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// TOML configuration (required by `bench`).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate problem instances as JSON documents.
    Gen(GenArgs),
    /// Run a solver on one instance and append its runs to `runs.jsonl`.
    Solve(SolveArgs),
    /// Gap profile of the transverse-field path of an instance.
    Gap(GapArgs),
    /// Compile a circuit file to its clock Hamiltonian and check its spectrum.
    CompileCircuit(CircuitArgs),
    /// Embed an instance into a Chimera graph, or validate an embedding.
    Embed(EmbedArgs),
    /// Run the benchmark described by `--config`.
    Bench,
    /// Speedup metrics and success histograms from a bench directory.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    SpinGlass,
    ExactCover,
    HammingSpike,
    VanDam,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 1.0)]
    pub edge_probability: f64,
    /// Uniform random fields for spin glasses.
    #[arg(long)]
    pub fields: bool,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 4.0)]
    pub height: f64,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SolverKind {
    Sa,
    Qa,
    Adiabatic,
    Zeno,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 100)]
    pub sweeps: usize,
    /// Constant of the logarithmic cooling schedule.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 20.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value_t = 5.0)]
    pub gamma0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Zeno steps `L`.
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long, default_value_t = 10)]
    pub dwell_factor: u32,
}

#[derive(Debug, Args)]
pub struct GapArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    pub circuit: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    pub instance: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    #[arg(long, default_value_t = 4)]
    pub cols: usize,
    /// Validate this chain-list file instead of searching.
    #[arg(long)]
    pub validate: Option<PathBuf>,
    #[arg(long)]
    pub chain_strength: Option<f64>,
    /// Spread each logical coupling over all couplers between its chains.
    #[arg(long)]
    pub split: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory written by `bench`; defaults to `--out`.
    pub dir: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Quantile level for speedup metrics.
    #[arg(long)]
    pub level: Option<f64>,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, text)?;
    Ok(path)
}

fn load_cost(path: &Path) -> Result<CostFunction> {
    InstanceDocument::from_json(&read(path)?)?.to_cost()
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| invalid(e.to_string()))?;
    }
    match &cli.command {
        Command::Gen(a) => gen(&cli, a),
        Command::Solve(a) => solve(&cli, a),
        Command::Gap(a) => gap(&cli, a),
        Command::CompileCircuit(a) => compile(a),
        Command::Embed(a) => embed(&cli, a),
        Command::Bench => bench(&cli),
        Command::Report(a) => report(&cli, a),
    }
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<()> {
    let spec = match a.family {
        Family::SpinGlass => EnsembleSpec::SpinGlass {
            n: a.n,
            count: a.count,
            edge_probability: a.edge_probability,
            fields: a.fields,
        },
        Family::ExactCover => EnsembleSpec::ExactCover { n: a.n, count: a.count },
        Family::HammingSpike => EnsembleSpec::HammingSpike {
            n: a.n,
            width: a.width,
            height: a.height,
        },
        Family::VanDam => EnsembleSpec::VanDam {
            n: a.n,
            epsilon: a.epsilon,
        },
    };
    for (id, cost, seed) in crate::bench::generate_ensemble(&spec, cli.seed)? {
        let doc = InstanceDocument::from_cost(&cost, Some(seed));
        let path = write(&cli.out, &format!("{id}.json"), &doc.to_json()?)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn solve(cli: &Cli, a: &SolveArgs) -> Result<()> {
    let cost = load_cost(&a.instance)?;
    let spec = match a.solver {
        SolverKind::Sa => SolverSpec::Sa {
            sweeps: a.sweeps,
            k: a.k,
        },
        SolverKind::Qa => SolverSpec::Qa {
            tau: a.tau,
            dt: a.dt,
            gamma0: a.gamma0,
            gamma: a.gamma,
        },
        SolverKind::Adiabatic => SolverSpec::Adiabatic { tau: a.tau, dt: a.dt },
        SolverKind::Zeno => SolverSpec::Zeno {
            steps: a.steps,
            dwell_factor: a.dwell_factor,
        },
    };
    let solver = spec.build()?;
    let truth = brute_force_ground(&cost)?;
    let id = a
        .instance
        .file_stem()
        .map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
    let run = evaluate_instance(solver.as_ref(), &id, &cost, &truth, a.runs, cli.seed, Timing::Wall)?;
    fs::create_dir_all(&cli.out)?;
    let mut log = RunLog::open(cli.out.join("runs.jsonl"))?;
    let hash = instance_hash(&cost)?;
    for d in &run.runs {
        log.append(&RunRecord {
            instance_hash: hash.clone(),
            instance: id.clone(),
            solver: solver.id(),
            seed: d.seed,
            best_energy: d.energy,
            success: d.success,
            wall_time: Some(d.wall),
            work: d.work,
        })?;
    }
    log.flush()?;
    let o = &run.outcome;
    println!(
        "{} on {id}: s = {} ({}/{}), ground energy {}, t_a = {:.3e} s",
        solver.id(),
        o.success,
        o.successes,
        o.runs,
        truth.energy,
        o.time_per_run
    );
    Ok(())
}

fn gap(cli: &Cli, a: &GapArgs) -> Result<()> {
    let cost = load_cost(&a.instance)?;
    let inst = cost
        .as_ising()
        .ok_or_else(|| invalid("`gap` needs an Ising instance"))?;
    let path = InterpolationPath::transverse_field(inst, 1.0)?;
    let profile = gap_profile(&path, a.points)?;
    let out = write(&cli.out, "gap.csv", &profile.to_csv())?;
    let (s, g) = profile.min_gap().expect("non-empty profile");
    println!("minimum gap {g} at s = {s}; profile in {}", out.display());
    match adiabatic_time_estimate(&profile) {
        Ok(t) => println!("adiabatic time estimate {t}"),
        Err(e) => println!("no time estimate: {e}"),
    }
    Ok(())
}

fn compile(a: &CircuitArgs) -> Result<()> {
    let circuit = parse_circuit(&read(&a.circuit)?)?;
    let input = StateVector::basis(circuit.dim(), 0);
    let h = clock_hamiltonian(&circuit, true)?;
    let eta = history_vector(&circuit, &input)?.eta;
    let residual = h.hamiltonian.apply_state(&eta)?.norm();
    let tol = if h.hamiltonian.is_dense() {
        DENSE_TOLERANCE
    } else {
        ITERATIVE_TOLERANCE
    };
    let spec = lowest_eigenpairs(&h.hamiltonian, 2, tol)?;
    let toeplitz = (reduced_toeplitz(&circuit, &input)? - toeplitz_matrix(circuit.len()))
        .abs()
        .max();
    println!(
        "qubits {}, gates {}, dimension {}",
        circuit.n_qubits(),
        circuit.len(),
        h.dim()
    );
    println!("|H η| = {residual:e}");
    println!("lowest levels {:?}", spec.eigenvalues);
    println!("reduced-matrix deviation from T_L {toeplitz:e}");
    println!("T_L gap 1 − cos(π/(L+1)) = {}", toeplitz_gap(circuit.len()));
    let output = circuit.output(&input)?;
    for (b, amp) in output.amplitudes().iter().enumerate() {
        if amp.norm() > 1e-12 {
            println!("output |{b}⟩: {amp}");
        }
    }
    Ok(())
}

fn embed(cli: &Cli, a: &EmbedArgs) -> Result<()> {
    let cost = load_cost(&a.instance)?;
    let inst = cost
        .as_ising()
        .ok_or_else(|| invalid("`embed` needs an Ising instance"))?;
    let hw = ChimeraGraph::new(a.rows, a.cols)?;
    let edges = inst.edges();
    let emb = match &a.validate {
        Some(path) => {
            let emb = MinorEmbedding::from_text(&read(path)?)?;
            emb.validate(inst.n(), &edges, &hw)?;
            println!("embedding in {} is valid", path.display());
            emb
        }
        None => find_embedding(
            inst.n(),
            &edges,
            &hw,
            &EmbedOptions {
                seed: cli.seed,
                ..EmbedOptions::default()
            },
        )?,
    };
    let placement = if a.split {
        CouplerPlacement::Split
    } else {
        CouplerPlacement::First
    };
    let physical = embed_instance(inst, &emb, &hw, a.chain_strength, placement)?;
    let stats = emb.stats();
    println!(
        "logical {} → physical {} (max chain {}, |G|² = {})",
        stats.logical, stats.physical, stats.max_chain, stats.guidance
    );
    write(&cli.out, "embedding.txt", &emb.to_text())?;
    write(&cli.out, "chimera.edges", &hw.to_edge_list())?;
    let doc = InstanceDocument::from_cost(&CostFunction::ising(physical.instance), None);
    let path = write(&cli.out, "physical.json", &doc.to_json()?)?;
    println!("physical instance in {}", path.display());
    Ok(())
}

fn bench(cli: &Cli) -> Result<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| invalid("`bench` needs --config <file>"))?;
    let mut cfg = BenchConfig::from_toml(&read(path)?)?;
    if cli.seed != 0 {
        cfg.seed = cli.seed;
    }
    let outcome = run_benchmark(&cfg)?;
    let _ = fs::remove_file(cli.out.join("runs.jsonl"));
    fs::create_dir_all(&cli.out)?;
    let mut log = RunLog::open(cli.out.join("runs.jsonl"))?;
    for r in &outcome.records {
        log.append(r)?;
    }
    log.flush()?;
    write(&cli.out, "summary.csv", &outcome.summary_csv())?;
    write(
        &cli.out,
        "reports.json",
        &(serde_json::to_string_pretty(&outcome.reports)? + "\n"),
    )?;
    for r in &outcome.reports {
        let mean = r.success_values().iter().sum::<f64>() / r.instances.len().max(1) as f64;
        println!("{}: mean s = {mean}", r.solver);
    }
    println!("wrote {}", cli.out.display());
    Ok(())
}

fn report(cli: &Cli, a: &ReportArgs) -> Result<()> {
    let dir = a.dir.clone().unwrap_or_else(|| cli.out.clone());
    let reports: Vec<SolverReport> = serde_json::from_str(&read(&dir.join("reports.json"))?)?;
    let mut hist = String::from("solver,bin_lo,bin_hi,count,bimodality\n");
    for r in &reports {
        let h = success_histogram(&r.success_values(), a.bins)?;
        let b = h.bimodality.map(|b| b.to_string()).unwrap_or_default();
        for k in 0..a.bins {
            hist += &format!(
                "{},{},{},{},{b}\n",
                crate::bench::csv_field(&r.solver),
                h.edges[k],
                h.edges[k + 1],
                h.counts[k]
            );
        }
        match h.is_bimodal() {
            Some(bi) => println!("{}: Sarle coefficient {b} (bimodal: {bi})", r.solver),
            None => println!("{}: Sarle coefficient undefined", r.solver),
        }
    }
    write(&dir, "histogram.csv", &hist)?;
    let mut speed =
        String::from("solver_a,solver_b,level,quotient_of_quantiles,quantile_of_quotient,included,excluded\n");
    for (i, ra) in reports.iter().enumerate() {
        for rb in &reports[i + 1..] {
            match speedup_metrics(ra, rb, a.level) {
                Ok(s) => {
                    speed += &format!(
                        "{},{},{},{},{},{},{}\n",
                        crate::bench::csv_field(&ra.solver),
                        crate::bench::csv_field(&rb.solver),
                        s.level,
                        s.quotient_of_quantiles,
                        s.quantile_of_quotient,
                        s.included.len(),
                        s.excluded
                    );
                    println!(
                        "{} vs {}: quotient of quantiles {}, quantile of quotient {}",
                        ra.solver, rb.solver, s.quotient_of_quantiles, s.quantile_of_quotient
                    );
                }
                Err(e) => println!("{} vs {}: {e}", ra.solver, rb.solver),
            }
        }
    }
    write(&dir, "speedup.csv", &speed)?;
    Ok(())
}
