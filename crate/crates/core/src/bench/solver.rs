use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adiabatic::{
    run_adiabatic, zeno_run, DwellDistribution, InterpolationPath, RunConfig, ZenoOptions, ZenoSchedule,
};
use crate::annealers::{
    quantum_anneal_state, simulated_anneal, FieldSchedule, QAConfig, SAConfig, TemperatureSchedule,
};
use crate::error::{invalid, Result};
use crate::models::{brute_force_ground, CostFunction, IsingInstance, SpinConfiguration};
use crate::operator::{lowest_eigenpairs, HermitianOperator, StateVector, DENSE_TOLERANCE};

/// One run: the configuration a solver reports and what it cost.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub config: SpinConfiguration,
    pub energy: f64,
    /// Hardware-independent effort: sweeps, integrator steps or evaluations.
    pub work: f64,
}

/// Draws runs for one prepared instance.
pub trait Sampler: Sync {
    fn sample(&self, seed: u64) -> Result<RunOutcome>;
}

impl<F> Sampler for F
where
    F: Fn(u64) -> Result<RunOutcome> + Sync,
{
    fn sample(&self, seed: u64) -> Result<RunOutcome> {
        self(seed)
    }
}

/// A solver does its per-instance work once in `prepare`, then each run is a
/// seeded draw from the returned sampler.
pub trait Solver: Sync {
    fn id(&self) -> String;
    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>>;
}

/// Solver settings as they appear in a benchmark configuration file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolverSpec {
    /// Simulated annealing with `T(t) = n/(k ln t)`.
    Sa { sweeps: usize, k: f64 },
    /// Simulated annealing with a geometric schedule.
    SaGeometric { sweeps: usize, t0: f64, ratio: f64 },
    /// Quantum annealing with `Γ(t) = Γ0 (1+t)^{−γ/n}`.
    Qa { tau: f64, dt: f64, gamma0: f64, gamma: f64 },
    /// Quantum annealing with a linear field ramp.
    QaLinear { tau: f64, dt: f64, gamma0: f64 },
    /// Transverse-field adiabatic path of duration `tau`.
    Adiabatic { tau: f64, dt: f64 },
    /// Zeno transport along the transverse-field path with exponential dwell
    /// of mean `dwell_factor / Δ`.
    Zeno { steps: usize, dwell_factor: u32 },
    /// Uniformly random configuration.
    Random,
    /// Brute-force minimizer.
    Exact,
}

impl SolverSpec {
    pub fn build(&self) -> Result<Box<dyn Solver>> {
        Ok(match *self {
            Self::Sa { sweeps, k } => Box::new(SimulatedAnnealer {
                schedule: TemperatureSchedule::Logarithmic { k, t_start: 2.0 },
                sweeps,
            }),
            Self::SaGeometric { sweeps, t0, ratio } => Box::new(SimulatedAnnealer {
                schedule: TemperatureSchedule::Geometric { t0, ratio },
                sweeps,
            }),
            Self::Qa { tau, dt, gamma0, gamma } => Box::new(QuantumAnnealer {
                config: QAConfig {
                    schedule: FieldSchedule::PowerLaw { gamma0, gamma },
                    tau,
                    dt,
                },
            }),
            Self::QaLinear { tau, dt, gamma0 } => Box::new(QuantumAnnealer {
                config: QAConfig {
                    schedule: FieldSchedule::LinearRamp { gamma0 },
                    tau,
                    dt,
                },
            }),
            Self::Adiabatic { tau, dt } => Box::new(AdiabaticSolver { tau, dt }),
            Self::Zeno { steps, dwell_factor } => Box::new(ZenoSolver { steps, dwell_factor }),
            Self::Random => Box::new(RandomGuess),
            Self::Exact => Box::new(Exhaustive),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SimulatedAnnealer {
    pub schedule: TemperatureSchedule,
    pub sweeps: usize,
}

impl Solver for SimulatedAnnealer {
    fn id(&self) -> String {
        let sweeps = self.sweeps;
        match self.schedule {
            TemperatureSchedule::Logarithmic { k, t_start } => format!("sa-log(k={k};t0={t_start};sweeps={sweeps})"),
            TemperatureSchedule::Linear { t0, t1 } => format!("sa-linear(T0={t0};T1={t1};sweeps={sweeps})"),
            TemperatureSchedule::Geometric { t0, ratio } => format!("sa-geometric(T0={t0};r={ratio};sweeps={sweeps})"),
            TemperatureSchedule::Constant(t) => format!("sa-constant(T={t};sweeps={sweeps})"),
        }
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        self.schedule.validate()?;
        Ok(Box::new(move |seed: u64| {
            let cfg = SAConfig {
                schedule: self.schedule,
                sweeps: self.sweeps,
                seed,
                initial: None,
            };
            let r = simulated_anneal(cost, &cfg, None)?;
            let crate::annealers::AnnealOutput::Classical { best_config, .. } = r.output else {
                unreachable!("classical run")
            };
            Ok(RunOutcome {
                config: best_config,
                energy: r.best_energy,
                work: self.sweeps as f64,
            })
        }))
    }
}

/// Samples basis states from `|ψ|²`.
fn readout_sampler<'a>(cost: &'a CostFunction, psi: &StateVector, work: f64) -> Result<Box<dyn Sampler + 'a>> {
    let weights = WeightedIndex::new(psi.probabilities()).map_err(|e| invalid(e.to_string()))?;
    let n = cost.n();
    Ok(Box::new(move |seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = weights.sample(&mut rng);
        Ok(RunOutcome {
            config: SpinConfiguration::from_index(n, b),
            energy: cost.evaluate_index(b),
            work,
        })
    }))
}

#[derive(Clone, Debug)]
pub struct QuantumAnnealer {
    pub config: QAConfig,
}

impl Solver for QuantumAnnealer {
    fn id(&self) -> String {
        let tau = self.config.tau;
        match self.config.schedule {
            FieldSchedule::PowerLaw { gamma0, gamma } => format!("qa-power(G0={gamma0};gamma={gamma};tau={tau})"),
            FieldSchedule::LinearRamp { gamma0 } => format!("qa-linear(G0={gamma0};tau={tau})"),
            FieldSchedule::Constant(g) => format!("qa-constant(G={g};tau={tau})"),
        }
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        let psi = quantum_anneal_state(cost, &self.config)?;
        readout_sampler(cost, &psi, (self.config.tau / self.config.dt).ceil())
    }
}

fn transverse_path(cost: &CostFunction, tau: f64) -> Result<InterpolationPath> {
    let driver = match cost.as_ising() {
        Some(inst) => inst.driver_hamiltonian()?,
        None => IsingInstance::zero(cost.n()).driver_hamiltonian()?,
    };
    let h0 = HermitianOperator::linear_combination(&[(-1.0, &driver)])?;
    InterpolationPath::linear(h0, cost.cost_hamiltonian()?, tau)
}

#[derive(Clone, Debug)]
pub struct AdiabaticSolver {
    pub tau: f64,
    pub dt: f64,
}

impl Solver for AdiabaticSolver {
    fn id(&self) -> String {
        format!("adiabatic(tau={})", self.tau)
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        let path = transverse_path(cost, self.tau)?;
        let cfg = RunConfig {
            dt: self.dt,
            ..RunConfig::default()
        };
        let run = run_adiabatic(&path, &cfg)?;
        readout_sampler(cost, &run.final_state, (self.tau / self.dt).ceil())
    }
}

#[derive(Clone, Debug)]
pub struct ZenoSolver {
    pub steps: usize,
    pub dwell_factor: u32,
}

impl Solver for ZenoSolver {
    fn id(&self) -> String {
        format!("zeno(L={};factor={})", self.steps, self.dwell_factor)
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        let path = transverse_path(cost, 1.0)?;
        // The smallest ground gap over the grid sets the dwell scale.
        let gap = (0..=self.steps)
            .map(|l| {
                let h = path.at_s(l as f64 / self.steps as f64)?;
                Ok(lowest_eigenpairs(&h, 2, DENSE_TOLERANCE)?
                    .gap()
                    .unwrap_or(f64::INFINITY))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let dwell = DwellDistribution::Exponential {
            mean: f64::from(self.dwell_factor) / gap,
        };
        let schedule = ZenoSchedule::interpolated(path.h0(), path.ht(), self.steps, dwell, 0.9)?;
        let psi0 = StateVector::uniform(path.dim());
        let n = cost.n();
        Ok(Box::new(move |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let opts = ZenoOptions {
                dwell_factor: Some(self.dwell_factor),
            };
            let r = zeno_run(&schedule, &psi0, &mut rng, &opts)?;
            let weights = WeightedIndex::new(r.state.probabilities()).map_err(|e| invalid(e.to_string()))?;
            let b = weights.sample(&mut rng);
            Ok(RunOutcome {
                config: SpinConfiguration::from_index(n, b),
                energy: cost.evaluate_index(b),
                work: r.dwell_times.iter().sum(),
            })
        }))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RandomGuess;

impl Solver for RandomGuess {
    fn id(&self) -> String {
        "random".into()
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        Ok(Box::new(move |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spins = (0..cost.n())
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            let config = SpinConfiguration::new(spins)?;
            Ok(RunOutcome {
                energy: cost.evaluate(&config)?,
                config,
                work: 1.0,
            })
        }))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Exhaustive;

impl Solver for Exhaustive {
    fn id(&self) -> String {
        "exact".into()
    }

    fn prepare<'a>(&'a self, cost: &'a CostFunction) -> Result<Box<dyn Sampler + 'a>> {
        let truth = brute_force_ground(cost)?;
        let work = (1u64 << cost.n()) as f64;
        Ok(Box::new(move |_seed: u64| {
            Ok(RunOutcome {
                config: truth.minimizers[0].clone(),
                energy: truth.energy,
                work,
            })
        }))
    }
}
