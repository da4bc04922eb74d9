use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{invalid, Error, Result};
use crate::operator::{expm_apply, FullDecomposition, HermitianOperator, StateVector, DEGENERACY_TOLERANCE};

/// Distribution of the dwell time under each `H(l)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DwellDistribution {
    Exponential { mean: f64 },
    Fixed { time: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl DwellDistribution {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Exponential { mean } => mean > 0.0 && mean.is_finite(),
            Self::Fixed { time } => time >= 0.0 && time.is_finite(),
            Self::Uniform { lo, hi } => lo >= 0.0 && hi > lo && hi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("dwell distribution {self:?} has no finite mean")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Exponential { mean } => mean,
            Self::Fixed { time } => time,
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    /// `Φ(ω) = E[e^{iωt}]`.
    pub fn characteristic(&self, omega: f64) -> C64 {
        let i = C64::i();
        match *self {
            Self::Exponential { mean } => 1.0 / (1.0 - i * omega * mean),
            Self::Fixed { time } => (i * omega * time).exp(),
            Self::Uniform { lo, hi } => {
                if omega == 0.0 {
                    C64::new(1.0, 0.0)
                } else {
                    ((i * omega * hi).exp() - (i * omega * lo).exp()) / (i * omega * (hi - lo))
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Self::Exponential { mean } => Exp::new(1.0 / mean).expect("validated rate").sample(rng),
            Self::Fixed { time } => time,
            Self::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }
}

/// Hamiltonians `H(0), …, H(L)` visited in order, each for a random dwell time.
#[derive(Clone, Debug)]
pub struct ZenoSchedule {
    hamiltonians: Vec<HermitianOperator>,
    dwell: DwellDistribution,
    /// Target fidelity `p`.
    fidelity_target: f64,
    /// Which eigenvector (0 = ground) is transported.
    level: usize,
}

impl ZenoSchedule {
    pub fn new(hamiltonians: Vec<HermitianOperator>, dwell: DwellDistribution, fidelity_target: f64) -> Result<Self> {
        if hamiltonians.len() < 2 {
            return Err(invalid("Zeno schedule needs L ≥ 1, i.e. at least two Hamiltonians"));
        }
        let dim = hamiltonians[0].dim();
        if let Some(h) = hamiltonians.iter().find(|h| h.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: h.dim(),
            });
        }
        dwell.validate()?;
        if !(fidelity_target > 0.0 && fidelity_target < 1.0) {
            return Err(invalid("fidelity target must lie in (0, 1)"));
        }
        Ok(Self {
            hamiltonians,
            dwell,
            fidelity_target,
            level: 0,
        })
    }

    /// `H(l) = (1 − l/L) H0 + (l/L) HT` for `l = 0..=L`.
    pub fn interpolated(
        h0: &HermitianOperator,
        ht: &HermitianOperator,
        steps: usize,
        dwell: DwellDistribution,
        fidelity_target: f64,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(invalid("Zeno schedule needs L ≥ 1"));
        }
        let hs = (0..=steps)
            .map(|l| {
                let s = l as f64 / steps as f64;
                HermitianOperator::linear_combination(&[(1.0 - s, h0), (s, ht)])
            })
            .collect::<Result<_>>()?;
        Self::new(hs, dwell, fidelity_target)
    }

    pub fn with_level(mut self, level: usize) -> Result<Self> {
        if level >= self.hamiltonians[0].dim() {
            return Err(invalid("target level exceeds dimension"));
        }
        self.level = level;
        Ok(self)
    }

    /// `L`.
    pub fn steps(&self) -> usize {
        self.hamiltonians.len() - 1
    }

    pub fn dwell(&self) -> DwellDistribution {
        self.dwell
    }

    pub fn fidelity_target(&self) -> f64 {
        self.fidelity_target
    }

    pub fn hamiltonians(&self) -> &[HermitianOperator] {
        &self.hamiltonians
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZenoOptions {
    /// Require `⟨t⟩ ≥ dwell_factor / Δ`; `None` disables the check.
    pub dwell_factor: Option<u32>,
}

impl Default for ZenoOptions {
    fn default() -> Self {
        Self { dwell_factor: Some(10) }
    }
}

#[derive(Clone, Debug)]
pub struct ZenoResult {
    pub state: StateVector,
    /// `|⟨ψ_L|ψ⟩|²` against the target eigenvector of `H(L)`.
    pub fidelity: f64,
    pub dwell_times: Vec<f64>,
    /// Number of dwell applications, `L + 1`.
    pub applications: usize,
    /// Smallest distance from the target level to any other level over all `l`.
    pub gap: f64,
    /// `sup |Φ(ω_j)|` over all energy differences `ω_j` to the target level.
    pub sup_characteristic: f64,
}

pub fn zeno_run(
    schedule: &ZenoSchedule,
    psi0: &StateVector,
    rng: &mut impl Rng,
    options: &ZenoOptions,
) -> Result<ZenoResult> {
    let dim = schedule.hamiltonians[0].dim();
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: psi0.dim(),
        });
    }
    let decomps: Vec<FullDecomposition> = schedule.hamiltonians.iter().map(FullDecomposition::new).collect();
    let lvl = schedule.level;
    let mut gap = f64::INFINITY;
    let mut sup_phi: f64 = 0.0;
    for d in &decomps {
        let e = d.eigenvalues[lvl];
        for (j, &ej) in d.eigenvalues.iter().enumerate() {
            if j != lvl {
                let w = (ej - e).abs();
                gap = gap.min(w);
                sup_phi = sup_phi.max(schedule.dwell.characteristic(w).norm());
            }
        }
    }
    if dim > 1 && gap <= DEGENERACY_TOLERANCE {
        return Err(Error::Degenerate {
            what: "Zeno target eigenvector",
            gap,
        });
    }
    if let Some(factor) = options.dwell_factor {
        let need = f64::from(factor) / gap;
        if schedule.dwell.mean() < need {
            return Err(invalid(format!(
                "mean dwell {} is below {factor}/Δ = {need}",
                schedule.dwell.mean()
            )));
        }
    }
    let mut psi = psi0.normalized()?.into_amplitudes();
    let mut dwell_times = Vec::with_capacity(decomps.len());
    for h in &schedule.hamiltonians {
        let t = schedule.dwell.sample(rng);
        dwell_times.push(t);
        psi = expm_apply(h, &psi, C64::new(0.0, -t));
    }
    let state = StateVector::from_amplitudes(psi)?;
    let target = decomps.last().expect("L ≥ 1").vector(lvl);
    Ok(ZenoResult {
        fidelity: target.fidelity(&state),
        state,
        applications: dwell_times.len(),
        dwell_times,
        gap,
        sup_characteristic: sup_phi,
    })
}

/// `L² ln(L/(1−p)) / ((1−p) Δ)`.
pub fn zeno_cost(steps: usize, p: f64, gap: f64) -> Result<f64> {
    if steps == 0 {
        return Err(invalid("L must be at least 1"));
    }
    if p >= 1.0 {
        return Err(invalid("fidelity target p ≥ 1 makes the cost diverge"));
    }
    if !(p > 0.0) || !(gap > 0.0) {
        return Err(invalid("need 0 < p < 1 and Δ > 0"));
    }
    let l = steps as f64;
    Ok(l * l * (l / (1.0 - p)).ln() / ((1.0 - p) * gap))
}
