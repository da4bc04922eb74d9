use crate::error::{invalid, Error, Result};
use crate::models::IsingInstance;
use crate::operator::{HamiltonianSource, HermitianOperator};

/// Monotone map `u = t/τ ∈ [0, 1] ↦ s ∈ [0, 1]` with `s(0) = 0`, `s(1) = 1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum Schedule {
    #[default]
    Linear,
    /// `s = u^p`, `p > 0`.
    Power(f64),
    /// Piecewise-linear through ascending knots `(u, s)` from `(0, 0)` to `(1, 1)`.
    Custom(Vec<(f64, f64)>),
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Linear => Ok(()),
            Self::Power(p) if *p > 0.0 && p.is_finite() => Ok(()),
            Self::Power(p) => Err(invalid(format!("power schedule exponent {p} must be positive"))),
            Self::Custom(knots) => {
                let (first, last) = match (knots.first(), knots.last()) {
                    (Some(f), Some(l)) if knots.len() >= 2 => (f, l),
                    _ => return Err(invalid("custom schedule needs at least two knots")),
                };
                if *first != (0.0, 0.0) || *last != (1.0, 1.0) {
                    return Err(invalid("custom schedule must run from (0, 0) to (1, 1)"));
                }
                for w in knots.windows(2) {
                    if !(w[1].0 > w[0].0) || w[1].1 < w[0].1 {
                        return Err(invalid(
                            "custom schedule knots must increase in u and not decrease in s",
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            Self::Linear => u,
            Self::Power(p) => u.powf(*p),
            Self::Custom(knots) => {
                let k = knots.partition_point(|&(x, _)| x <= u).clamp(1, knots.len() - 1);
                let ((u0, s0), (u1, s1)) = (knots[k - 1], knots[k]);
                s0 + (s1 - s0) * (u - u0) / (u1 - u0)
            }
        }
    }
}

/// `H(t) = (1 − s(t/τ)) H0 + s(t/τ) HT`.
#[derive(Clone, Debug)]
pub struct InterpolationPath {
    h0: HermitianOperator,
    ht: HermitianOperator,
    schedule: Schedule,
    tau: f64,
}

impl InterpolationPath {
    pub fn new(h0: HermitianOperator, ht: HermitianOperator, schedule: Schedule, tau: f64) -> Result<Self> {
        if h0.dim() != ht.dim() {
            return Err(Error::DimensionMismatch {
                expected: h0.dim(),
                actual: ht.dim(),
            });
        }
        schedule.validate()?;
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(invalid(format!("τ = {tau} must be finite and non-negative")));
        }
        Ok(Self { h0, ht, schedule, tau })
    }

    pub fn linear(h0: HermitianOperator, ht: HermitianOperator, tau: f64) -> Result<Self> {
        Self::new(h0, ht, Schedule::Linear, tau)
    }

    /// `H0 = −Σ Δ_i σ^x_i`, `HT` = the problem Hamiltonian of `instance`.
    pub fn transverse_field(instance: &IsingInstance, tau: f64) -> Result<Self> {
        let driver = instance.driver_hamiltonian()?;
        let h0 = HermitianOperator::linear_combination(&[(-1.0, &driver)])?;
        Self::linear(h0, instance.problem_hamiltonian()?, tau)
    }

    pub fn h0(&self) -> &HermitianOperator {
        &self.h0
    }

    pub fn ht(&self) -> &HermitianOperator {
        &self.ht
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn with_tau(&self, tau: f64) -> Result<Self> {
        Self::new(self.h0.clone(), self.ht.clone(), self.schedule.clone(), tau)
    }

    /// `(1 − s) H0 + s HT`.
    pub fn at_s(&self, s: f64) -> Result<HermitianOperator> {
        HermitianOperator::linear_combination(&[(1.0 - s, &self.h0), (s, &self.ht)])
    }

    /// `dH/ds = HT − H0`.
    pub fn derivative(&self) -> Result<HermitianOperator> {
        HermitianOperator::linear_combination(&[(1.0, &self.ht), (-1.0, &self.h0)])
    }

    pub fn s_at(&self, t: f64) -> f64 {
        if self.tau == 0.0 {
            1.0
        } else {
            self.schedule.value(t / self.tau)
        }
    }
}

impl HamiltonianSource for InterpolationPath {
    fn at(&self, t: f64) -> Result<HermitianOperator> {
        self.at_s(self.s_at(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_hit_endpoints() {
        let custom = Schedule::Custom(vec![(0.0, 0.0), (0.5, 0.2), (1.0, 1.0)]);
        for s in [Schedule::Linear, Schedule::Power(2.0), custom.clone()] {
            s.validate().unwrap();
            assert_eq!(s.value(0.0), 0.0);
            assert_eq!(s.value(1.0), 1.0);
        }
        assert!((custom.value(0.25) - 0.1).abs() < 1e-15);
        assert!((custom.value(0.75) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn invalid_schedules_are_rejected() {
        assert!(Schedule::Power(0.0).validate().is_err());
        assert!(Schedule::Custom(vec![(0.0, 0.0), (1.0, 0.9)]).validate().is_err());
        assert!(Schedule::Custom(vec![(0.0, 0.0), (0.5, 0.6), (0.7, 0.4), (1.0, 1.0)])
            .validate()
            .is_err());
    }

    #[test]
    fn endpoints_of_path() {
        let h0 = HermitianOperator::diagonal_from(&[0.0, 1.0]).unwrap();
        let ht = HermitianOperator::diagonal_from(&[2.0, -1.0]).unwrap();
        let p = InterpolationPath::linear(h0, ht, 4.0).unwrap();
        assert_eq!(p.at(0.0).unwrap().diagonal(), vec![0.0, 1.0]);
        assert_eq!(p.at(4.0).unwrap().diagonal(), vec![2.0, -1.0]);
        assert_eq!(p.at(2.0).unwrap().diagonal(), vec![1.0, 0.0]);
        let bad = HermitianOperator::zeros(4).unwrap();
        assert!(InterpolationPath::linear(bad, HermitianOperator::zeros(2).unwrap(), 1.0).is_err());
    }
}
