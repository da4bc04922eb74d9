use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::cost::{CostFamily, CostFunction};
use super::ising::IsingInstance;

/// Canonical on-disk form of a problem instance. Field order is fixed, so
/// identical inputs serialize to identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub n: usize,
    pub couplings: Vec<(usize, usize, f64)>,
    pub h: Vec<f64>,
    pub delta: Vec<f64>,
    pub family: String,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clauses: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl InstanceDocument {
    pub fn from_cost(cost: &CostFunction, seed: Option<u64>) -> Self {
        let n = cost.n();
        let mut doc = Self {
            n,
            couplings: Vec::new(),
            h: vec![0.0; n],
            delta: vec![1.0; n],
            family: cost.family_tag().to_string(),
            seed,
            clauses: None,
            params: None,
            values: None,
        };
        match cost.family() {
            CostFamily::Ising(inst) => {
                doc.couplings = inst.couplings().iter().map(|(&(i, j), &v)| (i, j, v)).collect();
                doc.h = inst.fields().to_vec();
                doc.delta = inst.transverse().to_vec();
            }
            CostFamily::HammingSpike { width, height } => doc.params = Some(vec![*width, *height]),
            CostFamily::VanDam { epsilon } => doc.params = Some(vec![*epsilon]),
            CostFamily::ExactCover { clauses } => doc.clauses = Some(clauses.clone()),
            CostFamily::Table { values } => doc.values = Some(values.clone()),
        }
        doc
    }

    pub fn to_cost(&self) -> Result<CostFunction> {
        let param = |k: usize| -> Result<f64> {
            self.params
                .as_ref()
                .and_then(|p| p.get(k).copied())
                .ok_or_else(|| invalid(format!("{} instance is missing parameter {k}", self.family)))
        };
        match self.family.as_str() {
            "ising" => Ok(CostFunction::ising(self.to_ising()?)),
            "hamming-spike" => CostFunction::hamming_spike(self.n, param(0)?, param(1)?),
            "van-dam" => CostFunction::van_dam(self.n, param(0)?),
            "exact-cover" => CostFunction::exact_cover(
                self.n,
                self.clauses
                    .clone()
                    .ok_or_else(|| invalid("exact-cover instance has no clauses"))?,
            ),
            "table" => {
                let f = CostFunction::table(
                    self.values
                        .clone()
                        .ok_or_else(|| invalid("table instance has no values"))?,
                )?;
                if f.n() != self.n {
                    return Err(invalid("table length disagrees with n"));
                }
                Ok(f)
            }
            other => Err(invalid(format!("unknown family tag {other:?}"))),
        }
    }

    pub fn to_ising(&self) -> Result<IsingInstance> {
        IsingInstance::with_transverse(
            self.n,
            self.couplings.iter().map(|&(i, j, v)| ((i, j), v)),
            self.h.clone(),
            self.delta.clone(),
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{edges, gen_exact_cover, gen_spin_glass, CouplingRange};

    #[test]
    fn ising_round_trip_is_byte_stable() {
        let inst = gen_spin_glass(4, &edges::ring(4), CouplingRange::default(), 3).unwrap();
        let doc = InstanceDocument::from_cost(&CostFunction::ising(inst.clone()), Some(3));
        let text = doc.to_json().unwrap();
        let back = InstanceDocument::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back.to_ising().unwrap(), inst);
        let pos = |k: &str| text.find(k).unwrap();
        assert!(pos("\"n\"") < pos("\"couplings\""));
        assert!(pos("\"delta\"") < pos("\"family\""));
        assert!(pos("\"family\"") < pos("\"seed\""));
    }

    #[test]
    fn every_family_round_trips() {
        let costs = [
            gen_exact_cover(6, 1).unwrap().cost,
            CostFunction::van_dam(5, 0.2).unwrap(),
            CostFunction::hamming_spike(8, 1.0, 3.0).unwrap(),
            CostFunction::table(vec![0.0, 1.0]).unwrap(),
        ];
        for c in costs {
            let doc = InstanceDocument::from_cost(&c, None);
            let back = InstanceDocument::from_json(&doc.to_json().unwrap()).unwrap();
            assert_eq!(back.to_cost().unwrap(), c);
        }
    }

    #[test]
    fn unknown_family_is_an_error() {
        let mut doc = InstanceDocument::from_cost(&CostFunction::van_dam(3, 0.0).unwrap(), None);
        doc.family = "3-sat".into();
        assert!(doc.to_cost().is_err());
    }
}
