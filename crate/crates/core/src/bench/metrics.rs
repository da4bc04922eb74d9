use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::models::{GroundTruth, SpinConfiguration};

/// Smallest `R` with `1 − (1 − s)^R ≥ p`.
pub fn repeats_needed(s: f64, p: f64) -> Result<u64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("target probability {p} must lie in (0, 1)")));
    }
    if !(s > 0.0) || s > 1.0 {
        if s == 0.0 {
            return Err(Error::NoFiniteRepeats(s));
        }
        return Err(invalid(format!("success probability {s} must lie in (0, 1]")));
    }
    if s >= p {
        return Ok(1);
    }
    let reaches = |r: u64| 1.0 - (1.0 - s).powf(r as f64) >= p;
    let mut r = ((1.0 - p).ln() / (1.0 - s).ln()).ceil().max(1.0) as u64;
    while r > 1 && reaches(r - 1) {
        r -= 1;
    }
    while !reaches(r) {
        r += 1;
    }
    Ok(r)
}

/// Success statistics of one solver on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub instance: String,
    pub n: usize,
    pub runs: usize,
    pub successes: usize,
    /// `successes / runs`.
    pub success: f64,
    /// Mean seconds per run, or mean work units when timing by work.
    pub time_per_run: f64,
    pub work_per_run: f64,
    /// Hamming distance from each run's configuration to the nearest ground state.
    pub distances: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub solver: String,
    pub instances: Vec<InstanceOutcome>,
}

impl SolverReport {
    pub fn success_values(&self) -> Vec<f64> {
        self.instances.iter().map(|i| i.success).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    /// Quantile level `s0`.
    pub level: f64,
    /// `Q_{s0}(T_A) / Q_{s0}(T_B)`.
    pub quotient_of_quantiles: f64,
    /// `Q_{s0}(T_A / T_B)`.
    pub quantile_of_quotient: f64,
    /// `T_A(i) / T_B(i)` for the included instances, in instance-id order.
    pub quotients: Vec<f64>,
    pub included: Vec<String>,
    /// Instances dropped because either solver never succeeded on them.
    pub excluded: usize,
}

/// Linear-interpolation quantile of an unsorted sample (the inclusive
/// spreadsheet convention: position `q·(m−1)` in the sorted sample).
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(invalid("quantile of an empty sample"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(invalid(format!("quantile level {q} outside [0, 1]")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Ok(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

/// Time to solution at 99% confidence, `R(s, 0.99) · t_a`.
pub fn time_to_solution(outcome: &InstanceOutcome) -> Result<f64> {
    Ok(repeats_needed(outcome.success, 0.99)? as f64 * outcome.time_per_run)
}

/// Speedup of `a` over `b` as quotients of times to solution. Values below 1
/// mean `a` is faster. `level` defaults to the median.
pub fn speedup_metrics(a: &SolverReport, b: &SolverReport, level: Option<f64>) -> Result<SpeedupReport> {
    let level = level.unwrap_or(0.5);
    let index = |r: &SolverReport| -> BTreeMap<String, InstanceOutcome> {
        r.instances.iter().map(|i| (i.instance.clone(), i.clone())).collect()
    };
    let (ia, ib) = (index(a), index(b));
    if ia.len() != a.instances.len() || ib.len() != b.instances.len() {
        return Err(invalid("duplicate instance ids in a report"));
    }
    if !ia.keys().eq(ib.keys()) {
        return Err(invalid("reports cover different instance sets"));
    }
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    let mut included = Vec::new();
    let mut excluded = 0;
    for (id, oa) in &ia {
        let ob = &ib[id];
        if oa.success == 0.0 || ob.success == 0.0 {
            excluded += 1;
            continue;
        }
        ta.push(time_to_solution(oa)?);
        tb.push(time_to_solution(ob)?);
        included.push(id.clone());
    }
    if included.is_empty() {
        return Err(invalid("no instance was solved by both solvers"));
    }
    let quotients: Vec<f64> = ta.iter().zip(&tb).map(|(x, y)| x / y).collect();
    Ok(SpeedupReport {
        level,
        quotient_of_quantiles: quantile(&ta, level)? / quantile(&tb, level)?,
        quantile_of_quotient: quantile(&quotients, level)?,
        quotients,
        included,
        excluded,
    })
}

/// Sarle's coefficient above this suggests bimodality.
pub const BIMODALITY_THRESHOLD: f64 = 5.0 / 9.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessHistogram {
    /// `bins + 1` equally spaced edges over `[0, 1]`.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    /// `None` when the sample is too small or has zero variance.
    pub bimodality: Option<f64>,
}

impl SuccessHistogram {
    pub fn is_bimodal(&self) -> Option<bool> {
        self.bimodality.map(|b| b > BIMODALITY_THRESHOLD)
    }
}

/// Sarle's bimodality coefficient `(G1² + 1) / (G2 + 3(m−1)²/((m−2)(m−3)))`
/// from the bias-corrected skewness `G1` and excess kurtosis `G2`.
pub fn bimodality_coefficient(values: &[f64]) -> Option<f64> {
    let m = values.len();
    if m < 4 {
        return None;
    }
    let mf = m as f64;
    let mean = values.iter().sum::<f64>() / mf;
    let moment = |k: i32| values.iter().map(|v| (v - mean).powi(k)).sum::<f64>() / mf;
    let m2 = moment(2);
    if m2 <= f64::EPSILON * mean.abs().max(1.0) {
        return None;
    }
    let g1 = moment(3) / m2.powf(1.5);
    let g2 = moment(4) / (m2 * m2) - 3.0;
    let big_g1 = g1 * (mf * (mf - 1.0)).sqrt() / (mf - 2.0);
    let big_g2 = ((mf + 1.0) * g2 + 6.0) * (mf - 1.0) / ((mf - 2.0) * (mf - 3.0));
    Some((big_g1 * big_g1 + 1.0) / (big_g2 + 3.0 * (mf - 1.0).powi(2) / ((mf - 2.0) * (mf - 3.0))))
}

pub fn success_histogram(values: &[f64], bins: usize) -> Result<SuccessHistogram> {
    if values.is_empty() {
        return Err(invalid("histogram of an empty report"));
    }
    if bins == 0 {
        return Err(invalid("histogram needs at least one bin"));
    }
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(invalid("success probabilities must lie in [0, 1]"));
    }
    let mut counts = vec![0; bins];
    for &v in values {
        counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
    }
    Ok(SuccessHistogram {
        edges: (0..=bins).map(|k| k as f64 / bins as f64).collect(),
        counts,
        bimodality: bimodality_coefficient(values),
    })
}

/// Distance from `config` to the nearest ground state.
pub fn distance_to_ground(config: &SpinConfiguration, truth: &GroundTruth) -> usize {
    truth
        .minimizers
        .iter()
        .map(|g| g.hamming_distance(config))
        .min()
        .unwrap_or(config.len())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HammingRow {
    pub distance: usize,
    /// Tunnelling model weight `Γ^d`.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HammingDiagnostic {
    pub rows: Vec<HammingRow>,
    pub success: f64,
    /// Median distance over failed runs; `None` when every run succeeded.
    pub median_failed_distance: Option<f64>,
}

/// Per-run distances to the ground space with weights `Γ^d`, and the
/// `(s, median d)` pair used for correlation plots.
pub fn hamming_tunneling_diagnostic(
    finals: &[SpinConfiguration],
    truth: &GroundTruth,
    gamma: f64,
) -> HammingDiagnostic {
    let rows: Vec<HammingRow> = finals
        .iter()
        .map(|c| {
            let d = distance_to_ground(c, truth);
            HammingRow {
                distance: d,
                weight: gamma.powi(d as i32),
            }
        })
        .collect();
    let failed: Vec<f64> = rows
        .iter()
        .filter(|r| r.distance > 0)
        .map(|r| r.distance as f64)
        .collect();
    let success = if rows.is_empty() {
        0.0
    } else {
        (rows.len() - failed.len()) as f64 / rows.len() as f64
    };
    HammingDiagnostic {
        median_failed_distance: quantile(&failed, 0.5).ok(),
        rows,
        success,
    }
}
