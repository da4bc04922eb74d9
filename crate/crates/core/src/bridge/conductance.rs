use crate::error::{invalid, Error, Result};

use super::stochastic::StochasticMatrix;

/// Every subset is enumerated up to this many states.
pub const EXACT_CUT_LIMIT: usize = 20;
/// Contiguous intervals are scanned up to this many states.
const INTERVAL_CUT_LIMIT: usize = 1024;
/// Allowed `‖Pπ − π‖∞`.
pub const STATIONARY_TOLERANCE: f64 = 1e-10;
/// Slack on the `π(B) ≤ ½` admission test.
const HALF_SLACK: f64 = 1e-12;
/// Incremental sums below this are recomputed from scratch.
const RECOMPUTE_BELOW: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Conductance {
    /// `min F(B)/π(B)` over the admitted cuts.
    pub phi: f64,
    /// Minimizing cut, ascending.
    pub cut: Vec<usize>,
    /// False when only intervals and threshold cuts were scanned.
    pub exact: bool,
}

/// `φ = min_{B: π(B) ≤ ½} F(B)/π(B)` with `F(B) = Σ_{i∈B, j∉B} π_i P(i→j)`.
pub fn conductance(p: &StochasticMatrix, pi: &[f64]) -> Result<Conductance> {
    let m = p.dim();
    if pi.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: pi.len(),
        });
    }
    if pi.iter().any(|&x| !(x >= 0.0)) {
        return Err(invalid("stationary distribution has negative entries"));
    }
    let deviation = p.stationarity_defect(pi);
    if deviation > STATIONARY_TOLERANCE {
        return Err(Error::NotStationary { deviation });
    }
    if m <= 1 {
        return Ok(Conductance {
            phi: 0.0,
            cut: Vec::new(),
            exact: true,
        });
    }
    // flow[i][j] = π_i P(i → j)
    let flow: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| pi[i] * p.transition(i, j)).collect())
        .collect();
    if m <= EXACT_CUT_LIMIT {
        Ok(exact_conductance(&flow, pi))
    } else {
        Ok(heuristic_conductance(&flow, pi))
    }
}

struct Best {
    phi: f64,
    cut: Vec<usize>,
}

impl Best {
    fn new() -> Self {
        Self {
            phi: f64::INFINITY,
            cut: Vec::new(),
        }
    }

    fn offer(&mut self, f: f64, w: f64, cut: impl FnOnce() -> Vec<usize>) {
        if w > 0.0 && w <= 0.5 + HALF_SLACK {
            let phi = f.max(0.0) / w;
            if phi < self.phi {
                self.phi = phi;
                self.cut = cut();
            }
        }
    }
}

/// Gray-code walk over all subsets, updating flow and weight incrementally.
fn exact_conductance(flow: &[Vec<f64>], pi: &[f64]) -> Conductance {
    let m = pi.len();
    let mut member = vec![false; m];
    let mut mask: u32 = 0;
    let (mut f, mut w) = (0.0, 0.0);
    let mut best = Best::new();
    for k in 1u32..(1 << m) {
        let v = k.trailing_zeros() as usize;
        // flow from the members into v, and from v to the non-members
        let (mut into_v, mut out_of_v) = (0.0, 0.0);
        for u in (0..m).filter(|&u| u != v) {
            if member[u] {
                into_v += flow[u][v];
            } else {
                out_of_v += flow[v][u];
            }
        }
        member[v] = !member[v];
        mask ^= 1 << v;
        if member[v] {
            w += pi[v];
            f += out_of_v - into_v;
        } else {
            w -= pi[v];
            f += into_v - out_of_v;
        }
        if f < RECOMPUTE_BELOW || w < RECOMPUTE_BELOW {
            (f, w) = direct_flow(flow, pi, &member);
        }
        best.offer(f, w, || (0..m).filter(|&i| mask >> i & 1 == 1).collect());
    }
    Conductance {
        phi: best.phi,
        cut: best.cut,
        exact: true,
    }
}

/// `(F(B), π(B))` summed without cancellation.
fn direct_flow(flow: &[Vec<f64>], pi: &[f64], member: &[bool]) -> (f64, f64) {
    let (mut f, mut w) = (0.0, 0.0);
    for (i, row) in flow.iter().enumerate().filter(|&(i, _)| member[i]) {
        w += pi[i];
        f += row
            .iter()
            .enumerate()
            .filter(|&(j, _)| !member[j])
            .map(|(_, x)| x)
            .sum::<f64>();
    }
    (f, w)
}

fn heuristic_conductance(flow: &[Vec<f64>], pi: &[f64]) -> Conductance {
    let m = pi.len();
    let mut best = Best::new();
    let scan = |order: &[usize], best: &mut Best| {
        let mut member = vec![false; m];
        let (mut f, mut w) = (0.0, 0.0);
        for (len, &v) in order.iter().enumerate() {
            let mut delta = 0.0;
            for u in 0..m {
                if u == v {
                    continue;
                }
                if member[u] {
                    delta -= flow[u][v];
                } else {
                    delta += flow[v][u];
                }
            }
            member[v] = true;
            f += delta;
            w += pi[v];
            if f < RECOMPUTE_BELOW || w < RECOMPUTE_BELOW {
                (f, w) = direct_flow(flow, pi, &member);
            }
            best.offer(f, w, || {
                let mut c = order[..=len].to_vec();
                c.sort_unstable();
                c
            });
        }
    };
    if m <= INTERVAL_CUT_LIMIT {
        for a in 0..m {
            let order: Vec<usize> = (a..m).collect();
            scan(&order, &mut best);
        }
    }
    // threshold cuts along π in both directions
    let mut by_pi: Vec<usize> = (0..m).collect();
    by_pi.sort_by(|&a, &b| pi[a].total_cmp(&pi[b]));
    scan(&by_pi, &mut best);
    by_pi.reverse();
    scan(&by_pi, &mut best);
    Conductance {
        phi: best.phi,
        cut: best.cut,
        exact: false,
    }
}

/// Cheeger-type comparison for a reversible chain.
#[derive(Clone, Debug, PartialEq)]
pub struct GapBoundsReport {
    pub gap: f64,
    pub phi: f64,
    pub half_phi_squared: f64,
    /// `gap ≥ ½φ²`.
    pub cheeger_holds: bool,
    pub conductance_exact: bool,
    /// `1/(6L)` when a clock length was supplied.
    pub clock_bound: Option<f64>,
    /// `φ ≥ 1/(6L)`.
    pub clock_holds: Option<bool>,
}

/// Computes gap, conductance, and the two bounds.
pub fn gap_bounds_check(p: &StochasticMatrix, pi: &[f64], clock_length: Option<usize>) -> Result<GapBoundsReport> {
    let c = conductance(p, pi)?;
    let gap = p.spectral_gap(pi)?;
    let half_phi_squared = 0.5 * c.phi * c.phi;
    let clock_bound = clock_length.map(|l| 1.0 / (6.0 * l as f64));
    Ok(GapBoundsReport {
        gap,
        phi: c.phi,
        half_phi_squared,
        cheeger_holds: gap >= half_phi_squared - 1e-12,
        conductance_exact: c.exact,
        clock_bound,
        clock_holds: clock_bound.map(|b| c.phi >= b),
    })
}
