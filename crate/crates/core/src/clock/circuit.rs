use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::operator::StateVector;

use super::gate::Gate;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl QuantumCircuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(invalid("a circuit needs at least one qubit"));
        }
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn with_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&t) = gate.targets().iter().find(|&&t| t >= self.n_qubits) {
            return Err(Error::QubitOutOfRange {
                index: t,
                n_qubits: self.n_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Number of gates `L`.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// `α_0 = input`, `α_{l+1} = U_l α_l`.
    pub fn trajectory(&self, input: &StateVector) -> Result<Vec<StateVector>> {
        if input.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: input.dim(),
            });
        }
        if !input.is_normalized(1e-10) {
            return Err(Error::NotNormalized { norm: input.norm() });
        }
        let mut out = vec![input.clone()];
        for g in &self.gates {
            let next = g.apply(out.last().expect("non-empty").amplitudes());
            out.push(StateVector::from_raw(next));
        }
        Ok(out)
    }

    pub fn output(&self, input: &StateVector) -> Result<StateVector> {
        Ok(self.trajectory(input)?.pop().expect("non-empty"))
    }

    /// Appends `m` identity gates on qubit 0.
    pub fn pad_identities(&self, m: usize) -> Self {
        let mut c = self.clone();
        c.gates.extend((0..m).map(|_| Gate::identity(0)));
        c
    }
}

/// Two-qubit Grover search with one iteration: uniformize, mark `marked`,
/// reflect about the mean. Three gates.
pub fn grover_two_qubit(marked: usize) -> Result<QuantumCircuit> {
    if marked >= 4 {
        return Err(invalid("marked element must be in 0..4"));
    }
    let r = C64::new(0.5, 0.0);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    // targets [1, 0] make the local index equal to the register index
    let hh = DMatrix::from_fn(4, 4, |i, j| if (i & j).count_ones() % 2 == 1 { -r } else { r });
    let oracle = DMatrix::from_fn(4, 4, |i, j| match (i == j, i == marked) {
        (true, true) => -one,
        (true, false) => one,
        _ => zero,
    });
    // 2|s⟩⟨s| − I
    let diffusion = DMatrix::from_fn(4, 4, |i, j| if i == j { r - one } else { r });
    QuantumCircuit::with_gates(
        2,
        [
            Gate::new("hh", hh, vec![1, 0])?,
            Gate::new("oracle", oracle, vec![1, 0])?,
            Gate::new("diffusion", diffusion, vec![1, 0])?,
        ],
    )
}

/// Circuit of `length` Haar-random gates, each on one or two random qubits.
pub fn random_circuit(n_qubits: usize, length: usize, rng: &mut impl Rng) -> Result<QuantumCircuit> {
    let mut c = QuantumCircuit::new(n_qubits)?;
    for _ in 0..length {
        let two = n_qubits >= 2 && rng.random::<bool>();
        let targets = if two {
            let a = rng.random_range(0..n_qubits);
            let mut b = rng.random_range(0..n_qubits - 1);
            if b >= a {
                b += 1;
            }
            vec![a, b]
        } else {
            vec![rng.random_range(0..n_qubits)]
        };
        c.push(Gate::random(targets, rng)?)?;
    }
    Ok(c)
}

/// `η = (L+1)^{-1/2} Σ_l |α_l⟩ ⊗ |l⟩`, stored clock-major:
/// amplitude index `l·2^n + x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryState {
    pub n_qubits: usize,
    pub alphas: Vec<StateVector>,
    pub eta: StateVector,
}

impl HistoryState {
    /// Number of gates `L`; the clock has `L + 1` states.
    pub fn length(&self) -> usize {
        self.alphas.len() - 1
    }

    /// `|γ_l⟩ = |α_l⟩ ⊗ |l⟩` in the full space.
    pub fn gamma(&self, l: usize) -> StateVector {
        let sys = 1 << self.n_qubits;
        let mut v = vec![C64::new(0.0, 0.0); sys * (self.length() + 1)];
        v[l * sys..(l + 1) * sys].copy_from_slice(self.alphas[l].amplitudes());
        StateVector::from_raw(v)
    }
}

pub fn history_vector(circuit: &QuantumCircuit, input: &StateVector) -> Result<HistoryState> {
    let alphas = circuit.trajectory(input)?;
    let w = 1.0 / (alphas.len() as f64).sqrt();
    let eta = alphas
        .iter()
        .flat_map(|a| a.amplitudes().iter().map(move |x| x * w))
        .collect();
    Ok(HistoryState {
        n_qubits: circuit.n_qubits(),
        alphas,
        eta: StateVector::from_raw(eta),
    })
}

/// Clock readout of a clock-major state: returns `l` with probability
/// `Σ_x |η(l, x)|²` and the normalized system state conditioned on it.
pub fn measure_clock(state: &StateVector, n_qubits: usize, rng: &mut impl Rng) -> Result<(usize, StateVector)> {
    let sys = 1usize << n_qubits;
    if !state.dim().is_multiple_of(sys) {
        return Err(Error::DimensionMismatch {
            expected: sys,
            actual: state.dim(),
        });
    }
    if !state.is_normalized(1e-10) {
        return Err(Error::NotNormalized { norm: state.norm() });
    }
    let amps = state.amplitudes();
    let clocks = amps.len() / sys;
    let weights: Vec<f64> = (0..clocks)
        .map(|l| amps[l * sys..(l + 1) * sys].iter().map(|a| a.norm_sqr()).sum())
        .collect();
    let mut u: f64 = rng.random::<f64>() * weights.iter().sum::<f64>();
    let mut l = clocks - 1;
    for (k, &w) in weights.iter().enumerate() {
        if u < w {
            l = k;
            break;
        }
        u -= w;
    }
    let block = StateVector::from_raw(amps[l * sys..(l + 1) * sys].to_vec());
    Ok((l, block.normalized()?))
}

pub fn measure_history(history: &HistoryState, rng: &mut impl Rng) -> Result<(usize, StateVector)> {
    measure_clock(&history.eta, history.n_qubits, rng)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn approx(v: &StateVector, expect: &[f64]) -> bool {
        v.amplitudes()
            .iter()
            .zip(expect)
            .all(|(a, &e)| (a - C64::new(e, 0.0)).norm() < 1e-12)
    }

    #[test]
    fn grover_amplitudes() {
        let c = grover_two_qubit(2).unwrap();
        let traj = c.trajectory(&StateVector::basis(4, 0)).unwrap();
        assert!(approx(&traj[1], &[0.5, 0.5, 0.5, 0.5]));
        assert!(approx(&traj[2], &[0.5, 0.5, -0.5, 0.5]));
        assert!(approx(&traj[3], &[0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn identity_history() {
        let c = QuantumCircuit::with_gates(1, [Gate::identity(0)]).unwrap();
        let h = history_vector(&c, &StateVector::basis(2, 0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(&h.eta, &[r, 0.0, r, 0.0]));
    }

    #[test]
    fn empty_circuit_always_reads_zero() {
        let c = QuantumCircuit::new(1).unwrap();
        let h = history_vector(&c, &StateVector::basis(2, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10 {
            let (l, s) = measure_history(&h, &mut rng).unwrap();
            assert_eq!(l, 0);
            assert!(approx(&s, &[0.0, 1.0]));
        }
    }

    #[test]
    fn padding_keeps_output_and_extends_length() {
        let c = grover_two_qubit(1).unwrap();
        assert_eq!(c.pad_identities(0), c);
        let p = c.pad_identities(4);
        assert_eq!(p.len(), 7);
        let psi = StateVector::basis(4, 0);
        assert_eq!(p.output(&psi).unwrap(), c.output(&psi).unwrap());
    }

    #[test]
    fn out_of_range_target_is_rejected() {
        let mut c = QuantumCircuit::new(2).unwrap();
        assert!(c.push(Gate::x(2)).is_err());
        assert!(c.trajectory(&StateVector::basis(2, 0)).is_err());
    }
}
