use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;

use super::circuit::{history_vector, QuantumCircuit};
use crate::adiabatic::InterpolationPath;
use crate::operator::StateVector;

/// Largest system ⊗ clock dimension the compiler will build.
pub const MAX_CLOCK_DIM: usize = 1 << 20;

/// `H_P = ½ Σ_{l=0}^{L−1} H_l`, optionally plus the input penalty
/// `Σ_i |1⟩⟨1|_i ⊗ |0⟩⟨0|_clock`. Basis index is `l·2^n + x`.
#[derive(Clone, Debug)]
pub struct ClockHamiltonian {
    pub hamiltonian: HermitianOperator,
    pub n_qubits: usize,
    /// Number of gates `L`.
    pub length: usize,
    pub input_penalty: bool,
}

impl ClockHamiltonian {
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn index(&self, clock: usize, system: usize) -> usize {
        (clock << self.n_qubits) | system
    }
}

fn check_budget(n_qubits: usize, length: usize) -> Result<usize> {
    let dim = (length + 1).saturating_mul(1usize << n_qubits);
    if dim > MAX_CLOCK_DIM {
        return Err(Error::TooLarge {
            what: "clock space dimension",
            size: dim,
            limit: MAX_CLOCK_DIM,
        });
    }
    Ok(dim)
}

fn penalty_triplets(n_qubits: usize) -> impl Iterator<Item = (usize, usize, C64)> {
    (1..1usize << n_qubits).map(|x| (x, x, C64::new(x.count_ones() as f64, 0.0)))
}

pub fn clock_hamiltonian(circuit: &QuantumCircuit, with_input_penalty: bool) -> Result<ClockHamiltonian> {
    let length = circuit.len();
    if length == 0 {
        return Err(crate::error::invalid("clock Hamiltonian needs at least one gate"));
    }
    let n = circuit.n_qubits();
    let dim = check_budget(n, length)?;
    let sys = 1usize << n;
    let half = C64::new(0.5, 0.0);
    let mut trip = Vec::new();
    for (l, gate) in circuit.gates().iter().enumerate() {
        let (a, b) = (l * sys, (l + 1) * sys);
        for x in 0..sys {
            trip.push((a + x, a + x, half));
            trip.push((b + x, b + x, half));
            for (y, u) in gate.column(x) {
                // −½ U ⊗ |l+1⟩⟨l| and its adjoint
                trip.push((b + y, a + x, -half * u));
                trip.push((a + x, b + y, -half * u.conj()));
            }
        }
    }
    if with_input_penalty {
        trip.extend(penalty_triplets(n));
    }
    Ok(ClockHamiltonian {
        hamiltonian: HermitianOperator::from_triplets(dim, trip)?,
        n_qubits: n,
        length,
        input_penalty: with_input_penalty,
    })
}

/// `H_0 = penalty + ½ Σ_l (|l⟩⟨l| + |l+1⟩⟨l+1| − |l⟩⟨l+1| − |l+1⟩⟨l|) ⊗ I`.
/// Its unique ground state is `|0…0⟩ ⊗ (L+1)^{-1/2} Σ_l |l⟩` with energy 0.
pub fn clock_initial_hamiltonian(n_qubits: usize, length: usize) -> Result<HermitianOperator> {
    let dim = check_budget(n_qubits, length)?;
    let sys = 1usize << n_qubits;
    let half = C64::new(0.5, 0.0);
    let mut trip: Vec<(usize, usize, C64)> = Vec::new();
    for l in 0..length {
        let (a, b) = (l * sys, (l + 1) * sys);
        for x in 0..sys {
            trip.push((a + x, a + x, half));
            trip.push((b + x, b + x, half));
            trip.push((a + x, b + x, -half));
            trip.push((b + x, a + x, -half));
        }
    }
    trip.extend(penalty_triplets(n_qubits));
    HermitianOperator::from_triplets(dim, trip)
}

/// Linear path from [`clock_initial_hamiltonian`] to the penalized clock
/// Hamiltonian of `circuit`, whose unique ground state is the history state
/// of `|0…0⟩`.
pub fn compile_to_path(circuit: &QuantumCircuit, tau: f64) -> Result<InterpolationPath> {
    let ht = clock_hamiltonian(circuit, true)?.hamiltonian;
    let h0 = clock_initial_hamiltonian(circuit.n_qubits(), circuit.len())?;
    InterpolationPath::linear(h0, ht, tau)
}

/// `T_L`: tridiagonal with diagonal `(½, 1, …, 1, ½)` and off-diagonals −½.
pub fn toeplitz_matrix(length: usize) -> DMatrix<f64> {
    let m = length + 1;
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            if i == 0 || i == length {
                0.5
            } else {
                1.0
            }
        } else if i.abs_diff(j) == 1 {
            -0.5
        } else {
            0.0
        }
    })
}

/// `1 − cos(π/(L+1))`, the gap of [`toeplitz_matrix`].
pub fn toeplitz_gap(length: usize) -> f64 {
    1.0 - (std::f64::consts::PI / (length + 1) as f64).cos()
}

/// Reduced clock chain `(1−s)·diag(0, 1, …, 1) + s·T_L`: the restriction of
/// clock initialization followed by `H_P` to the span of the `γ_l`.
pub fn clock_chain_hamiltonian(length: usize, s: f64) -> Result<HermitianOperator> {
    if !(0.0..=1.0).contains(&s) {
        return Err(crate::error::invalid("s must lie in [0, 1]"));
    }
    let t = toeplitz_matrix(length);
    let m = length + 1;
    let h = DMatrix::from_fn(m, m, |i, j| {
        let init = if i == j && i > 0 { 1.0 } else { 0.0 };
        (1.0 - s) * init + s * t[(i, j)]
    });
    HermitianOperator::from_real_dense(&h)
}

/// Matrix of `H_P` (without penalty) in the `γ_l = α_l ⊗ |l⟩` basis.
pub fn reduced_toeplitz(circuit: &QuantumCircuit, input: &StateVector) -> Result<DMatrix<f64>> {
    let history = history_vector(circuit, input)?;
    let h = clock_hamiltonian(circuit, false)?;
    let m = history.length() + 1;
    let gammas: Vec<StateVector> = (0..m).map(|l| history.gamma(l)).collect();
    let images: Vec<StateVector> = gammas
        .iter()
        .map(|g| h.hamiltonian.apply_state(g))
        .collect::<Result<_>>()?;
    let mut out = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let v = gammas[i].inner(&images[j]);
            if v.im.abs() > 1e-12 {
                return Err(crate::error::invalid(format!(
                    "reduced matrix entry ({i}, {j}) has imaginary part {}",
                    v.im
                )));
            }
            out[(i, j)] = v.re;
        }
    }
    Ok(out)
}
