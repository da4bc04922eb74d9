use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `coefficient · ⊗_q P_q`, identity on qubits absent from `factors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub factors: BTreeMap<usize, Pauli>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, factors: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        Self {
            coefficient,
            factors: factors.into_iter().collect(),
        }
    }

    pub fn identity(coefficient: f64) -> Self {
        Self::new(coefficient, [])
    }

    pub fn single(coefficient: f64, qubit: usize, p: Pauli) -> Self {
        Self::new(coefficient, [(qubit, p)])
    }

    pub fn pair(coefficient: f64, i: usize, pi: Pauli, j: usize, pj: Pauli) -> Self {
        Self::new(coefficient, [(i, pi), (j, pj)])
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.keys().next_back().copied()
    }

    /// Bit masks describing the action on basis states:
    /// `P|b⟩ = phase · i^{n_y} · (−1)^{popcount(b & sign_mask)} |b ^ flip_mask⟩`.
    pub(crate) fn masks(&self) -> PauliMasks {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut n_y = 0u32;
        for (&q, &p) in &self.factors {
            let bit = 1usize << q;
            match p {
                Pauli::X => flip |= bit,
                Pauli::Z => sign |= bit,
                Pauli::Y => {
                    flip |= bit;
                    sign |= bit;
                    n_y += 1;
                }
            }
        }
        let phase = match n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        PauliMasks {
            flip,
            sign,
            factor: phase * self.coefficient,
        }
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        if self.factors.is_empty() {
            return write!(f, "·I");
        }
        for (q, p) in &self.factors {
            write!(f, "·{p:?}{q}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub factor: C64,
}

impl PauliMasks {
    /// Matrix element `⟨col ^ flip| P |col⟩`.
    #[inline]
    pub fn element(&self, col: usize) -> C64 {
        if (col & self.sign).count_ones().is_multiple_of(2) {
            self.factor
        } else {
            -self.factor
        }
    }
}
