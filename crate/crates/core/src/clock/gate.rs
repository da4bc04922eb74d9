use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

/// Gates must satisfy `‖U†U − I‖_max ≤ UNITARY_TOLERANCE`.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// A 1- or 2-qubit unitary with its targets. For two targets the local
/// index is `2·bit(t0) + bit(t1)`, so `t0` is the more significant qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    name: String,
    matrix: DMatrix<C64>,
    targets: Vec<usize>,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl Gate {
    pub fn new(name: impl Into<String>, matrix: DMatrix<C64>, targets: Vec<usize>) -> Result<Self> {
        let k = targets.len();
        if !(1..=2).contains(&k) {
            return Err(invalid(format!("gates act on 1 or 2 qubits, got {k}")));
        }
        if k == 2 && targets[0] == targets[1] {
            return Err(invalid("gate targets must be distinct"));
        }
        let dim = 1 << k;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows(),
            });
        }
        let deviation = (matrix.adjoint() * &matrix - DMatrix::identity(dim, dim))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            name: name.into(),
            matrix,
            targets,
        })
    }

    fn fixed(name: &str, entries: &[C64], targets: Vec<usize>) -> Self {
        let dim = 1 << targets.len();
        Self::new(name, DMatrix::from_row_slice(dim, dim, entries), targets).expect("built-in gate is unitary")
    }

    pub fn identity(q: usize) -> Self {
        Self::fixed("i", &[c(1.0), c(0.0), c(0.0), c(1.0)], vec![q])
    }

    pub fn x(q: usize) -> Self {
        Self::fixed("x", &[c(0.0), c(1.0), c(1.0), c(0.0)], vec![q])
    }

    pub fn y(q: usize) -> Self {
        let i = C64::i();
        Self::fixed("y", &[c(0.0), -i, i, c(0.0)], vec![q])
    }

    pub fn z(q: usize) -> Self {
        Self::fixed("z", &[c(1.0), c(0.0), c(0.0), c(-1.0)], vec![q])
    }

    pub fn h(q: usize) -> Self {
        let r = c(FRAC_1_SQRT_2);
        Self::fixed("h", &[r, r, r, -r], vec![q])
    }

    pub fn s(q: usize) -> Self {
        Self::fixed("s", &[c(1.0), c(0.0), c(0.0), C64::i()], vec![q])
    }

    pub fn t(q: usize) -> Self {
        let p = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        Self::fixed("t", &[c(1.0), c(0.0), c(0.0), p], vec![q])
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        let mut m = [c(0.0); 16];
        for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            m[r * 4 + col] = c(1.0);
        }
        Self::fixed("cnot", &m, vec![control, target])
    }

    pub fn cz(a: usize, b: usize) -> Self {
        let mut m = [c(0.0); 16];
        for k in 0..4 {
            m[k * 4 + k] = c(if k == 3 { -1.0 } else { 1.0 });
        }
        Self::fixed("cz", &m, vec![a, b])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        let mut m = [c(0.0); 16];
        for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            m[r * 4 + col] = c(1.0);
        }
        Self::fixed("swap", &m, vec![a, b])
    }

    /// Haar-distributed unitary on the given targets.
    pub fn random(targets: Vec<usize>, rng: &mut impl Rng) -> Result<Self> {
        let dim = 1 << targets.len();
        Self::new("unitary", random_unitary(dim, rng), targets)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn adjoint(&self) -> Self {
        Self {
            name: format!("{}†", self.name),
            matrix: self.matrix.adjoint(),
            targets: self.targets.clone(),
        }
    }

    fn local_index(&self, global: usize) -> usize {
        match self.targets.as_slice() {
            [t] => (global >> t) & 1,
            [t0, t1] => 2 * ((global >> t0) & 1) + ((global >> t1) & 1),
            _ => unreachable!("gate arity checked at construction"),
        }
    }

    fn with_local(&self, global: usize, local: usize) -> usize {
        match self.targets.as_slice() {
            [t] => (global & !(1 << t)) | ((local & 1) << t),
            [t0, t1] => {
                let cleared = global & !(1 << t0) & !(1 << t1);
                cleared | (((local >> 1) & 1) << t0) | ((local & 1) << t1)
            }
            _ => unreachable!("gate arity checked at construction"),
        }
    }

    /// Nonzero entries `(row, value)` of column `col` of the full-register matrix.
    pub(crate) fn column(&self, col: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let local = self.local_index(col);
        let dim = self.matrix.nrows();
        (0..dim).filter_map(move |r| {
            let v = self.matrix[(r, local)];
            (v != C64::new(0.0, 0.0)).then(|| (self.with_local(col, r), v))
        })
    }

    /// `U ψ` on the full register.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for (col, &a) in psi.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (row, v) in self.column(col) {
                out[row] += v * a;
            }
        }
        out
    }
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c(1.0)
            }
        } else {
            c(0.0)
        }
    });
    q * phases
}
