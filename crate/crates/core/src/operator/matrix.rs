use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

use super::pauli::{PauliMasks, PauliTerm};
use super::StateVector;

/// Largest register realized as a dense matrix by default.
pub const DENSE_CUTOFF: usize = 12;
/// Largest register accepted at all (sparse realization).
pub const MAX_SPARSE_QUBITS: usize = 26;
/// Maximum entrywise asymmetry tolerated by the Hermiticity check.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    /// Duplicates are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut rows: Vec<Vec<(usize, C64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside dimension {dim}");
            rows[r].push((c, v));
        }
        Self::from_rows(dim, rows)
    }

    fn from_rows(dim: usize, rows: Vec<Vec<(usize, C64)>>) -> Self {
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut iter = row.into_iter().peekable();
            while let Some((c, mut v)) = iter.next() {
                while let Some(&(c2, v2)) = iter.peek() {
                    if c2 != c {
                        break;
                    }
                    v += v2;
                    iter.next();
                }
                if v != ZERO {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.cols[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => ZERO,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim)
            .flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.values[k])))
    }

    pub fn matvec(&self, x: &[C64], y: &mut [C64]) {
        let kernel = |(r, out): (usize, &mut C64)| {
            let mut acc = ZERO;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.cols[k]];
            }
            *out = acc;
        };
        if self.dim >= 1 << 14 {
            y.par_iter_mut().enumerate().for_each(kernel);
        } else {
            y.iter_mut().enumerate().for_each(kernel);
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    fn max_asymmetry(&self) -> f64 {
        self.iter()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }
}

/// Backing storage of an operator.
#[derive(Clone, Debug, PartialEq)]
pub enum Realization {
    Dense(DMatrix<C64>),
    Sparse(SparseMatrix),
}

/// Requested storage when building from Pauli terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    /// Dense up to [`DENSE_CUTOFF`] qubits, sparse above.
    Auto,
    Dense,
    Sparse,
}

/// Hermitian operator with an explicit matrix realization.
///
/// Operators assembled from Pauli terms keep the term list for symbolic
/// reuse; operators assembled from matrices (clock Hamiltonians, quantized
/// kernels) carry an empty term list.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    dim: usize,
    n_qubits: Option<usize>,
    terms: Vec<PauliTerm>,
    realization: Realization,
}

/// Build `Σ coefficient · (Pauli string)` on `n_qubits` qubits.
pub fn build_operator(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<HermitianOperator> {
    HermitianOperator::from_terms(n_qubits, terms, Storage::Auto)
}

impl HermitianOperator {
    pub fn from_terms(n_qubits: usize, terms: Vec<PauliTerm>, storage: Storage) -> Result<Self> {
        if n_qubits == 0 {
            return Err(invalid("operator needs at least one qubit"));
        }
        let dense = match storage {
            Storage::Auto => n_qubits <= DENSE_CUTOFF,
            Storage::Dense => true,
            Storage::Sparse => false,
        };
        let limit = if dense { DENSE_CUTOFF } else { MAX_SPARSE_QUBITS };
        if n_qubits > limit {
            return Err(Error::TooLarge {
                what: "qubits",
                size: n_qubits,
                limit,
            });
        }
        for t in &terms {
            if !t.coefficient.is_finite() {
                return Err(invalid(format!("non-finite coefficient in term {t}")));
            }
            if let Some(q) = t.max_qubit() {
                if q >= n_qubits {
                    return Err(Error::QubitOutOfRange { index: q, n_qubits });
                }
            }
        }
        let dim = 1usize << n_qubits;
        let groups = group_by_flip(&terms);
        let realization = if dense {
            let mut m = DMatrix::zeros(dim, dim);
            for (flip, masks) in &groups {
                for col in 0..dim {
                    let v: C64 = masks.iter().map(|m| m.element(col)).sum();
                    m[(col ^ flip, col)] += v;
                }
            }
            Realization::Dense(m)
        } else {
            // row r couples to column r ^ flip with element of that column
            let rows: Vec<Vec<(usize, C64)>> = (0..dim)
                .into_par_iter()
                .map(|r| {
                    groups
                        .iter()
                        .map(|(flip, masks)| {
                            let c = r ^ flip;
                            (c, masks.iter().map(|m| m.element(c)).sum())
                        })
                        .collect()
                })
                .collect();
            Realization::Sparse(SparseMatrix::from_rows(dim, rows))
        };
        Ok(Self {
            dim,
            n_qubits: Some(n_qubits),
            terms,
            realization,
        })
    }

    pub fn from_dense(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(invalid("operator matrix must be square and non-empty"));
        }
        let op = Self {
            dim: matrix.nrows(),
            n_qubits: qubits_of(matrix.nrows()),
            terms: Vec::new(),
            realization: Realization::Dense(matrix),
        };
        op.check_hermitian()?;
        Ok(op)
    }

    pub fn from_real_dense(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::from_dense(matrix.map(|v| C64::new(v, 0.0)))
    }

    pub fn from_sparse(matrix: SparseMatrix) -> Result<Self> {
        let op = Self {
            dim: matrix.dim(),
            n_qubits: qubits_of(matrix.dim()),
            terms: Vec::new(),
            realization: Realization::Sparse(matrix),
        };
        op.check_hermitian()?;
        Ok(op)
    }

    /// Sparse assembly, densified when the dimension is small enough.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("operator dimension must be positive"));
        }
        let sparse = SparseMatrix::from_triplets(dim, triplets);
        if dim <= 1 << DENSE_CUTOFF {
            Self::from_dense(sparse.to_dense())
        } else {
            Self::from_sparse(sparse)
        }
    }

    pub fn diagonal_from(values: &[f64]) -> Result<Self> {
        Self::from_triplets(
            values.len(),
            values.iter().enumerate().map(|(i, &v)| (i, i, C64::new(v, 0.0))),
        )
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_triplets(dim, std::iter::empty())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal_from(&vec![1.0; dim])
    }

    /// `Σ_k weight_k · op_k`; all operators must share a dimension.
    pub fn linear_combination(parts: &[(f64, &HermitianOperator)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| invalid("empty linear combination"))?.1;
        let dim = first.dim;
        for (_, op) in parts {
            if op.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: op.dim,
                });
            }
        }
        let all_sparse = parts
            .iter()
            .all(|(_, op)| matches!(op.realization, Realization::Sparse(_)));
        let realization = if all_sparse {
            let triplets = parts.iter().flat_map(|(w, op)| match &op.realization {
                Realization::Sparse(s) => s.iter().map(move |(r, c, v)| (r, c, v * *w)),
                Realization::Dense(_) => unreachable!(),
            });
            Realization::Sparse(SparseMatrix::from_triplets(dim, triplets))
        } else {
            let mut m = DMatrix::<C64>::zeros(dim, dim);
            for (w, op) in parts {
                match &op.realization {
                    Realization::Dense(d) => m.zip_apply(d, |a, b| *a += b * *w),
                    Realization::Sparse(s) => {
                        for (r, c, v) in s.iter() {
                            m[(r, c)] += v * *w;
                        }
                    }
                }
            }
            Realization::Dense(m)
        };
        let symbolic = first.n_qubits.is_some()
            && parts
                .iter()
                .all(|(_, op)| op.n_qubits == first.n_qubits && (!op.terms.is_empty() || op.is_zero()));
        let terms = if symbolic {
            parts
                .iter()
                .flat_map(|(w, op)| {
                    op.terms.iter().map(move |t| PauliTerm {
                        coefficient: t.coefficient * w,
                        factors: t.factors.clone(),
                    })
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self {
            dim,
            n_qubits: first.n_qubits,
            terms,
            realization,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> Option<usize> {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.realization, Realization::Dense(_))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        match &self.realization {
            Realization::Dense(m) => m[(r, c)],
            Realization::Sparse(s) => s.get(r, c),
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![ZERO; self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim, "operator applied to vector of wrong dimension");
        match &self.realization {
            Realization::Dense(m) => {
                for (r, out) in y.iter_mut().enumerate() {
                    let mut acc = ZERO;
                    for (c, xc) in x.iter().enumerate() {
                        acc += m[(r, c)] * xc;
                    }
                    *out = acc;
                }
            }
            Realization::Sparse(s) => s.matvec(x, y),
        }
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: psi.dim(),
            });
        }
        Ok(StateVector::from_raw(self.apply(psi.amplitudes())))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.realization {
            Realization::Dense(m) => m.clone(),
            Realization::Sparse(s) => s.to_dense(),
        }
    }

    pub fn to_sparse(&self) -> Self {
        let sparse = match &self.realization {
            Realization::Sparse(s) => s.clone(),
            Realization::Dense(m) => SparseMatrix::from_triplets(
                self.dim,
                (0..self.dim)
                    .flat_map(|r| (0..self.dim).map(move |c| (r, c)))
                    .map(|(r, c)| (r, c, m[(r, c)])),
            ),
        };
        Self {
            dim: self.dim,
            n_qubits: self.n_qubits,
            terms: self.terms.clone(),
            realization: Realization::Sparse(sparse),
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        match &self.realization {
            Realization::Dense(m) => (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || m[(r, c)] == ZERO)),
            Realization::Sparse(s) => s.iter().all(|(r, c, v)| r == c || v == ZERO),
        }
    }

    pub fn is_real(&self) -> bool {
        match &self.realization {
            Realization::Dense(m) => m.iter().all(|v| v.im == 0.0),
            Realization::Sparse(s) => s.iter().all(|(_, _, v)| v.im == 0.0),
        }
    }

    fn is_zero(&self) -> bool {
        match &self.realization {
            Realization::Dense(m) => m.iter().all(|v| *v == ZERO),
            Realization::Sparse(s) => s.nnz() == 0,
        }
    }

    /// `max |H[i][j] − conj(H[j][i])|`.
    pub fn max_asymmetry(&self) -> f64 {
        match &self.realization {
            Realization::Dense(m) => {
                let mut worst = 0.0f64;
                for r in 0..self.dim {
                    for c in r..self.dim {
                        worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
                    }
                }
                worst
            }
            Realization::Sparse(s) => s.max_asymmetry(),
        }
    }

    fn check_hermitian(&self) -> Result<()> {
        let asymmetry = self.max_asymmetry();
        if asymmetry > HERMITIAN_TOLERANCE || asymmetry.is_nan() {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(())
    }
}

fn qubits_of(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

fn group_by_flip(terms: &[PauliTerm]) -> Vec<(usize, Vec<PauliMasks>)> {
    let mut groups: Vec<(usize, Vec<PauliMasks>)> = Vec::new();
    for t in terms {
        let m = t.masks();
        match groups.iter_mut().find(|(f, _)| *f == m.flip) {
            Some((_, v)) => v.push(m),
            None => groups.push((m.flip, vec![m])),
        }
    }
    groups
}
