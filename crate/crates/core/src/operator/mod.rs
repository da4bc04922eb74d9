//! Numeric substrate: state vectors, Pauli-term Hermitian operators,
//! eigensolvers, and real/imaginary-time propagation.

mod eigen;
mod matrix;
mod pauli;
mod propagate;
mod state;

pub use eigen::{
    ground_space, lanczos_lowest, lowest_eigenpairs, lowest_eigenpairs_with, EigenMethod, FullDecomposition,
    GroundSpace, LanczosOptions, Spectrum, DEGENERACY_TOLERANCE, DENSE_TOLERANCE, ITERATIVE_TOLERANCE,
};
pub use matrix::{
    build_operator, HermitianOperator, Realization, SparseMatrix, Storage, DENSE_CUTOFF, HERMITIAN_TOLERANCE,
    MAX_SPARSE_QUBITS,
};
pub use pauli::{Pauli, PauliTerm};
pub use propagate::{
    evolve_imaginary, evolve_real, evolve_real_observed, expm_apply, expm_dense, Constant, HamiltonianSource,
    ImaginaryTimeResult, EXACT_STEP_QUBITS, NORM_DRIFT_PER_TIME,
};
pub use state::StateVector;

pub use num_complex::Complex64;
