//! Classical↔quantum bridge: detailed-balance kernels, their quantized
//! Hamiltonians, Perron stochasticization, and conductance bounds.
//!
//! Every [`StochasticMatrix`] is column-stochastic.

mod conductance;
mod perron;
mod stochastic;

pub use conductance::{
    conductance, gap_bounds_check, Conductance, GapBoundsReport, EXACT_CUT_LIMIT, STATIONARY_TOLERANCE,
};
pub use perron::{perron_stochasticize, PerronData};
pub use stochastic::{
    metropolis_acceptance, metropolis_matrix, quantize, GibbsState, Quantized, StochasticMatrix,
    DETAILED_BALANCE_TOLERANCE, MAX_METROPOLIS_QUBITS, QUANTIZE_RESIDUAL, STOCHASTIC_TOLERANCE,
};
