//! Brute-force reference implementation.
//!
//! Nothing here calls the closed forms in [`crate::analytic`] except
//! [`mixture`], which rebuilds readout statistics from their definitions, and
//! [`mc`], which samples from the model distribution.

pub mod fisher;
pub mod mc;
pub mod mixture;
pub mod recycle;
pub mod statevec;

pub use fisher::{classical_fisher_numeric, qfi_numeric, FdEstimate};
pub use mc::{
    default_bracket, mc_replica, mc_sample, mle_estimate, mle_estimate_weighted, outcome_masses,
    per_shot_fisher, replica_rng, sample_counts, summarize, EfficiencySummary, McResult,
    OutcomeCounts,
};
pub use mixture::{
    mixture_shift_recycled, mixture_shift_standard, recycled_outcome_masses,
    standard_outcome_masses,
};
pub use recycle::{
    recycle_truncated, recycled_meter_truncated, single_pass_meters, RecyclingSum,
    TruncationReport, DEFAULT_MAX_PASSES, DEFAULT_TOL,
};
pub use statevec::{apply_weak_coupling, postselect, FullState, MAX_ORACLE_QUBITS};
