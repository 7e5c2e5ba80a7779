//! Closed-form evaluation of the noiseless model.
//!
//! Recycled quantities come in two flavours, see [`RecycleVariant`]. Operator
//! expressions are evaluated in the sigma_y eigenbasis, where every transfer
//! operator is diagonal, so no matrix inversion is needed.

mod fisher;
mod meter;
mod shift;

pub use fisher::{qfi_functional, qfi_recycled, qfi_standard, QfiForm};
pub use meter::{
    detect_probability_recycled, detected_power, discard_probability_recycled, discarded_meter,
    fail_probability, meter_orthogonal, meter_postselected, meter_postselected_derivative,
    postselection_probability, recycled_meter, recycled_meter_derivative,
};
pub use shift::{
    pointer_shift_discarded, pointer_shift_orthogonal, pointer_shift_recycled,
    pointer_shift_standard, walk_off_ratio,
};

/// Evaluation mode for recycled meter states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecycleVariant {
    /// Full operator geometric series, exact in `g`.
    Exact,
    /// First order in `n*g`.
    Linear,
}
