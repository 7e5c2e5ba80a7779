//! Weak-value amplification with GHZ-entangled probes and a power-recycling
//! cavity.
//!
//! [`analytic`] and [`readout`] evaluate the model in closed form; [`oracle`]
//! recomputes the same quantities by full state-vector simulation, explicit
//! recycling sums, finite differences and Monte Carlo sampling.

pub mod analytic;
pub mod config;
pub mod error;
pub mod grid;
pub mod optimize;
pub mod oracle;
pub mod pointer;
pub mod readout;
pub mod system;
pub mod transfer;

pub use config::{make_config, ExperimentConfig, RawConfig};
pub use error::{Error, Result};
pub use pointer::{PointerOperator, PointerState, SIGMA_R, SIGMA_Y};
pub use system::{ghz_states, weak_value, GhzStates, SystemState};

/// Below this magnitude `sin(n phi)` and similar divisors count as zero.
pub const SINGULAR_EPS: f64 = 1e-12;
