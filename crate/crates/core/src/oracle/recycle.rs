use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pointer::PointerState;
use crate::system::{ghz_states, GhzStates};

use super::statevec::{apply_weak_coupling, postselect, FullState};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_PASSES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationReport {
    pub passes_used: usize,
    /// Norm of the first term left out of the sum.
    pub tail_norm: f64,
    /// Ratio of the last two term norms; tends to the dominant round-trip
    /// eigenvalue `rL cos(n phi - n g)`.
    pub last_ratio: f64,
}

/// Detected and discarded meter states accumulated pass by pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecyclingSum {
    pub detected: PointerState,
    pub discarded: PointerState,
    pub report: TruncationReport,
}

/// One traversal: fresh GHZ preparation with the given pointer, coupling,
/// then postselection onto the success and failure system states.
fn traverse(
    states: &GhzStates,
    g: f64,
    pointer: &PointerState,
) -> Result<(PointerState, PointerState)> {
    let coupled = apply_weak_coupling(&FullState::product(&states.initial, pointer)?, g);
    Ok((
        postselect(&coupled, &states.postselected)?,
        postselect(&coupled, &states.orthogonal)?,
    ))
}

/// Explicit partial sums of the recycling cavity.
///
/// Light entering through the mirror (`p |0>_p`) traverses the system; the
/// successful part is detected, the failed part returns with amplitude `L`,
/// leaks out through the mirror with `p` (discarded) and is reflected back in
/// with `r`. The direct reflection `-r |0>_p` seeds the discarded branch.
/// Stops once the next pass's contribution, extrapolated as a geometric tail
/// `term / (1 - ratio)`, drops below `tol`; the reported `tail_norm` is the
/// norm of that first omitted term.
pub fn recycle_truncated(
    cfg: &ExperimentConfig,
    tol: f64,
    max_passes: usize,
) -> Result<RecyclingSum> {
    let states = ghz_states(cfg.n(), cfg.phi())?;
    let (p, r, l) = (cfg.p(), cfg.r(), cfg.loss_amplitude());

    let mut circulating = PointerState::ground().scale(p);
    let mut detected = PointerState::zero();
    let mut discarded = PointerState::ground().scale(-r);
    let mut previous = f64::NAN;

    for pass in 0..max_passes {
        let (success, fail) = traverse(&states, cfg.g(), &circulating)?;
        let returning = fail.scale(l);
        let leaked = returning.scale(p);
        let term = (success.norm_sqr() + leaked.norm_sqr()).sqrt();
        if !term.is_finite() {
            return Err(Error::NonFinite("recycle_truncated"));
        }
        let ratio = term / previous;
        let tail = if ratio < 1.0 {
            term / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if pass > 0 && (term == 0.0 || tail < tol) {
            return Ok(RecyclingSum {
                detected,
                discarded,
                report: TruncationReport {
                    passes_used: pass,
                    tail_norm: term,
                    last_ratio: ratio,
                },
            });
        }
        detected = detected + success;
        discarded = discarded + leaked;
        circulating = returning.scale(r);
        previous = term;
    }
    Err(Error::Convergence(TruncationReport {
        passes_used: max_passes,
        tail_norm: previous,
        last_ratio: f64::NAN,
    }))
}

/// Detected meter state of the recycling cavity by explicit truncation.
pub fn recycled_meter_truncated(
    cfg: &ExperimentConfig,
    tol: f64,
    max_passes: usize,
) -> Result<(PointerState, TruncationReport)> {
    recycle_truncated(cfg, tol, max_passes).map(|s| (s.detected, s.report))
}

/// Single-pass meter states `(<psi_f|Psi_T>, <psi_f_perp|Psi_T>)` from the
/// full state vector.
pub fn single_pass_meters(cfg: &ExperimentConfig) -> Result<(PointerState, PointerState)> {
    let states = ghz_states(cfg.n(), cfg.phi())?;
    traverse(&states, cfg.g(), &PointerState::ground())
}
