//! Readout-error statistics rebuilt from their definitions: convex mixtures
//! of branch shifts, and outcome masses assembled from simulated pointer
//! states rather than from the closed-form factors.

use crate::analytic::{
    detect_probability_recycled, discard_probability_recycled, fail_probability,
    pointer_shift_discarded, pointer_shift_orthogonal, pointer_shift_recycled,
    pointer_shift_standard, postselection_probability,
};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pointer::PointerState;

use super::recycle::{recycle_truncated, single_pass_meters};

fn readout_weights(cfg: &ExperimentConfig) -> (f64, f64) {
    let n = cfg.n() as i32;
    (
        (1.0 - cfg.q_keep_to_discard()).powi(n),
        cfg.q_discard_to_keep().powi(n),
    )
}

fn weighted_mean(a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    let total = a.0 + b.0;
    if total == 0.0 {
        return Err(Error::singular("mixture", "no registered events"));
    }
    Ok((a.0 * a.1 + b.0 * b.1) / total)
}

/// Registered mean pointer shift of the single-pass protocol: correct
/// postselections mixed with misread failures.
pub fn mixture_shift_standard(cfg: &ExperimentConfig) -> Result<f64> {
    let (keep, leak) = readout_weights(cfg);
    weighted_mean(
        (
            postselection_probability(cfg) * keep,
            pointer_shift_standard(cfg)?,
        ),
        (fail_probability(cfg) * leak, pointer_shift_orthogonal(cfg)?),
    )
}

/// Registered mean pointer shift of the recycled protocol.
pub fn mixture_shift_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    let (keep, leak) = readout_weights(cfg);
    let kept = detect_probability_recycled(cfg)? * keep;
    let leaked = discard_probability_recycled(cfg)? * leak;
    let leaked_shift = if leaked > 0.0 {
        pointer_shift_discarded(cfg)?
    } else {
        0.0
    };
    weighted_mean((kept, pointer_shift_recycled(cfg)?), (leaked, leaked_shift))
}

/// Projective `|<R|phi>|^2 / <phi|phi>` and the same for `L`.
fn projective(state: &PointerState) -> Result<(f64, f64)> {
    let norm = state.norm_sqr();
    if norm == 0.0 {
        return Err(Error::singular("projective readout", "empty branch"));
    }
    Ok((
        PointerState::right().inner(state).norm_sqr() / norm,
        PointerState::left().inner(state).norm_sqr() / norm,
    ))
}

fn registered_masses(
    kept: &PointerState,
    other: &PointerState,
    cfg: &ExperimentConfig,
) -> Result<Vec<f64>> {
    let (keep, leak) = readout_weights(cfg);
    let (nk, no) = (kept.norm_sqr(), other.norm_sqr());
    let total = nk + no;
    let (wk, wo) = (nk / total * keep, no / total * leak);
    let (kr, kl) = projective(kept)?;
    let (mut h_r, mut h_l) = (wk * kr, wk * kl);
    if wo > 0.0 {
        let (or, ol) = projective(other)?;
        h_r += wo * or;
        h_l += wo * ol;
    }
    Ok(vec![h_r, h_l])
}

/// Registered R/L masses of the single-pass protocol, built from the
/// simulated success and failure pointer states.
pub fn standard_outcome_masses(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let (success, fail) = single_pass_meters(cfg)?;
    registered_masses(&success, &fail, cfg)
}

/// Registered R/L masses of the recycled protocol, built from the explicitly
/// truncated detected and discarded pointer states.
pub fn recycled_outcome_masses(cfg: &ExperimentConfig, tol: f64) -> Result<Vec<f64>> {
    let sum = recycle_truncated(cfg, tol, super::recycle::DEFAULT_MAX_PASSES)?;
    registered_masses(&sum.detected, &sum.discarded, cfg)
}
