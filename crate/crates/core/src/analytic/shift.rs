//! Mean pointer readout `<sigma_R>` for each meter branch.

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::SINGULAR_EPS;

/// `<sigma_R>` on the postselected meter state (exact in `g`).
pub fn pointer_shift_standard(cfg: &ExperimentConfig) -> Result<f64> {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    let den = sp * sp * cg * cg + cp * cp * sg * sg;
    if den == 0.0 {
        return Err(Error::singular("pointer_shift_standard", "undefined shift"));
    }
    Ok(-2.0 * sp * cp * sg * cg / den)
}

/// `<sigma_R>` on the failed-postselection meter state (exact in `g`).
pub fn pointer_shift_orthogonal(cfg: &ExperimentConfig) -> Result<f64> {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    let den = cp * cp * cg * cg + sp * sp * sg * sg;
    if den == 0.0 {
        return Err(Error::singular(
            "pointer_shift_orthogonal",
            "undefined shift",
        ));
    }
    Ok(2.0 * sp * cp * sg * cg / den)
}

/// Leading-order `<sigma_R>` on the recycled (detected) meter state.
pub fn pointer_shift_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.warn_outside_weak_regime("pointer_shift_recycled");
    let (s, c) = cfg.n_phi().sin_cos();
    if s.abs() < SINGULAR_EPS {
        return Err(Error::singular("pointer_shift_recycled", "sin(n*phi) = 0"));
    }
    let rl = cfg.round_trip();
    let den = 1.0 - rl * c;
    if den <= 0.0 {
        return Err(Error::DivergentCavity { gain: rl * c });
    }
    Ok(-2.0 * cfg.n_g() * (c - rl) / (den * s))
}

/// Leading-order `<sigma_R>` on the discarded meter state.
pub fn pointer_shift_discarded(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.warn_outside_weak_regime("pointer_shift_discarded");
    let (s, c) = cfg.n_phi().sin_cos();
    let l = cfg.loss_amplitude();
    let rl = cfg.round_trip();
    let den = 1.0 - rl * c;
    if den <= 0.0 {
        return Err(Error::DivergentCavity { gain: rl * c });
    }
    let mismatch = l * c - cfg.r();
    if mismatch.abs() < SINGULAR_EPS {
        return Err(Error::singular(
            "pointer_shift_discarded",
            "impedance matched",
        ));
    }
    let p2 = cfg.p() * cfg.p();
    Ok(2.0 * cfg.n_g() * p2 * l * s / (den * mismatch))
}

/// Walk-off factor `<sigma_R>_c / <sigma_R>_f` at the same configuration.
pub fn walk_off_ratio(cfg: &ExperimentConfig) -> Result<f64> {
    let standard = pointer_shift_standard(cfg)?;
    if standard == 0.0 {
        return Err(Error::singular("walk_off_ratio", "zero single-pass shift"));
    }
    Ok(pointer_shift_recycled(cfg)? / standard)
}
