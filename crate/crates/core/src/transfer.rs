//! Pointer transfer operators for one traversal of the coupled system.
//!
//! Both operators are functions of sigma_y alone and therefore commute.

use num_complex::Complex64;

use crate::config::ExperimentConfig;
use crate::pointer::{PointerOperator, SIGMA_Y};

/// `M_f = i sin(n*phi - n*g*sigma_y)`: pointer map for photons leaving
/// through the postselected (detected) port.
pub fn meter_transfer_success(cfg: &ExperimentConfig) -> PointerOperator {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    let i = Complex64::new(0.0, 1.0);
    PointerOperator::identity().scale(i * (sp * cg)) + SIGMA_Y.scale(i * (-cp * sg))
}

/// `M_perp = cos(n*phi - n*g*sigma_y)`: pointer map for photons sent back
/// toward the input by a failed postselection.
pub fn meter_transfer_fail(cfg: &ExperimentConfig) -> PointerOperator {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    PointerOperator::identity().scale(Complex64::new(cp * cg, 0.0))
        + SIGMA_Y.scale(Complex64::new(sp * sg, 0.0))
}
