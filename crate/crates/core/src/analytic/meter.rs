use num_complex::Complex64;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pointer::PointerState;
use crate::system::weak_value_norm_sqr;
use crate::SINGULAR_EPS;

use super::RecycleVariant;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Meter state after successful postselection, `<psi_f|Psi_T>` on `|0>_p`.
pub fn meter_postselected(cfg: &ExperimentConfig) -> PointerState {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    PointerState::new(I * (sp * cg), Complex64::new(cp * sg, 0.0))
}

/// `d/dg` of [`meter_postselected`].
pub fn meter_postselected_derivative(cfg: &ExperimentConfig) -> PointerState {
    let n = cfg.n_f64();
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    PointerState::new(I * (-n * sp * sg), Complex64::new(n * cp * cg, 0.0))
}

/// Meter state carried by the failed-postselection photons.
pub fn meter_orthogonal(cfg: &ExperimentConfig) -> PointerState {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    PointerState::new(Complex64::new(cp * cg, 0.0), I * (sp * sg))
}

fn trig_probability(cfg: &ExperimentConfig) -> f64 {
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    sp * sp * cg * cg + cp * cp * sg * sg
}

/// Single-pass postselection probability.
///
/// Evaluated through the weak value, `[n^2 cos^2 ng + |A_w|^2 sin^2 ng] /
/// (n^2 + |A_w|^2)`, and through the equivalent trigonometric form when the
/// weak value is singular.
pub fn postselection_probability(cfg: &ExperimentConfig) -> f64 {
    match weak_value_norm_sqr(cfg.n(), cfg.phi()) {
        Ok(aw2) => {
            let n2 = cfg.n_f64() * cfg.n_f64();
            let (sg, cg) = cfg.n_g().sin_cos();
            (n2 * cg * cg + aw2 * sg * sg) / (n2 + aw2)
        }
        Err(_) => trig_probability(cfg),
    }
}

/// Probability that the postselection fails; complements
/// [`postselection_probability`].
pub fn fail_probability(cfg: &ExperimentConfig) -> f64 {
    match weak_value_norm_sqr(cfg.n(), cfg.phi()) {
        Ok(aw2) => {
            let n2 = cfg.n_f64() * cfg.n_f64();
            let (sg, cg) = cfg.n_g().sin_cos();
            (n2 * sg * sg + aw2 * cg * cg) / (n2 + aw2)
        }
        Err(_) => 1.0 - trig_probability(cfg),
    }
}

/// The two sigma_y branch angles `n*phi - lambda*n*g`, lambda = +1, -1.
fn branch_angles(cfg: &ExperimentConfig) -> [f64; 2] {
    [cfg.n_phi() - cfg.n_g(), cfg.n_phi() + cfg.n_g()]
}

/// `1 - rL cos(x)` for each branch, rejecting a non-convergent cavity.
fn cavity_denominators(cfg: &ExperimentConfig) -> Result<[f64; 2]> {
    let rl = cfg.round_trip();
    let mut out = [0.0; 2];
    for (slot, x) in out.iter_mut().zip(branch_angles(cfg)) {
        let gain = rl * x.cos();
        if gain >= 1.0 {
            return Err(Error::DivergentCavity { gain });
        }
        *slot = 1.0 - gain;
    }
    Ok(out)
}

fn leading_denominator(cfg: &ExperimentConfig) -> Result<f64> {
    let gain = cfg.round_trip() * cfg.n_phi().cos();
    if gain >= 1.0 {
        return Err(Error::DivergentCavity { gain });
    }
    Ok(1.0 - gain)
}

fn require_nonzero_sin(quantity: &'static str, cfg: &ExperimentConfig) -> Result<f64> {
    let s = cfg.n_phi().sin();
    if s.abs() < SINGULAR_EPS {
        return Err(Error::singular(quantity, "sin(n*phi) = 0"));
    }
    Ok(s)
}

/// Meter state of all detected photons summed over every cavity traversal.
///
/// `Exact` evaluates `p M_f (1 - rL M_perp)^-1 |0>_p` in the sigma_y
/// eigenbasis. `Linear` keeps only the first order in `n*g`.
pub fn recycled_meter(cfg: &ExperimentConfig, variant: RecycleVariant) -> Result<PointerState> {
    let p = cfg.p();
    match variant {
        RecycleVariant::Exact => {
            let den = cavity_denominators(cfg)?;
            let [xp, xm] = branch_angles(cfg);
            Ok(PointerState::from_y_branches(
                I * (p * xp.sin() / den[0]),
                I * (p * xm.sin() / den[1]),
            ))
        }
        RecycleVariant::Linear => {
            cfg.warn_outside_weak_regime("recycled_meter");
            let den = leading_denominator(cfg)?;
            let s = require_nonzero_sin("recycled_meter", cfg)?;
            let c = cfg.n_phi().cos();
            let common = I * (p * s / den);
            let slope = -I * (cfg.n_g() * (c - cfg.round_trip()) / (s * den));
            Ok(PointerState::new(common, common * slope))
        }
    }
}

/// `d/dg` of [`recycled_meter`].
pub fn recycled_meter_derivative(
    cfg: &ExperimentConfig,
    variant: RecycleVariant,
) -> Result<PointerState> {
    let p = cfg.p();
    let n = cfg.n_f64();
    let rl = cfg.round_trip();
    match variant {
        RecycleVariant::Exact => {
            let den = cavity_denominators(cfg)?;
            let [xp, xm] = branch_angles(cfg);
            // d/dx [sin x / (1 - rL cos x)] = (cos x - rL) / (1 - rL cos x)^2
            let dp = (xp.cos() - rl) / (den[0] * den[0]);
            let dm = (xm.cos() - rl) / (den[1] * den[1]);
            Ok(PointerState::from_y_branches(
                I * (-n * p * dp),
                I * (n * p * dm),
            ))
        }
        RecycleVariant::Linear => {
            let den = leading_denominator(cfg)?;
            require_nonzero_sin("recycled_meter", cfg)?;
            let c = cfg.n_phi().cos();
            Ok(PointerState::new(
                Complex64::new(0.0, 0.0),
                Complex64::new(p * n * (c - rl) / (den * den), 0.0),
            ))
        }
    }
}

/// Leading-order detected power `p^2 sin^2(n phi) / (1 - rL cos n phi)^2`.
pub fn detected_power(cfg: &ExperimentConfig) -> Result<f64> {
    let den = leading_denominator(cfg)?;
    let s = cfg.n_phi().sin();
    let p = cfg.p();
    Ok(p * p * s * s / (den * den))
}

/// Meter state of the truly discarded light: the direct mirror reflection
/// plus everything that leaks back out toward the source.
pub fn discarded_meter(cfg: &ExperimentConfig, variant: RecycleVariant) -> Result<PointerState> {
    let p2 = cfg.p() * cfg.p();
    let l = cfg.loss_amplitude();
    let r = cfg.r();
    match variant {
        RecycleVariant::Exact => {
            let den = cavity_denominators(cfg)?;
            let [xp, xm] = branch_angles(cfg);
            let branch = |x: f64, d: f64| Complex64::new(-r + p2 * l * x.cos() / d, 0.0);
            Ok(PointerState::from_y_branches(
                branch(xp, den[0]),
                branch(xm, den[1]),
            ))
        }
        RecycleVariant::Linear => {
            cfg.warn_outside_weak_regime("discarded_meter");
            let den = leading_denominator(cfg)?;
            let (s, c) = cfg.n_phi().sin_cos();
            Ok(PointerState::new(
                Complex64::new((l * c - r) / den, 0.0),
                I * (cfg.n_g() * p2 * l * s / (den * den)),
            ))
        }
    }
}

fn recycled_split(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    let (s, c) = cfg.n_phi().sin_cos();
    let p2 = cfg.p() * cfg.p();
    let detected = p2 * s * s;
    let mismatch = cfg.loss_amplitude() * c - cfg.r();
    let discarded = mismatch * mismatch;
    let total = detected + discarded;
    if total == 0.0 {
        return Err(Error::singular(
            "detect_probability_recycled",
            "no detected or discarded light",
        ));
    }
    Ok((detected / total, discarded / total))
}

/// Fraction `P_c` of the outgoing (detected + discarded) light that is
/// detected, leading order in `n*g`.
pub fn detect_probability_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    recycled_split(cfg).map(|(pc, _)| pc)
}

/// `P_r = 1 - P_c`.
pub fn discard_probability_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    recycled_split(cfg).map(|(_, pr)| pr)
}
