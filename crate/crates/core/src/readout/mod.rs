//! Readout-error model for the single-pass and recycled protocols.
//!
//! Each of the `n` qubits is misread independently, so a kept photon is
//! recognised as kept with probability `(1 - q_kd)^n` and a discarded photon
//! is mistaken for a kept one with probability `q_dk^n`. The recycled
//! protocol reuses the same two rates for its detected/discarded channels.
//!
//! Readout outcomes on the pointer are projective in the `|R>`, `|L>` basis:
//! a branch with mean shift `s = <sigma_R>` yields R with probability
//! `(1 + s)/2` and L with probability `(1 - s)/2`.

use crate::analytic::{
    detect_probability_recycled, discard_probability_recycled, fail_probability,
    pointer_shift_discarded, pointer_shift_recycled, postselection_probability,
};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::system::weak_value_norm_sqr;
use crate::SINGULAR_EPS;

/// Sub-normalized readout statistics of the recycled protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutOutcomeDistribution {
    /// Mass of events registered as kept with pointer outcome R.
    pub h_r: f64,
    /// Mass of events registered as kept with pointer outcome L.
    pub h_l: f64,
    /// Everything else: events registered as discarded.
    pub complement: f64,
}

impl ReadoutOutcomeDistribution {
    pub fn kept(&self) -> f64 {
        self.h_r + self.h_l
    }

    pub fn masses(&self) -> [f64; 3] {
        [self.h_r, self.h_l, self.complement]
    }
}

/// Loss of correct postselection results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossRate {
    /// `1 - (1 - q_kd)^n`.
    pub exact: f64,
    /// Small-`q` approximation `n * q_kd`.
    pub approx: f64,
}

/// Probability a kept photon survives readout, `(1 - q_kd)^n`.
fn keep_survival(cfg: &ExperimentConfig) -> f64 {
    (1.0 - cfg.q_keep_to_discard()).powi(cfg.n() as i32)
}

/// Probability a discarded photon is misread as kept, `q_dk^n`.
fn discard_leak(cfg: &ExperimentConfig) -> f64 {
    cfg.q_discard_to_keep().powi(cfg.n() as i32)
}

/// Default central-difference step for Fisher information in `g`.
pub fn default_fd_step(g: f64) -> f64 {
    (g.abs() * 1e-3).max(1e-7)
}

/// `P (1 - q_kd)^n + P_perp q_dk^n`.
pub fn modified_postselection_probability(cfg: &ExperimentConfig) -> f64 {
    postselection_probability(cfg) * keep_survival(cfg) + fail_probability(cfg) * discard_leak(cfg)
}

pub fn loss_rate(cfg: &ExperimentConfig) -> LossRate {
    LossRate {
        exact: 1.0 - keep_survival(cfg),
        approx: cfg.n_f64() * cfg.q_keep_to_discard(),
    }
}

/// Fraction of registered postselection events that are misread failures.
pub fn relative_error_rate(cfg: &ExperimentConfig) -> Result<f64> {
    let total = modified_postselection_probability(cfg);
    if total == 0.0 {
        return Err(Error::singular(
            "relative_error_rate",
            "modified postselection probability is zero",
        ));
    }
    Ok(fail_probability(cfg) * discard_leak(cfg) / total)
}

/// Decrease factor `Gamma(n)` of the single-pass mean pointer shift.
pub fn gamma_standard(cfg: &ExperimentConfig) -> Result<f64> {
    let total = modified_postselection_probability(cfg);
    if total == 0.0 {
        return Err(Error::singular(
            "gamma_standard",
            "modified postselection probability is zero",
        ));
    }
    let p = postselection_probability(cfg);
    Ok(p * (keep_survival(cfg) - discard_leak(cfg)) / total)
}

/// Decrease factor `f(n)` of the single-pass Fisher information.
pub fn fisher_factor_standard(cfg: &ExperimentConfig) -> Result<f64> {
    let aw2 = weak_value_norm_sqr(cfg.n(), cfg.phi())?;
    let n2 = cfg.n_f64() * cfg.n_f64();
    let keep = keep_survival(cfg);
    let leak = discard_leak(cfg);
    let den = n2 * keep + aw2 * leak;
    if den == 0.0 {
        return Err(Error::singular(
            "fisher_factor_standard",
            "no registered postselection events",
        ));
    }
    Ok(n2 * (keep - leak).powi(2) / den)
}

/// `P_c (1 - q_cr)^n + P_r q_rc^n`.
pub fn modified_detection_probability_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    Ok(detect_probability_recycled(cfg)? * keep_survival(cfg)
        + discard_probability_recycled(cfg)? * discard_leak(cfg))
}

/// Decrease factor `Gamma_c(n)` of the recycled mean pointer shift.
pub fn gamma_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    let c = cfg.n_phi().cos();
    let l = cfg.loss_amplitude();
    let rl = cfg.round_trip();
    if (c - rl).abs() < SINGULAR_EPS {
        return Err(Error::singular("gamma_recycled", "rL = cos(n*phi)"));
    }
    let total = modified_detection_probability_recycled(cfg)?;
    if total == 0.0 {
        return Err(Error::singular(
            "gamma_recycled",
            "modified detection probability is zero",
        ));
    }
    let pc = detect_probability_recycled(cfg)?;
    let leak_weight = l * (l * c - cfg.r()) / (c - rl);
    Ok(pc * (keep_survival(cfg) - discard_leak(cfg) * leak_weight) / total)
}

/// Projective R/L probabilities for a branch with mean shift `shift`.
pub fn outcome_probabilities(shift: f64) -> Result<(f64, f64)> {
    if !(-1.0..=1.0).contains(&shift) {
        return Err(Error::InvalidShift(shift));
    }
    Ok((0.5 * (1.0 + shift), 0.5 * (1.0 - shift)))
}

/// Readout statistics `h_j = P_c (1-q)^n w_{c,j} + P_r q^n w_{r,j}`.
pub fn modified_outcome_distribution(cfg: &ExperimentConfig) -> Result<ReadoutOutcomeDistribution> {
    let kept_weight = detect_probability_recycled(cfg)? * keep_survival(cfg);
    let leak_weight = discard_probability_recycled(cfg)? * discard_leak(cfg);

    let (mut h_r, mut h_l) = (0.0, 0.0);
    if kept_weight > 0.0 {
        let (w_r, w_l) = outcome_probabilities(pointer_shift_recycled(cfg)?)?;
        h_r += kept_weight * w_r;
        h_l += kept_weight * w_l;
    }
    if leak_weight > 0.0 {
        let (w_r, w_l) = outcome_probabilities(pointer_shift_discarded(cfg)?)?;
        h_r += leak_weight * w_r;
        h_l += leak_weight * w_l;
    }
    Ok(ReadoutOutcomeDistribution {
        h_r,
        h_l,
        complement: 1.0 - h_r - h_l,
    })
}

/// Classical Fisher information of the registered R/L outcomes of the
/// recycled protocol, with `d h_j / dg` by central differences.
pub fn modified_fisher_recycled(cfg: &ExperimentConfig, fd_step: f64) -> Result<f64> {
    let at = modified_outcome_distribution(cfg)?;
    let up = modified_outcome_distribution(&cfg.with_g(cfg.g() + fd_step))?;
    let down = modified_outcome_distribution(&cfg.with_g(cfg.g() - fd_step))?;

    let terms = [(at.h_r, up.h_r, down.h_r), (at.h_l, up.h_l, down.h_l)];
    if terms.iter().all(|(h, _, _)| *h <= 0.0) {
        return Err(Error::AllMassesZero);
    }
    let mut info = 0.0;
    for (j, (h, hp, hm)) in terms.into_iter().enumerate() {
        if h <= 0.0 {
            log::warn!("modified_fisher_recycled: outcome {j} has zero mass; term skipped");
            continue;
        }
        let dh = (hp - hm) / (2.0 * fd_step);
        info += dh * dh / h;
    }
    Ok(info)
}

/// The same Fisher information without readout errors.
pub fn fisher_recycled_noiseless(cfg: &ExperimentConfig, fd_step: f64) -> Result<f64> {
    modified_fisher_recycled(&cfg.with_readout(0.0, 0.0)?, fd_step)
}

/// Decrease factor `f_c(n)` of the recycled Fisher information.
pub fn fisher_factor_recycled(cfg: &ExperimentConfig, fd_step: f64) -> Result<f64> {
    let clean = fisher_recycled_noiseless(cfg, fd_step)?;
    if clean == 0.0 {
        return Err(Error::singular(
            "fisher_factor_recycled",
            "noiseless Fisher information is zero",
        ));
    }
    Ok(modified_fisher_recycled(cfg, fd_step)? / clean)
}
