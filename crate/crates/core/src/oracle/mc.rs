//! Monte Carlo estimation of `g` from simulated readout counts.
//!
//! Each shot ends in one of three registered outcomes: kept with pointer R,
//! kept with pointer L, or discarded. Replicas draw from independent ChaCha8
//! streams keyed by `(seed, replica)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::readout::{default_fd_step, modified_outcome_distribution};

use super::fisher::classical_fisher_numeric;

/// Convergence tolerance of the likelihood maximization, in units of `g`.
pub const MLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub right: u64,
    pub left: u64,
    pub discard: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.right + self.left + self.discard
    }

    fn as_array(&self) -> [u64; 3] {
        [self.right, self.left, self.discard]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McResult {
    pub shots: u64,
    pub counts: OutcomeCounts,
    pub g_hat: Option<f64>,
    pub se_hat: Option<f64>,
    pub seed: u64,
    pub replica: u64,
    /// Why `g_hat` is missing, if it is.
    pub failure: Option<String>,
}

/// Model probabilities `[h_R, h_L, discard]` at `cfg`.
pub fn outcome_masses(cfg: &ExperimentConfig) -> Result<[f64; 3]> {
    Ok(modified_outcome_distribution(cfg)?.masses())
}

/// Per-shot classical Fisher information of the three-outcome model.
pub fn per_shot_fisher(cfg: &ExperimentConfig) -> Result<f64> {
    classical_fisher_numeric(
        |g| outcome_masses(&cfg.with_g(g)).map(|m| m.to_vec()),
        cfg.g(),
        default_fd_step(cfg.g()),
    )
}

pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// Multinomial draw by successive conditional binomials.
pub fn sample_counts(masses: [f64; 3], shots: u64, rng: &mut ChaCha8Rng) -> Result<OutcomeCounts> {
    let mut remaining = shots;
    let mut left_mass = 1.0;
    let mut out = [0u64; 3];
    for (k, m) in masses.iter().enumerate().take(2) {
        let p = if left_mass > 0.0 {
            (m / left_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(remaining, p)
            .map_err(|_| Error::NonFinite("sample_counts"))?
            .sample(rng);
        out[k] = draw;
        remaining -= draw;
        left_mass -= m;
    }
    out[2] = remaining;
    Ok(OutcomeCounts {
        right: out[0],
        left: out[1],
        discard: out[2],
    })
}

/// Bracket of +-50 standard deviations (at least +-|g|/2) around `g`.
pub fn default_bracket(cfg: &ExperimentConfig, shots: u64) -> Result<(f64, f64)> {
    let info = per_shot_fisher(cfg)?;
    let sd = 1.0 / (shots as f64 * info).sqrt();
    let half = (50.0 * sd).max(0.5 * cfg.g().abs());
    Ok((cfg.g() - half, cfg.g() + half))
}

/// Maximum-likelihood `g` for multinomial `counts`, searching `bracket`.
/// The remaining configuration fields are held fixed.
pub fn mle_estimate(
    counts: &OutcomeCounts,
    cfg: &ExperimentConfig,
    bracket: (f64, f64),
) -> Result<f64> {
    let [r, l, d] = counts.as_array();
    mle_estimate_weighted([r as f64, l as f64, d as f64], cfg, bracket)
}

/// [`mle_estimate`] for real-valued outcome weights.
pub fn mle_estimate_weighted(
    weights: [f64; 3],
    cfg: &ExperimentConfig,
    bracket: (f64, f64),
) -> Result<f64> {
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::AllMassesZero);
    }
    // Root of the score d/dg log L = sum_j k_j m_j'(g) / m_j(g), by bisection.
    let score = |g: f64| -> Result<f64> {
        let h = default_fd_step(g);
        let at = outcome_masses(&cfg.with_g(g))?;
        let up = outcome_masses(&cfg.with_g(g + h))?;
        let down = outcome_masses(&cfg.with_g(g - h))?;
        let mut s = 0.0;
        for j in 0..3 {
            if weights[j] == 0.0 {
                continue;
            }
            if at[j] <= 0.0 {
                return Err(Error::singular(
                    "mle_estimate",
                    "observed outcome has zero mass",
                ));
            }
            s += weights[j] * (up[j] - down[j]) / (2.0 * h * at[j]);
        }
        Ok(s)
    };
    let (mut lo, mut hi) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let no_interior = Error::NoInteriorMaximum {
        lo: bracket.0,
        hi: bracket.1,
    };
    let (s_lo, s_hi) = match (score(lo), score(hi)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return Err(no_interior),
    };
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return Err(no_interior);
    }
    while hi - lo > MLE_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = score(mid)?;
        if !s.is_finite() {
            return Err(Error::NonFinite("mle_estimate"));
        }
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One replica: sample `shots` outcomes on stream `replica` and fit `g`.
pub fn mc_replica(cfg: &ExperimentConfig, shots: u64, seed: u64, replica: u64) -> Result<McResult> {
    let masses = outcome_masses(cfg)?;
    let mut rng = replica_rng(seed, replica);
    let counts = sample_counts(masses, shots, &mut rng)?;
    let mut result = McResult {
        shots,
        counts,
        g_hat: None,
        se_hat: None,
        seed,
        replica,
        failure: None,
    };
    let fit = default_bracket(cfg, shots).and_then(|b| mle_estimate(&counts, cfg, b));
    match fit {
        Ok(g_hat) => {
            result.g_hat = Some(g_hat);
            result.se_hat = per_shot_fisher(&cfg.with_g(g_hat))
                .ok()
                .map(|info| 1.0 / (shots as f64 * info).sqrt());
        }
        Err(e) => result.failure = Some(e.to_string()),
    }
    Ok(result)
}

/// Stream 0 of [`mc_replica`].
pub fn mc_sample(cfg: &ExperimentConfig, shots: u64, seed: u64) -> Result<McResult> {
    mc_replica(cfg, shots, seed, 0)
}

/// Estimator statistics over replicas against the Cramer-Rao bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencySummary {
    pub replicas: usize,
    pub fitted: usize,
    pub g_true: f64,
    pub mean: f64,
    pub variance: f64,
    /// `1 / (shots * I(g))`.
    pub crb: f64,
    /// `variance / crb`.
    pub efficiency_ratio: f64,
    /// Standard error of `efficiency_ratio` for Gaussian estimates,
    /// `ratio * sqrt(2 / (fitted - 1))`.
    pub efficiency_ratio_se: f64,
    /// `(mean - g) / sqrt(variance / fitted)`.
    pub bias_z: f64,
}

pub fn summarize(
    cfg: &ExperimentConfig,
    shots: u64,
    results: &[McResult],
) -> Result<EfficiencySummary> {
    let estimates: Vec<f64> = results.iter().filter_map(|r| r.g_hat).collect();
    let m = estimates.len();
    if m < 2 {
        return Err(Error::singular(
            "summarize",
            "fewer than two fitted replicas",
        ));
    }
    let mean = estimates.iter().sum::<f64>() / m as f64;
    let variance = estimates.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    let crb = 1.0 / (shots as f64 * per_shot_fisher(cfg)?);
    let ratio = variance / crb;
    Ok(EfficiencySummary {
        replicas: results.len(),
        fitted: m,
        g_true: cfg.g(),
        mean,
        variance,
        crb,
        efficiency_ratio: ratio,
        efficiency_ratio_se: ratio * (2.0 / (m - 1) as f64).sqrt(),
        bias_z: (mean - cfg.g()) / (variance / m as f64).sqrt(),
    })
}
