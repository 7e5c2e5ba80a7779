//! Physical parameters of one measurement scenario.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative phase between the two GHZ branches of the prepared state.
/// Fixed at zero; every closed form in this crate assumes it.
pub const GHZ_RELATIVE_PHASE: f64 = 0.0;

/// Unvalidated parameters as they arrive from a file, flags, or a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawConfig {
    pub n: u32,
    pub g: f64,
    pub phi: f64,
    pub r: f64,
    pub gamma: f64,
    pub q_keep_to_discard: f64,
    pub q_discard_to_keep: f64,
}

impl Default for RawConfig {
    fn default() -> Self {
        Self {
            n: 2,
            g: 1e-4,
            phi: 0.1,
            r: 0.9,
            gamma: 0.01,
            q_keep_to_discard: 0.005,
            q_discard_to_keep: 0.005,
        }
    }
}

/// A validated scenario.
///
/// `n` entangled qubits couple with strength `g` to a two-level pointer; the
/// system is postselected at angle `phi`; failed photons are recycled by a
/// mirror of amplitude reflectivity `r` with single-pass power loss `gamma`.
/// The two `q` fields are per-qubit readout confusion probabilities between
/// the kept and discarded channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    raw: RawConfig,
    transmission: f64,
    loss_amplitude: f64,
}

pub fn make_config(raw: RawConfig) -> Result<ExperimentConfig> {
    ExperimentConfig::new(raw)
}

fn invalid(field: &'static str, bound: &str) -> Error {
    Error::InvalidConfig {
        field,
        bound: bound.to_string(),
    }
}

fn check_probability(field: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(invalid(field, "out of [0,1]"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn new(raw: RawConfig) -> Result<Self> {
        if raw.n < 1 {
            return Err(invalid("n", "must be >= 1"));
        }
        if !raw.g.is_finite() {
            return Err(invalid("g", "must be finite"));
        }
        if !raw.phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        if raw.r.is_nan() || raw.r < 0.0 {
            return Err(invalid("r", "must be >= 0"));
        }
        if raw.r >= 1.0 {
            return Err(invalid("r", "must be < 1"));
        }
        check_probability("gamma", raw.gamma)?;
        check_probability("q_keep_to_discard", raw.q_keep_to_discard)?;
        check_probability("q_discard_to_keep", raw.q_discard_to_keep)?;

        Ok(Self {
            raw,
            transmission: (1.0 - raw.r * raw.r).sqrt(),
            loss_amplitude: (1.0 - raw.gamma).sqrt(),
        })
    }

    pub fn raw(&self) -> RawConfig {
        self.raw
    }

    pub fn n(&self) -> u32 {
        self.raw.n
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.raw.n)
    }

    pub fn g(&self) -> f64 {
        self.raw.g
    }

    pub fn phi(&self) -> f64 {
        self.raw.phi
    }

    pub fn r(&self) -> f64 {
        self.raw.r
    }

    pub fn gamma(&self) -> f64 {
        self.raw.gamma
    }

    pub fn q_keep_to_discard(&self) -> f64 {
        self.raw.q_keep_to_discard
    }

    pub fn q_discard_to_keep(&self) -> f64 {
        self.raw.q_discard_to_keep
    }

    /// Mirror amplitude transmission, `sqrt(1 - r^2)`.
    pub fn p(&self) -> f64 {
        self.transmission
    }

    /// Single-pass amplitude survival, `sqrt(1 - gamma)`.
    pub fn loss_amplitude(&self) -> f64 {
        self.loss_amplitude
    }

    /// Round-trip amplitude gain `r * L` of the recycling cavity.
    pub fn round_trip(&self) -> f64 {
        self.raw.r * self.loss_amplitude
    }

    pub fn n_phi(&self) -> f64 {
        self.n_f64() * self.raw.phi
    }

    pub fn n_g(&self) -> f64 {
        self.n_f64() * self.raw.g
    }

    /// Same scenario at a different coupling strength.
    pub fn with_g(&self, g: f64) -> Self {
        Self {
            raw: RawConfig { g, ..self.raw },
            ..*self
        }
    }

    /// Same scenario with both readout confusion rates replaced.
    pub fn with_readout(&self, q_keep_to_discard: f64, q_discard_to_keep: f64) -> Result<Self> {
        Self::new(RawConfig {
            q_keep_to_discard,
            q_discard_to_keep,
            ..self.raw
        })
    }

    /// `ng <= n*phi/10`, where first-order expressions are trustworthy.
    pub fn is_weak_regime(&self) -> bool {
        self.n_g().abs() <= self.n_phi().abs() / 10.0
    }

    pub(crate) fn warn_outside_weak_regime(&self, quantity: &str) {
        if !self.is_weak_regime() {
            log::warn!(
                "{quantity}: n*g = {} exceeds n*phi/10 = {}; first-order result degrades",
                self.n_g(),
                self.n_phi() / 10.0
            );
        }
    }
}
