//! Scenario parameters from defaults, a `key = value` file, and flags.

use std::path::Path;

use wva_core::{ExperimentConfig, RawConfig};

use crate::error::{CliError, Result};

/// Field names accepted in config files and as sweep axes.
pub const FIELDS: [&str; 7] = [
    "n",
    "g",
    "phi",
    "r",
    "gamma",
    "q_keep_to_discard",
    "q_discard_to_keep",
];

/// A partially specified scenario; `None` means "not given here".
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<u32>,
    pub g: Option<f64>,
    pub phi: Option<f64>,
    pub r: Option<f64>,
    pub gamma: Option<f64>,
    pub q_keep_to_discard: Option<f64>,
    pub q_discard_to_keep: Option<f64>,
}

impl Overrides {
    /// Values in `later` win.
    pub fn merged(self, later: Overrides) -> Overrides {
        Overrides {
            n: later.n.or(self.n),
            g: later.g.or(self.g),
            phi: later.phi.or(self.phi),
            r: later.r.or(self.r),
            gamma: later.gamma.or(self.gamma),
            q_keep_to_discard: later.q_keep_to_discard.or(self.q_keep_to_discard),
            q_discard_to_keep: later.q_discard_to_keep.or(self.q_discard_to_keep),
        }
    }

    pub fn apply(&self, base: RawConfig) -> RawConfig {
        RawConfig {
            n: self.n.unwrap_or(base.n),
            g: self.g.unwrap_or(base.g),
            phi: self.phi.unwrap_or(base.phi),
            r: self.r.unwrap_or(base.r),
            gamma: self.gamma.unwrap_or(base.gamma),
            q_keep_to_discard: self.q_keep_to_discard.unwrap_or(base.q_keep_to_discard),
            q_discard_to_keep: self.q_discard_to_keep.unwrap_or(base.q_discard_to_keep),
        }
    }

    pub fn config(&self) -> Result<ExperimentConfig> {
        Ok(ExperimentConfig::new(self.apply(RawConfig::default()))?)
    }

    /// Set one field from text, rejecting unknown names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| CliError::Validation(format!("{key}: not a number: {value:?}")))
        };
        match key.as_str() {
            "n" => {
                self.n = Some(value.parse::<u32>().map_err(|_| {
                    CliError::Validation(format!("n: not a non-negative integer: {value:?}"))
                })?)
            }
            "g" => self.g = Some(real()?),
            "phi" => self.phi = Some(real()?),
            "r" => self.r = Some(real()?),
            "gamma" => self.gamma = Some(real()?),
            "q_keep_to_discard" => self.q_keep_to_discard = Some(real()?),
            "q_discard_to_keep" => self.q_discard_to_keep = Some(real()?),
            _ => {
                return Err(CliError::Validation(format!(
                    "unknown key {key:?}; expected one of {}",
                    FIELDS.join(", ")
                )))
            }
        }
        Ok(())
    }
}

/// Parse flat `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<Overrides> {
    let mut out = Overrides::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("line {}: expected key = value", lineno + 1))
        })?;
        out.set(key.trim(), value.trim())
            .map_err(|e| CliError::Validation(format!("line {}: {e}", lineno + 1)))?;
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse_config_text(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
