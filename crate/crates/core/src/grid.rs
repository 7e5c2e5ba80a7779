//! The standard validation grid shared by tests and the selftest.

use crate::config::{ExperimentConfig, RawConfig};

pub const GRID_N: [u32; 4] = [1, 2, 4, 8];
pub const GRID_PHI: [f64; 3] = [0.01, 0.05, 0.1];
pub const GRID_G: [f64; 3] = [1e-5, 1e-4, 1e-3];
pub const GRID_R: [f64; 5] = [0.0, 0.3, 0.6, 0.9, 0.99];
pub const GRID_GAMMA: [f64; 3] = [0.0, 0.05, 0.1];

/// Every combination of the grid axes with `n * phi < 1` and no readout
/// errors, in lexicographic order `n, phi, g, r, gamma`.
pub fn standard_grid() -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    for n in GRID_N {
        for phi in GRID_PHI {
            if f64::from(n) * phi >= 1.0 {
                continue;
            }
            for g in GRID_G {
                for r in GRID_R {
                    for gamma in GRID_GAMMA {
                        let raw = RawConfig {
                            n,
                            g,
                            phi,
                            r,
                            gamma,
                            q_keep_to_discard: 0.0,
                            q_discard_to_keep: 0.0,
                        };
                        if let Ok(cfg) = ExperimentConfig::new(raw) {
                            out.push(cfg);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_size() {
        assert_eq!(standard_grid().len(), 540);
    }
}
