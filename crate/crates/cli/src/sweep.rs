//! Cartesian parameter sweeps over one or two config fields.

use std::str::FromStr;

use rayon::prelude::*;
use wva_core::ExperimentConfig;

use crate::error::{CliError, Result};
use crate::record::{evaluate, Record, Variants};
use crate::settings::{Overrides, FIELDS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `name:start:stop:count[:lin|log]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Validation(format!("axis {s:?}: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(bad("expected name:start:stop:count[:lin|log]"));
        }
        let name = parts[0].trim().replace('-', "_");
        if !FIELDS.contains(&name.as_str()) {
            return Err(bad(&format!(
                "unknown field; expected one of {}",
                FIELDS.join(", ")
            )));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("bad number"));
        let (start, stop) = (num(parts[1])?, num(parts[2])?);
        let count: usize = parts[3].trim().parse().map_err(|_| bad("bad count"))?;
        if count < 2 {
            return Err(bad("count must be >= 2"));
        }
        let spacing = match parts.get(4).map(|t| t.trim()) {
            None | Some("lin") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad("spacing must be lin or log")),
        };
        if spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("log spacing needs positive endpoints"));
        }
        let axis = Axis {
            name,
            start,
            stop,
            count,
            spacing,
        };
        if axis.name == "n" {
            for v in axis.values() {
                if v < 0.0 || (v - v.round()).abs() > 1e-9 {
                    return Err(bad("n takes integer values only"));
                }
            }
        }
        Ok(axis)
    }
}

impl Axis {
    /// Endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k == 0 {
                    return self.start;
                }
                if k == self.count - 1 {
                    return self.stop;
                }
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + (b - a) * t)
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub fixed: Overrides,
    /// Outer axis first.
    pub axes: Vec<Axis>,
    pub variants: Variants,
}

fn set_field(o: &mut Overrides, name: &str, v: f64) {
    match name {
        "n" => o.n = Some(v.round() as u32),
        "g" => o.g = Some(v),
        "phi" => o.phi = Some(v),
        "r" => o.r = Some(v),
        "gamma" => o.gamma = Some(v),
        "q_keep_to_discard" => o.q_keep_to_discard = Some(v),
        "q_discard_to_keep" => o.q_discard_to_keep = Some(v),
        _ => unreachable!("axis names are validated on parse"),
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(CliError::Validation(
                "a sweep takes one or two --axis".into(),
            ));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(CliError::Validation("the two axes must differ".into()));
        }
        Ok(())
    }

    /// Grid points in row order (outer axis slow), invalid ones dropped.
    pub fn points(&self) -> Result<Vec<ExperimentConfig>> {
        self.validate()?;
        let outer = self.axes[0].values();
        let inner = self
            .axes
            .get(1)
            .map(|a| a.values())
            .unwrap_or(vec![f64::NAN]);
        let mut out = Vec::with_capacity(outer.len() * inner.len());
        for &a in &outer {
            for &b in &inner {
                let mut o = self.fixed;
                set_field(&mut o, &self.axes[0].name, a);
                if let Some(axis) = self.axes.get(1) {
                    set_field(&mut o, &axis.name, b);
                }
                match o.config() {
                    Ok(cfg) => out.push(cfg),
                    Err(e) => log::warn!("skipping grid point {o:?}: {e}"),
                }
            }
        }
        Ok(out)
    }
}

/// Evaluate every point on `pool`; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec, pool: &rayon::ThreadPool) -> Result<Vec<Record>> {
    let points = spec.points()?;
    let variants = spec.variants;
    Ok(pool.install(|| points.par_iter().map(|c| evaluate(c, variants)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axes() {
        let a: Axis = "r:0:0.8:5".parse().unwrap();
        let v = a.values();
        assert_eq!(v.len(), 5);
        for (x, want) in v.iter().zip([0.0, 0.2, 0.4, 0.6, 0.8]) {
            assert!((x - want).abs() < 1e-15);
        }
        let g: Axis = "g:1e-5:1e-3:3:log".parse().unwrap();
        assert_eq!(g.values(), vec![1e-5, 1e-4, 1e-3]);
        assert!("theta:0:1:3".parse::<Axis>().is_err());
        assert!("r:0:1:1".parse::<Axis>().is_err());
        assert!("n:1:2:3".parse::<Axis>().is_err());
        assert!("g:0:1:3:log".parse::<Axis>().is_err());
        assert!("r:0:1".parse::<Axis>().is_err());
    }

    #[test]
    fn outer_axis_is_slow_and_invalid_points_skipped() {
        let spec = SweepSpec {
            fixed: Overrides::default(),
            axes: vec!["n:1:2:2".parse().unwrap(), "r:0.5:1.0:3".parse().unwrap()],
            variants: Variants::default(),
        };
        let pts = spec.points().unwrap();
        // r = 1.0 is rejected by validation.
        let got: Vec<(u32, f64)> = pts.iter().map(|c| (c.n(), c.r())).collect();
        assert_eq!(got, vec![(1, 0.5), (1, 0.75), (2, 0.5), (2, 0.75)]);
    }
}
