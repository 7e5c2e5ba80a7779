//! Data behind each figure, regenerated from library calls.

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use wva_core::analytic::{detected_power, qfi_recycled, qfi_standard, walk_off_ratio, QfiForm};
use wva_core::optimize::maximize_scan;
use wva_core::readout::{
    default_fd_step, fisher_factor_recycled, fisher_factor_standard, gamma_recycled, gamma_standard,
};
use wva_core::{ExperimentConfig, RawConfig};

use crate::error::{CliError, Result};
use crate::output::Table;
use crate::record::fmt_f64;
use crate::settings::Overrides;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
}

pub const ALL_FIGURES: [FigureId; 8] = [
    FigureId::Fig2,
    FigureId::Fig3a,
    FigureId::Fig3b,
    FigureId::Fig4,
    FigureId::Fig5,
    FigureId::Fig6,
    FigureId::Fig7,
    FigureId::Fig8,
];

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "2",
            FigureId::Fig3a => "3a",
            FigureId::Fig3b => "3b",
            FigureId::Fig4 => "4",
            FigureId::Fig5 => "5",
            FigureId::Fig6 => "6",
            FigureId::Fig7 => "7",
            FigureId::Fig8 => "8",
        }
    }

    pub fn file_stem(self) -> String {
        format!("fig{}", self.name())
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let id = s.trim().trim_start_matches("fig");
        ALL_FIGURES
            .into_iter()
            .find(|f| f.name() == id)
            .ok_or_else(|| {
                CliError::Validation(format!(
                    "unknown figure {s:?}; expected one of 2, 3a, 3b, 4, 5, 6, 7, 8"
                ))
            })
    }
}

/// Family and resolution overrides; `None` keeps the figure's default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub points: usize,
    pub n_list: Option<Vec<u32>>,
    pub phi_list: Option<Vec<f64>>,
    pub gamma_list: Option<Vec<f64>>,
    pub q_list: Option<Vec<f64>>,
    /// Explicit scalar settings from the config file or flags.
    pub fixed: Overrides,
}

impl FigureOptions {
    pub fn with_points(points: usize) -> Self {
        FigureOptions {
            points,
            ..Default::default()
        }
    }
}

pub const DEFAULT_POINTS: usize = 400;
const PEAK_TOL: f64 = 1e-12;
const R_MAX: f64 = 1.0 - f64::EPSILON;

fn base(opts: &FigureOptions, defaults: RawConfig) -> RawConfig {
    opts.fixed.apply(defaults)
}

fn value_cell(v: wva_core::Result<f64>) -> String {
    match v {
        Ok(x) => fmt_f64(x),
        Err(_) => String::new(),
    }
}

fn make(raw: RawConfig) -> Result<ExperimentConfig> {
    Ok(ExperimentConfig::new(raw)?)
}

/// `k / points` for `k = 0..points`.
fn r_grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| k as f64 / points as f64).collect()
}

/// `k / (points + 1) * hi` for `k = 1..=points`.
fn open_grid(hi: f64, points: usize) -> Vec<f64> {
    (1..=points)
        .map(|k| k as f64 / (points + 1) as f64 * hi)
        .collect()
}

/// Grid values plus the maximizer of `score` over `[0, 1)`, sorted, each
/// tagged with whether it is that maximizer.
fn r_values_with_peak<F>(points: usize, score: F) -> Result<Vec<(f64, bool)>>
where
    F: Fn(f64) -> f64,
{
    let grid = r_grid(points);
    // The mirror may approach r = 1 arbitrarily closely.
    let peak = maximize_scan(&score, 0.0, R_MAX, points, PEAK_TOL)?;
    let mut values: Vec<(f64, bool)> = grid.into_iter().map(|r| (r, false)).collect();
    let at = values.partition_point(|(r, _)| *r <= peak.x);
    values.insert(at, (peak.x, true));
    Ok(values)
}

fn score_at<F>(raw: RawConfig, f: F) -> impl Fn(f64) -> f64
where
    F: Fn(&ExperimentConfig) -> wva_core::Result<f64>,
{
    move |r| {
        ExperimentConfig::new(RawConfig { r, ..raw })
            .and_then(|c| f(&c))
            .unwrap_or(f64::NAN)
    }
}

fn r_sweep_figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    let g = if id == FigureId::Fig6 { 1e-5 } else { 1e-4 };
    let defaults = RawConfig {
        n: 1,
        g,
        phi: 0.1,
        r: 0.0,
        gamma: 0.0,
        q_keep_to_discard: 0.0,
        q_discard_to_keep: 0.0,
    };
    let raw = base(opts, defaults);
    let ns = opts.n_list.clone().unwrap_or(vec![1, 2, 4]);
    let gammas = opts.gamma_list.clone().unwrap_or(vec![0.0, 0.05, 0.1]);
    let (value, marker) = match id {
        FigureId::Fig2 => ("detected_power", "peak"),
        FigureId::Fig4 => ("qfi_recycled", "peak"),
        _ => ("walk_off_ratio", "qfi_peak"),
    };
    let mut header = vec!["n", "phi", "g", "gamma", "r", value];
    if id == FigureId::Fig6 {
        header.push("qfi_recycled");
    }
    header.push(marker);
    let mut table = Table::new(header);
    for &n in &ns {
        for &gamma in &gammas {
            let family = RawConfig { n, gamma, ..raw };
            make(family)?;
            let rows = match id {
                FigureId::Fig2 => {
                    r_values_with_peak(opts.points, score_at(family, detected_power))?
                }
                _ => r_values_with_peak(opts.points, score_at(family, qfi_recycled))?,
            };
            for (r, is_peak) in rows {
                let cfg = make(RawConfig { r, ..family })?;
                let mut row = vec![
                    n.to_string(),
                    fmt_f64(family.phi),
                    fmt_f64(family.g),
                    fmt_f64(gamma),
                    fmt_f64(r),
                ];
                match id {
                    FigureId::Fig2 => row.push(value_cell(detected_power(&cfg))),
                    FigureId::Fig4 => row.push(value_cell(qfi_recycled(&cfg))),
                    _ => {
                        row.push(value_cell(walk_off_ratio(&cfg)));
                        row.push(value_cell(qfi_recycled(&cfg)));
                    }
                }
                row.push(u8::from(is_peak).to_string());
                table.push(row);
            }
        }
    }
    Ok(table)
}

fn qfi_standard_figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    let defaults = RawConfig {
        n: 1,
        g: 1e-4,
        phi: 0.1,
        r: 0.0,
        gamma: 0.0,
        q_keep_to_discard: 0.0,
        q_discard_to_keep: 0.0,
    };
    let raw = base(opts, defaults);
    let ns = opts.n_list.clone().unwrap_or(vec![1, 2, 4]);
    let mut table = Table::new([
        "n",
        "phi",
        "g",
        "qfi_standard",
        "qfi_standard_as_printed",
        "heisenberg_limit",
    ]);
    for &n in &ns {
        let hi = FRAC_PI_2 / f64::from(n);
        for x in open_grid(hi, opts.points) {
            let point = match id {
                FigureId::Fig3a => RawConfig { n, phi: x, ..raw },
                _ => RawConfig { n, g: x, ..raw },
            };
            let cfg = make(point)?;
            table.push(vec![
                n.to_string(),
                fmt_f64(point.phi),
                fmt_f64(point.g),
                fmt_f64(qfi_standard(&cfg, QfiForm::Derived)),
                fmt_f64(qfi_standard(&cfg, QfiForm::AsPrinted)),
                fmt_f64(4.0 * f64::from(n * n)),
            ]);
        }
    }
    Ok(table)
}

fn fig5(opts: &FigureOptions) -> Result<Table> {
    let defaults = RawConfig {
        n: 1,
        g: 1e-5,
        phi: 0.01,
        r: 0.0,
        gamma: 0.0,
        q_keep_to_discard: 0.0,
        q_discard_to_keep: 0.0,
    };
    let raw = base(opts, defaults);
    let phis = opts.phi_list.clone().unwrap_or(vec![0.01, 0.02]);
    let ns = opts.n_list.clone().unwrap_or((1..=8).collect());
    let mut table = Table::new(["phi", "n", "gamma", "g", "r", "qfi_recycled", "peak"]);
    for &phi in &phis {
        for &n in &ns {
            let family = RawConfig { n, phi, ..raw };
            make(family)?;
            for (r, is_peak) in r_values_with_peak(opts.points, score_at(family, qfi_recycled))? {
                let cfg = make(RawConfig { r, ..family })?;
                table.push(vec![
                    fmt_f64(phi),
                    n.to_string(),
                    fmt_f64(family.gamma),
                    fmt_f64(family.g),
                    fmt_f64(r),
                    value_cell(qfi_recycled(&cfg)),
                    u8::from(is_peak).to_string(),
                ]);
            }
        }
    }
    Ok(table)
}

/// Default families of the readout-error figures.
pub fn readout_families(opts: &FigureOptions) -> Result<Vec<RawConfig>> {
    let defaults = RawConfig {
        n: 1,
        g: 1e-4,
        phi: 0.05,
        r: 0.9,
        gamma: 0.01,
        q_keep_to_discard: 0.005,
        q_discard_to_keep: 0.005,
    };
    let raw = base(opts, defaults);
    let phis = opts.phi_list.clone().unwrap_or(vec![0.05, 0.1]);
    let qs = opts.q_list.clone().unwrap_or(vec![0.005, 0.02]);
    let ns = opts.n_list.clone().unwrap_or((1..=10).collect());
    let mut out = Vec::new();
    for &phi in &phis {
        for &q in &qs {
            for &n in &ns {
                let point = RawConfig {
                    n,
                    phi,
                    q_keep_to_discard: q,
                    q_discard_to_keep: q,
                    ..raw
                };
                make(point)?;
                out.push(point);
            }
        }
    }
    Ok(out)
}

fn readout_figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    let (a, b) = match id {
        FigureId::Fig7 => ("gamma_standard", "gamma_recycled"),
        _ => ("fisher_factor_standard", "fisher_factor_recycled"),
    };
    let mut table = Table::new(["phi", "q", "n", "r", "gamma", "g", a, b]);
    for point in readout_families(opts)? {
        let cfg = make(point)?;
        let (x, y) = match id {
            FigureId::Fig7 => (gamma_standard(&cfg), gamma_recycled(&cfg)),
            _ => (
                fisher_factor_standard(&cfg),
                fisher_factor_recycled(&cfg, default_fd_step(cfg.g())),
            ),
        };
        table.push(vec![
            fmt_f64(point.phi),
            fmt_f64(point.q_keep_to_discard),
            point.n.to_string(),
            fmt_f64(point.r),
            fmt_f64(point.gamma),
            fmt_f64(point.g),
            value_cell(x),
            value_cell(y),
        ]);
    }
    Ok(table)
}

pub fn figure_table(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    if opts.points < 2 {
        return Err(CliError::Validation("--points must be >= 2".into()));
    }
    match id {
        FigureId::Fig2 | FigureId::Fig4 | FigureId::Fig6 => r_sweep_figure(id, opts),
        FigureId::Fig3a | FigureId::Fig3b => qfi_standard_figure(id, opts),
        FigureId::Fig5 => fig5(opts),
        FigureId::Fig7 | FigureId::Fig8 => readout_figure(id, opts),
    }
}

/// A matplotlib script that draws every value column of `fig<id>.csv`
/// against its x column, one line per family.
pub fn plot_script(id: FigureId) -> String {
    let (x, families): (&str, &[&str]) = match id {
        FigureId::Fig2 | FigureId::Fig4 | FigureId::Fig6 => ("r", &["n", "gamma"]),
        FigureId::Fig3a => ("phi", &["n"]),
        FigureId::Fig3b => ("g", &["n"]),
        FigureId::Fig5 => ("r", &["phi", "n"]),
        FigureId::Fig7 | FigureId::Fig8 => ("n", &["phi", "q"]),
    };
    let stem = id.file_stem();
    let families = families
        .iter()
        .map(|f| format!("\"{f}\""))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        r#"import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

X = "{x}"
FAMILIES = [{families}]
SKIP = {{"peak", "qfi_peak", "heisenberg_limit"}}

with open("{stem}.csv", newline="") as fh:
    rows = list(csv.DictReader(fh))
values = [c for c in rows[0] if c not in FAMILIES and c != X and c not in SKIP]
values = [c for c in values if any(r[c] for r in rows)]
values = [c for c in values if c not in ("phi", "g", "gamma", "r", "q", "n")]

fig, axes = plt.subplots(1, len(values), figsize=(5 * len(values), 4), squeeze=False)
for ax, col in zip(axes[0], values):
    groups = defaultdict(list)
    for r in rows:
        if r[col]:
            groups[tuple(r[f] for f in FAMILIES)].append((float(r[X]), float(r[col])))
    for key, pts in groups.items():
        pts.sort()
        label = ", ".join(f"{{f}}={{v}}" for f, v in zip(FAMILIES, key))
        ax.plot([p[0] for p in pts], [p[1] for p in pts], label=label)
    ax.set_xlabel(X)
    ax.set_ylabel(col)
    ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else "{stem}.png", dpi=150)
"#
    )
}
