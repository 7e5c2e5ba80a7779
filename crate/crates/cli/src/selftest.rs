//! Analytic-vs-oracle invariant suite behind the `selftest` subcommand.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use wva_core::analytic::{
    detect_probability_recycled, detected_power, discard_probability_recycled, discarded_meter,
    fail_probability, meter_orthogonal, meter_postselected, pointer_shift_recycled,
    pointer_shift_standard, postselection_probability, qfi_functional, qfi_recycled, qfi_standard,
    recycled_meter, recycled_meter_derivative, QfiForm, RecycleVariant,
};
use wva_core::grid::standard_grid;
use wva_core::oracle::{
    mixture_shift_recycled, mixture_shift_standard, qfi_numeric, recycle_truncated,
    recycled_meter_truncated, single_pass_meters, DEFAULT_MAX_PASSES,
};
use wva_core::readout::{
    default_fd_step, fisher_factor_recycled, fisher_factor_standard, gamma_recycled,
    gamma_standard, modified_fisher_recycled,
};
use wva_core::{make_config, ExperimentConfig, RawConfig};

use crate::error::CliError;

/// Truncation tolerance used when comparing against the recycling oracle.
const ORACLE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Grid points with `g = 1e-4` only.
    Quick,
    /// The whole standard grid.
    Full,
}

impl FromStr for Profile {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(CliError::Usage(format!(
                "unknown profile {s:?}; use quick or full"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestOptions {
    pub profile: Profile,
    /// Relative error injected into the analytic side of the comparisons.
    /// Zero for a real run; used to prove the suite notices a broken formula.
    pub perturbation: f64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            profile: Profile::Full,
            perturbation: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub points: usize,
    pub failures: usize,
    /// Largest `error / allowed` seen; at most 1 on success.
    pub worst_ratio: f64,
    pub worst_error: f64,
    pub worst_at: Option<RawConfig>,
    pub tolerance: String,
}

/// Single-pass QFI: numeric oracle against both closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArbitrationRow {
    pub n: u32,
    pub phi: f64,
    pub g: f64,
    pub numeric: f64,
    pub derived: f64,
    pub as_printed: f64,
    pub heisenberg: f64,
    pub derived_rel_err: f64,
    pub as_printed_rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub profile: Profile,
    pub perturbation: f64,
    pub checks: Vec<Check>,
    /// Reported, never gating.
    pub informational: Vec<Check>,
    pub arbitration: Vec<ArbitrationRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_count(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "selftest profile={:?} perturbation={:e}",
            self.profile, self.perturbation
        );
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{}",
                check_line(c, if c.passed { "PASS" } else { "FAIL" })
            );
        }
        for c in &self.informational {
            let _ = writeln!(s, "{}", check_line(c, "INFO"));
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "single-pass QFI: numeric oracle vs closed forms");
        let _ = writeln!(
            s,
            "{:>3} {:>10} {:>10} {:>14} {:>14} {:>14} {:>11} {:>11}",
            "n", "phi", "g", "numeric", "derived", "as_printed", "err_deriv", "err_print"
        );
        for r in &self.arbitration {
            let _ = writeln!(
                s,
                "{:>3} {:>10.4e} {:>10.4e} {:>14.8} {:>14.8} {:>14.8} {:>11.3e} {:>11.3e}",
                r.n,
                r.phi,
                r.g,
                r.numeric,
                r.derived,
                r.as_printed,
                r.derived_rel_err,
                r.as_printed_rel_err
            );
        }
        let _ = writeln!(
            s,
            "{} of {} checks passed",
            self.checks.len() - self.failed_count(),
            self.checks.len()
        );
        s
    }
}

fn check_line(c: &Check, tag: &str) -> String {
    let mut line = format!(
        "{tag} {}: {} points, worst error {:.3e} ({:.3} of allowed; {})",
        c.name, c.points, c.worst_error, c.worst_ratio, c.tolerance
    );
    if c.failures > 0 {
        let _ = write!(line, ", {} failing", c.failures);
    }
    if let (Some(at), false) = (c.worst_at, c.passed) {
        let _ = write!(
            line,
            " [worst at n={} phi={} g={} r={} gamma={} q={}]",
            at.n, at.phi, at.g, at.r, at.gamma, at.q_keep_to_discard
        );
    }
    line
}

struct Acc {
    name: &'static str,
    tolerance: String,
    points: usize,
    failures: usize,
    worst_ratio: f64,
    worst_error: f64,
    worst_at: Option<RawConfig>,
}

impl Acc {
    fn new(name: &'static str, tolerance: impl Into<String>) -> Self {
        Acc {
            name,
            tolerance: tolerance.into(),
            points: 0,
            failures: 0,
            worst_ratio: 0.0,
            worst_error: 0.0,
            worst_at: None,
        }
    }

    /// Record `error <= allowed` at `cfg`.
    fn observe(&mut self, cfg: &ExperimentConfig, error: f64, allowed: f64) {
        self.points += 1;
        let ratio = if error.is_nan() {
            f64::INFINITY
        } else {
            error / allowed
        };
        if ratio.is_nan() || ratio > 1.0 {
            self.failures += 1;
        }
        if ratio.is_nan() || ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.worst_error = error;
            self.worst_at = Some(cfg.raw());
        }
    }

    fn error(&mut self, cfg: &ExperimentConfig, e: wva_core::Error) {
        log::warn!("{}: {e} at {:?}", self.name, cfg.raw());
        self.observe(cfg, f64::NAN, 1.0);
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            passed: self.failures == 0 && self.points > 0,
            points: self.points,
            failures: self.failures,
            worst_ratio: self.worst_ratio,
            worst_error: self.worst_error,
            worst_at: self.worst_at,
            tolerance: self.tolerance,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn grid(profile: Profile) -> Vec<ExperimentConfig> {
    standard_grid()
        .into_iter()
        .filter(|c| profile == Profile::Full || c.g() == 1e-4)
        .collect()
}

pub fn run_selftest(opts: SelftestOptions) -> Report {
    let k = 1.0 + opts.perturbation;
    let points = grid(opts.profile);
    let mut checks = Vec::new();

    let mut a = Acc::new(
        "single-pass states vs oracle",
        "1e-12 per amplitude and in P",
    );
    for c in &points {
        match single_pass_meters(c) {
            Ok((success, fail)) => {
                let amp = success
                    .max_abs_diff(&meter_postselected(c))
                    .max(fail.max_abs_diff(&meter_orthogonal(c)));
                let prob = (success.norm_sqr() - k * postselection_probability(c))
                    .abs()
                    .max((fail.norm_sqr() - fail_probability(c)).abs());
                a.observe(c, amp.max(prob), 1e-12);
            }
            Err(e) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut states = Acc::new("recycled states vs truncated oracle", "1e-10 per amplitude");
    let mut energy = Acc::new("lossless energy conservation", "1e-12 absolute");
    for c in &points {
        let sum = match recycle_truncated(c, ORACLE_TOL, DEFAULT_MAX_PASSES) {
            Ok(s) => s,
            Err(e) => {
                states.error(c, e);
                continue;
            }
        };
        match (
            recycled_meter(c, RecycleVariant::Exact),
            discarded_meter(c, RecycleVariant::Exact),
        ) {
            (Ok(d), Ok(r)) => {
                let d = d.scale(k.sqrt());
                let err = sum
                    .detected
                    .max_abs_diff(&d)
                    .max(sum.discarded.max_abs_diff(&r));
                states.observe(c, err, 1e-10);
                if c.gamma() == 0.0 {
                    let analytic = d.norm_sqr() + r.norm_sqr() - 1.0;
                    let oracle = sum.detected.norm_sqr() + sum.discarded.norm_sqr() - 1.0;
                    energy.observe(c, analytic.abs().max(oracle.abs()), 1e-12);
                }
            }
            (Err(e), _) | (_, Err(e)) => states.error(c, e),
        }
    }
    checks.push(states.finish());
    checks.push(energy.finish());

    let mut a = Acc::new("probability complements", "1e-14 absolute");
    for c in &points {
        let single = k * postselection_probability(c) + fail_probability(c) - 1.0;
        match (
            detect_probability_recycled(c),
            discard_probability_recycled(c),
        ) {
            (Ok(pc), Ok(pr)) => a.observe(c, single.abs().max((pc + pr - 1.0).abs()), 1e-14),
            (Err(e), _) | (_, Err(e)) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new(
        "detected power Taylor gap",
        "1e-4 (n phi / sin n phi)^2 for g <= phi/100",
    );
    for c in points.iter().filter(|c| c.g() <= c.phi() / 100.0) {
        match (recycled_meter(c, RecycleVariant::Linear), detected_power(c)) {
            (Ok(lin), Ok(power)) => {
                let gap = lin.norm_sqr() / (k * power) - 1.0;
                let bound = 1e-4 * (c.n_phi() / c.n_phi().sin()).powi(2);
                a.observe(c, gap.abs(), bound);
            }
            (Err(e), _) | (_, Err(e)) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new("single-pass QFI derived form vs oracle", "1e-6 relative");
    for c in points.iter().filter(|c| c.r() == 0.0 && c.gamma() == 0.0) {
        let numeric = qfi_numeric(
            |g| single_pass_meters(&c.with_g(g)).map(|(s, _)| s),
            c.g(),
            default_fd_step(c.g()),
        );
        match numeric {
            Ok(est) => a.observe(
                c,
                rel(k * qfi_standard(c, QfiForm::Derived), est.value),
                1e-6,
            ),
            Err(e) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new(
        "recycled QFI vs leading-order state functional",
        "4 (ng / sin n phi)^2 relative",
    );
    for c in &points {
        let functional = recycled_meter(c, RecycleVariant::Linear).and_then(|s| {
            recycled_meter_derivative(c, RecycleVariant::Linear).map(|d| qfi_functional(&s, &d))
        });
        match (functional, qfi_recycled(c)) {
            (Ok(f), Ok(closed)) => {
                let bound = 4.0 * (c.n_g() / c.n_phi().sin()).powi(2) + 1e-12;
                a.observe(c, rel(k * closed, f), bound);
            }
            (Err(e), _) | (_, Err(e)) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new(
        "recycled QFI without cavity",
        "4 n^2 cos^2(n phi), 1e-15 relative",
    );
    for c in points.iter().filter(|c| c.r() == 0.0) {
        let expected = 4.0 * c.n_f64().powi(2) * c.n_phi().cos().powi(2);
        match qfi_recycled(c) {
            Ok(v) => a.observe(c, rel(k * v, expected), 1e-15),
            Err(e) => a.error(c, e),
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new(
        "readout mixture identity",
        "1e-12 relative, q in {0.005, 0.01, 0.02}",
    );
    for base in &points {
        for q in [0.005, 0.01, 0.02] {
            let c = match base.with_readout(q, q) {
                Ok(c) => c,
                Err(e) => {
                    a.error(base, e);
                    continue;
                }
            };
            let standard = gamma_standard(&c).and_then(|gm| {
                Ok((
                    k * gm * pointer_shift_standard(&c)?,
                    mixture_shift_standard(&c)?,
                ))
            });
            match standard {
                Ok((lhs, rhs)) => a.observe(&c, (lhs - rhs).abs(), 1e-12 * rhs.abs()),
                Err(e) => a.error(&c, e),
            }
            // Gamma_c is undefined exactly at impedance matching.
            let Ok(gc) = gamma_recycled(&c) else { continue };
            match (pointer_shift_recycled(&c), mixture_shift_recycled(&c)) {
                (Ok(s), Ok(rhs)) => a.observe(&c, (k * gc * s - rhs).abs(), 1e-12 * rhs.abs()),
                (Err(e), _) | (_, Err(e)) => a.error(&c, e),
            }
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new("readout factors at q = 0", "exactly 1");
    for c in &points {
        let c = c.with_readout(0.0, 0.0).expect("zero rates are valid");
        let factors = [
            gamma_standard(&c),
            fisher_factor_standard(&c),
            gamma_recycled(&c),
            fisher_factor_recycled(&c, default_fd_step(c.g())),
        ];
        for f in factors {
            match f {
                Ok(v) => a.observe(&c, (k * v - 1.0).abs(), f64::MIN_POSITIVE),
                Err(e) if e.reason() == "rL = cos(n*phi)" => {}
                Err(e) => a.error(&c, e),
            }
        }
    }
    checks.push(a.finish());

    let mut a = Acc::new(
        "Fisher finite-difference step halving",
        "1e-6 relative, q = 0.005",
    );
    for base in points.iter().filter(|c| c.g() == 1e-4) {
        let c = base.with_readout(0.005, 0.005).expect("valid rates");
        let step = default_fd_step(c.g());
        match (
            modified_fisher_recycled(&c, step),
            modified_fisher_recycled(&c, 0.5 * step),
        ) {
            (Ok(coarse), Ok(fine)) => a.observe(&c, rel(k * coarse, fine), 1e-6),
            (Err(e), _) | (_, Err(e)) => a.error(&c, e),
        }
    }
    checks.push(a.finish());

    let arbitration = arbitration_table(k);
    let mut heis = Acc::new("Heisenberg scaling of single-pass QFI", "1% of 4 n^2");
    let mut derived = Acc::new("derived QFI form vs oracle (table)", "1e-6 relative");
    for row in &arbitration {
        let c = arbitration_config(row.n, row.phi, row.g);
        heis.observe(&c, rel(row.numeric, row.heisenberg), 1e-2);
        derived.observe(&c, row.derived_rel_err, 1e-6);
    }
    checks.push(heis.finish());
    checks.push(derived.finish());

    let mut informational = Vec::new();
    let mut a = Acc::new(
        "recycled QFI vs QFI of truncated oracle state",
        "1e-3 relative for g <= phi/100",
    );
    for c in points.iter().filter(|c| c.g() <= c.phi() / 100.0) {
        let numeric = qfi_numeric(
            |g| {
                recycled_meter_truncated(&c.with_g(g), ORACLE_TOL, DEFAULT_MAX_PASSES)
                    .map(|(s, _)| s)
            },
            c.g(),
            default_fd_step(c.g()),
        );
        match (numeric, qfi_recycled(c)) {
            (Ok(est), Ok(closed)) => a.observe(c, rel(closed, est.value), 1e-3),
            (Err(e), _) | (_, Err(e)) => a.error(c, e),
        }
    }
    informational.push(a.finish());

    Report {
        profile: opts.profile,
        perturbation: opts.perturbation,
        checks,
        informational,
        arbitration,
    }
}

fn arbitration_config(n: u32, phi: f64, g: f64) -> ExperimentConfig {
    make_config(RawConfig {
        n,
        g,
        phi,
        r: 0.0,
        gamma: 0.0,
        q_keep_to_discard: 0.0,
        q_discard_to_keep: 0.0,
    })
    .expect("valid arbitration point")
}

/// Weak-regime points `n phi = 0.05`, `g = phi / 100`; `k` scales the
/// derived form.
pub fn arbitration_table(k: f64) -> Vec<ArbitrationRow> {
    [1u32, 2, 4, 8]
        .into_iter()
        .map(|n| {
            let phi = 0.05 / f64::from(n);
            let g = phi / 100.0;
            let c = arbitration_config(n, phi, g);
            let numeric = qfi_numeric(
                |g| single_pass_meters(&c.with_g(g)).map(|(s, _)| s),
                g,
                default_fd_step(g),
            )
            .map(|e| e.value)
            .unwrap_or(f64::NAN);
            let derived = k * qfi_standard(&c, QfiForm::Derived);
            let as_printed = qfi_standard(&c, QfiForm::AsPrinted);
            ArbitrationRow {
                n,
                phi,
                g,
                numeric,
                derived,
                as_printed,
                heisenberg: 4.0 * f64::from(n * n),
                derived_rel_err: rel(derived, numeric),
                as_printed_rel_err: rel(as_printed, numeric),
            }
        })
        .collect()
}
