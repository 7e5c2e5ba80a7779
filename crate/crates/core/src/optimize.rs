//! One-dimensional maximization used for figure peaks and likelihood fits.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A located maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`,
/// to an interval width of `tol`.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Maximum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
        // Floating-point stagnation: the bracket cannot shrink further.
        if x1 >= x2 {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (x1, f1), (x2, f2)]
        .into_iter()
        .filter(|(_, v)| !v.is_nan())
        .fold(Maximum { x, value: f64::NAN }, |best, (x, v)| {
            if best.value.is_nan() || v > best.value {
                Maximum { x, value: v }
            } else {
                best
            }
        })
}

/// Maximum of `f` on `[lo, hi]`: a uniform scan of `samples` points picks the
/// best cell, which is then refined by golden-section search.
///
/// Non-finite samples are ignored. Fails if every sample is non-finite.
pub fn maximize_scan<F>(mut f: F, lo: f64, hi: f64, samples: usize, tol: f64) -> Result<Maximum>
where
    F: FnMut(f64) -> f64,
{
    let samples = samples.max(3);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut best: Option<(usize, f64)> = None;
    for k in 0..samples {
        let v = f(lo + step * k as f64);
        if v.is_finite() && best.is_none_or(|(_, b)| v > b) {
            best = Some((k, v));
        }
    }
    let (k, _) = best.ok_or(Error::NoInteriorMaximum { lo, hi })?;
    let a = lo + step * k.saturating_sub(1) as f64;
    let b = (lo + step * (k + 1) as f64).min(hi);
    let refined = golden_section_max(
        |x| {
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::NEG_INFINITY
            }
        },
        a,
        b,
        tol,
    );
    Ok(refined)
}
