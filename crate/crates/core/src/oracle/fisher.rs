use serde::Serialize;

use crate::error::{Error, Result};
use crate::pointer::PointerState;

/// A finite-difference result with a step-halving error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdEstimate {
    pub value: f64,
    /// `|value(h) - value(h/2)|`.
    pub discretization_error: f64,
    pub step: f64,
}

fn qfi_at_step<F>(meter_at: &F, g: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<PointerState>,
{
    let at = meter_at(g)?;
    let up = meter_at(g + h)?;
    let down = meter_at(g - h)?;
    if !(at.is_finite() && up.is_finite() && down.is_finite()) {
        return Err(Error::NonFinite("qfi_numeric"));
    }
    let d = (up - down).scale(0.5 / h);
    Ok(4.0 * (d.norm_sqr() - at.inner(&d).norm_sqr()))
}

/// Quantum Fisher information of a pointer-state family by central
/// differences of its amplitudes.
pub fn qfi_numeric<F>(meter_at: F, g: f64, fd_step: f64) -> Result<FdEstimate>
where
    F: Fn(f64) -> Result<PointerState>,
{
    let coarse = qfi_at_step(&meter_at, g, fd_step)?;
    let fine = qfi_at_step(&meter_at, g, 0.5 * fd_step)?;
    Ok(FdEstimate {
        value: coarse,
        discretization_error: (coarse - fine).abs(),
        step: fd_step,
    })
}

/// Classical Fisher information `sum_j (d h_j/dg)^2 / h_j` of a family of
/// outcome masses. Outcomes with zero mass at `g` are skipped.
pub fn classical_fisher_numeric<F>(dist_at: F, g: f64, fd_step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let at = dist_at(g)?;
    let up = dist_at(g + fd_step)?;
    let down = dist_at(g - fd_step)?;
    if at.iter().all(|h| *h <= 0.0) {
        return Err(Error::AllMassesZero);
    }
    let mut info = 0.0;
    for (j, ((h, hp), hm)) in at.iter().zip(&up).zip(&down).enumerate() {
        if *h <= 0.0 {
            log::warn!("classical_fisher_numeric: outcome {j} has zero mass; skipped");
            continue;
        }
        let dh = (hp - hm) / (2.0 * fd_step);
        info += dh * dh / h;
    }
    if !info.is_finite() {
        return Err(Error::NonFinite("classical_fisher_numeric"));
    }
    Ok(info)
}
