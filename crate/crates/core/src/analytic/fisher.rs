use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::pointer::PointerState;

/// Which closed form of the single-pass QFI to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QfiForm {
    /// The expression exactly as printed in the source derivation, kept for
    /// comparison. Its first term has the sine and cosine of `n*phi` swapped
    /// and its second term carries an extra square.
    AsPrinted,
    /// The QFI functional applied to the postselected meter state. Canonical.
    Derived,
}

/// `4 [<dPhi|dPhi> - |<Phi|dPhi>|^2]` for a (possibly sub-normalized) meter
/// state and its derivative with respect to `g`.
pub fn qfi_functional(state: &PointerState, derivative: &PointerState) -> f64 {
    4.0 * (derivative.norm_sqr() - state.inner(derivative).norm_sqr())
}

/// QFI of the single-pass postselected meter state.
pub fn qfi_standard(cfg: &ExperimentConfig, form: QfiForm) -> f64 {
    let n2 = cfg.n_f64() * cfg.n_f64();
    let (sp, cp) = cfg.n_phi().sin_cos();
    let (sg, cg) = cfg.n_g().sin_cos();
    let sin_2ng = (2.0 * cfg.n_g()).sin();
    let cos_2nphi = (2.0 * cfg.n_phi()).cos();
    match form {
        QfiForm::AsPrinted => {
            let inner = sin_2ng * sin_2ng * cos_2nphi * cos_2nphi;
            4.0 * n2 * (sg * sg * cp * cp + cg * cg * sp * sp) - n2 * inner * inner
        }
        QfiForm::Derived => {
            4.0 * n2 * (sp * sp * sg * sg + cp * cp * cg * cg)
                - n2 * sin_2ng * sin_2ng * cos_2nphi * cos_2nphi
        }
    }
}

/// Leading-order QFI of the recycled meter state,
/// `4 n^2 p^2 (cos n phi - rL)^2 / (1 - rL cos n phi)^4`.
pub fn qfi_recycled(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.warn_outside_weak_regime("qfi_recycled");
    let c = cfg.n_phi().cos();
    let rl = cfg.round_trip();
    let den = 1.0 - rl * c;
    if den <= 0.0 {
        return Err(Error::DivergentCavity { gain: rl * c });
    }
    let n2 = cfg.n_f64() * cfg.n_f64();
    let p2 = cfg.p() * cfg.p();
    Ok(4.0 * n2 * p2 * (c - rl) * (c - rl) / den.powi(4))
}
