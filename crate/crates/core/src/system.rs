//! Dense n-qubit system states and the GHZ pre/postselection family.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::SINGULAR_EPS;

/// Largest system size for which dense vectors are built.
pub const MAX_DENSE_SYSTEM_QUBITS: u32 = 20;

/// Amplitudes over the n-qubit computational basis. Bit k of the index is
/// qubit k; a zero bit is the +1 eigenstate of sigma_z.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    n: u32,
    amps: Vec<Complex64>,
}

impl SystemState {
    pub fn zeros(n: u32) -> Result<Self> {
        if n > MAX_DENSE_SYSTEM_QUBITS {
            return Err(Error::Capacity {
                n,
                max: MAX_DENSE_SYSTEM_QUBITS,
            });
        }
        Ok(Self {
            n,
            amps: vec![Complex64::new(0.0, 0.0); 1usize << n],
        })
    }

    pub fn from_amplitudes(n: u32, amps: Vec<Complex64>) -> Result<Self> {
        let expected = 1usize << n;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    /// `(a |0...0> + b |1...1>)`, unnormalized coefficients as given.
    pub fn ghz_form(n: u32, a: Complex64, b: Complex64) -> Result<Self> {
        let mut s = Self::zeros(n)?;
        let last = s.amps.len() - 1;
        s.amps[0] += a;
        s.amps[last] += b;
        Ok(s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SystemState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies the collective observable `sum_k sigma_z^(k)`.
    pub fn apply_collective_z(&self) -> SystemState {
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(idx, a)| a * collective_z_eigenvalue(self.n, idx))
            .collect();
        SystemState { n: self.n, amps }
    }

    /// True when all weight sits on `|0...0>` and `|1...1>`.
    pub fn is_ghz_form(&self, tol: f64) -> bool {
        let last = self.amps.len() - 1;
        self.amps
            .iter()
            .enumerate()
            .all(|(idx, a)| idx == 0 || idx == last || a.norm() <= tol)
    }
}

/// Eigenvalue of `sum_k sigma_z^(k)` on computational basis index `idx`.
pub fn collective_z_eigenvalue(n: u32, idx: usize) -> f64 {
    f64::from(n) - 2.0 * f64::from(idx.count_ones())
}

/// The five system states of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzStates {
    /// Prepared state, equal to `plus`.
    pub initial: SystemState,
    /// Successful postselection, `U_phi |psi_->`.
    pub postselected: SystemState,
    /// Failed postselection, orthogonal to `postselected`.
    pub orthogonal: SystemState,
    pub plus: SystemState,
    pub minus: SystemState,
}

pub fn ghz_states(n: u32, phi: f64) -> Result<GhzStates> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let theta = n as f64 * phi;
    let early = Complex64::from_polar(h, -theta);
    let late = Complex64::from_polar(h, theta);
    let hc = Complex64::new(h, 0.0);

    let plus = SystemState::ghz_form(n, hc, hc)?;
    Ok(GhzStates {
        initial: plus.clone(),
        postselected: SystemState::ghz_form(n, early, -late)?,
        orthogonal: SystemState::ghz_form(n, early, late)?,
        minus: SystemState::ghz_form(n, hc, -hc)?,
        plus,
    })
}

/// `A_w = -i n cot(n phi)`.
pub fn weak_value(n: u32, phi: f64) -> Result<Complex64> {
    let n_phi = n as f64 * phi;
    let s = n_phi.sin();
    if s.abs() < SINGULAR_EPS {
        return Err(Error::SingularWeakValue { n_phi });
    }
    Ok(Complex64::new(0.0, -(n as f64) * n_phi.cos() / s))
}

/// `|A_w|^2 = n^2 cot^2(n phi)`.
pub fn weak_value_norm_sqr(n: u32, phi: f64) -> Result<f64> {
    weak_value(n, phi).map(|w| w.norm_sqr())
}
