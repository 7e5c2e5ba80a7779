use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pointer::PointerState;
use crate::system::SystemState;

/// Largest `n` simulated by the dense oracle (dimension 2^(n+1) = 8192).
pub const MAX_ORACLE_QUBITS: u32 = 12;

/// Joint state of `n` system qubits and the pointer qubit, ordered
/// system-major: amplitude index `2 * system_index + pointer_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: u32,
    amps: Vec<Complex64>,
}

fn check_capacity(n: u32) -> Result<()> {
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::Capacity {
            n,
            max: MAX_ORACLE_QUBITS,
        });
    }
    Ok(())
}

impl FullState {
    /// `|system> (x) |pointer>`.
    pub fn product(system: &SystemState, pointer: &PointerState) -> Result<Self> {
        check_capacity(system.n())?;
        let mut amps = Vec::with_capacity(2 * system.dim());
        for a in system.amplitudes() {
            amps.push(a * pointer.c0);
            amps.push(a * pointer.c1);
        }
        Ok(Self {
            n: system.n(),
            amps,
        })
    }

    pub fn from_amplitudes(n: u32, amps: Vec<Complex64>) -> Result<Self> {
        check_capacity(n)?;
        let expected = 2usize << n;
        if amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// `exp(-i g A (x) sigma_y)` applied exactly.
///
/// The generator is diagonalized blockwise: `A` is diagonal in the
/// computational basis with eigenvalue `a`, and within each pointer block the
/// state is expanded on the sigma_y eigenvectors `(1, +-i)/sqrt(2)`, whose
/// components pick up the phases `exp(-+i g a)`.
pub fn apply_weak_coupling(state: &FullState, g: f64) -> FullState {
    let n = state.n;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);

    // Phases depend only on a = n - 2*popcount, so cache one pair per a.
    let phases: Vec<(Complex64, Complex64)> = (0..=n)
        .map(|ones| {
            let a = f64::from(n) - 2.0 * f64::from(ones);
            (
                Complex64::from_polar(1.0, -g * a),
                Complex64::from_polar(1.0, g * a),
            )
        })
        .collect();

    let mut out = Vec::with_capacity(state.amps.len());
    for (sys, pair) in state.amps.chunks_exact(2).enumerate() {
        let (u0, u1) = (pair[0], pair[1]);
        let along_plus = (u0 - i * u1) * h;
        let along_minus = (u0 + i * u1) * h;
        let (ph_plus, ph_minus) = phases[sys.count_ones() as usize];
        let a_plus = along_plus * ph_plus;
        let a_minus = along_minus * ph_minus;
        out.push((a_plus + a_minus) * h);
        out.push((a_plus - a_minus) * i * h);
    }
    FullState { n, amps: out }
}

/// Partial inner product `<bra| (x) 1_p |state>`, leaving a pointer state.
pub fn postselect(state: &FullState, bra: &SystemState) -> Result<PointerState> {
    if bra.dim() * 2 != state.amps.len() {
        return Err(Error::DimensionMismatch {
            expected: state.amps.len() / 2,
            got: bra.dim(),
        });
    }
    let mut out = PointerState::zero();
    for (b, pair) in bra.amplitudes().iter().zip(state.amps.chunks_exact(2)) {
        let w = b.conj();
        out.c0 += w * pair[0];
        out.c1 += w * pair[1];
    }
    Ok(out)
}
