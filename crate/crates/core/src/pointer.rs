//! Two-level pointer (meter) algebra.
//!
//! Pointer states are generally sub-normalized: the squared norm is the
//! fraction of incident photons that ends up in that branch.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes on the pointer basis `|0>_p`, `|1>_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerState {
    pub c0: Complex64,
    pub c1: Complex64,
}

impl PointerState {
    pub const fn new(c0: Complex64, c1: Complex64) -> Self {
        Self { c0, c1 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO)
    }

    /// The incident meter state `|0>_p`.
    pub const fn ground() -> Self {
        Self::new(ONE, ZERO)
    }

    /// `|R>_p = (|0> + i|1>)/sqrt(2)`, the +1 eigenvector of sigma_y.
    pub fn right() -> Self {
        Self::new(ONE, I).scale(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// `|L>_p = (|0> - i|1>)/sqrt(2)`, the -1 eigenvector of sigma_y.
    pub fn left() -> Self {
        Self::new(ONE, -I).scale(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// Builds a state from its components in the sigma_y eigenbasis, with the
    /// convention `state = (plus |R> + minus |L>) / sqrt(2)`, so that
    /// `|0>_p` corresponds to `plus = minus = 1`.
    pub fn from_y_branches(plus: Complex64, minus: Complex64) -> Self {
        Self::new((plus + minus) * 0.5, I * (plus - minus) * 0.5)
    }

    /// Inverse of [`PointerState::from_y_branches`].
    pub fn y_branches(&self) -> (Complex64, Complex64) {
        (self.c0 - I * self.c1, self.c0 + I * self.c1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PointerState) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.c0 * k, self.c1 * k)
    }

    pub fn scale_complex(&self, k: Complex64) -> Self {
        Self::new(self.c0 * k, self.c1 * k)
    }

    /// Unnormalized `<self|op|self>`; real for Hermitian `op`.
    pub fn sandwich(&self, op: &PointerOperator) -> Complex64 {
        self.inner(&op.apply(self))
    }

    /// Normalized expectation `<op> = <self|op|self> / <self|self>`.
    pub fn expectation(&self, op: &PointerOperator) -> Option<f64> {
        let norm = self.norm_sqr();
        if norm == 0.0 {
            return None;
        }
        Some(self.sandwich(op).re / norm)
    }

    pub fn max_abs_diff(&self, other: &PointerState) -> f64 {
        (self.c0 - other.c0).norm().max((self.c1 - other.c1).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite()
    }
}

impl Add for PointerState {
    type Output = PointerState;
    fn add(self, rhs: PointerState) -> PointerState {
        PointerState::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for PointerState {
    type Output = PointerState;
    fn sub(self, rhs: PointerState) -> PointerState {
        PointerState::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

/// A 2x2 complex matrix acting on the pointer, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerOperator {
    pub m: [[Complex64; 2]; 2],
}

/// Pauli Y, the coupling generator on the pointer side.
pub const SIGMA_Y: PointerOperator = PointerOperator {
    m: [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
};

/// The readout observable. Same matrix as [`SIGMA_Y`] in this representation;
/// kept separate because it plays a different role.
pub const SIGMA_R: PointerOperator = SIGMA_Y;

impl PointerOperator {
    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn zero() -> Self {
        Self::new([[ZERO, ZERO], [ZERO, ZERO]])
    }

    /// `f(sigma_y)` for a function taking the value `plus` on the +1
    /// eigenspace and `minus` on the -1 eigenspace.
    pub fn from_y_eigenvalues(plus: Complex64, minus: Complex64) -> Self {
        let avg = (plus + minus) * 0.5;
        let half_diff = (plus - minus) * 0.5;
        Self::identity().scale(avg) + SIGMA_Y.scale(half_diff)
    }

    pub fn apply(&self, s: &PointerState) -> PointerState {
        PointerState::new(
            self.m[0][0] * s.c0 + self.m[0][1] * s.c1,
            self.m[1][0] * s.c0 + self.m[1][1] * s.c1,
        )
    }

    pub fn dagger(&self) -> Self {
        let m = &self.m;
        Self::new([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for e in row.iter_mut() {
                *e *= k;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &PointerOperator) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = self.m[0][1].norm();
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        (mean - radius, mean + radius)
    }
}

impl Add for PointerOperator {
    type Output = PointerOperator;
    fn add(self, rhs: PointerOperator) -> PointerOperator {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl Mul for PointerOperator {
    type Output = PointerOperator;
    fn mul(self, rhs: PointerOperator) -> PointerOperator {
        let mut out = PointerOperator::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.m[i][j] = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        out
    }
}
