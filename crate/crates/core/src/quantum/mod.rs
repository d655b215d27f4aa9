//! Single-qubit states, the phase-offset measurement bases, and Born-rule
//! sampling.
//!
//! Basis `M(j)` for maximum degree `delta` is the orthonormal pair
//! `(|0> +/- e^{i j phi} |1>) / sqrt(2)` with `phi = pi / delta`, for
//! `j in 0..delta/2`. `M(0)` is the Hadamard basis.

mod rng;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use rng::RngStream;

/// Tolerance for normalization and orthogonality checks.
pub const TOLERANCE: f64 = 1e-12;

/// Largest `delta` the direct-vector path accepts.
pub const MAX_DIRECT_DELTA: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("state is not normalized: |a|^2 + |b|^2 = {0}")]
    NotNormalized(f64),
    #[error("delta must be even and in 2..={max}, got {delta}", max = MAX_DIRECT_DELTA)]
    BadDelta { delta: usize },
    #[error("basis index {index} out of range for delta {delta} (need index < delta/2)")]
    BadIndex { index: usize, delta: usize },
}

/// `amp0 |0> + amp1 |1>`, unit norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitState {
    amp0: Complex64,
    amp1: Complex64,
}

impl QubitState {
    pub const ZERO: QubitState = QubitState {
        amp0: Complex64::new(1.0, 0.0),
        amp1: Complex64::new(0.0, 0.0),
    };
    pub const ONE: QubitState = QubitState {
        amp0: Complex64::new(0.0, 0.0),
        amp1: Complex64::new(1.0, 0.0),
    };
    pub const PLUS: QubitState = QubitState {
        amp0: Complex64::new(FRAC_1_SQRT_2, 0.0),
        amp1: Complex64::new(FRAC_1_SQRT_2, 0.0),
    };
    pub const MINUS: QubitState = QubitState {
        amp0: Complex64::new(FRAC_1_SQRT_2, 0.0),
        amp1: Complex64::new(-FRAC_1_SQRT_2, 0.0),
    };

    pub fn new(amp0: Complex64, amp1: Complex64) -> Result<Self, QuantumError> {
        let norm = amp0.norm_sqr() + amp1.norm_sqr();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(Self { amp0, amp1 })
    }

    /// Rescales any nonzero pair onto the unit sphere.
    pub fn normalized(amp0: Complex64, amp1: Complex64) -> Result<Self, QuantumError> {
        let norm = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm * norm));
        }
        Ok(Self {
            amp0: amp0 / norm,
            amp1: amp1 / norm,
        })
    }

    /// `cos(theta) |0> + sin(theta) e^{i phi} |1>`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            amp0: Complex64::new(theta.cos(), 0.0),
            amp1: Complex64::from_polar(theta.sin(), phi),
        }
    }

    pub fn amp0(&self) -> Complex64 {
        self.amp0
    }

    pub fn amp1(&self) -> Complex64 {
        self.amp1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    /// Representative of the same ray with `amp0` real and non-negative.
    pub fn canonical(&self) -> Self {
        let r = self.amp0.norm();
        if r <= TOLERANCE {
            return Self {
                amp0: Complex64::new(0.0, 0.0),
                amp1: self.amp1,
            };
        }
        let phase = self.amp0 / r;
        Self {
            amp0: Complex64::new(r, 0.0),
            amp1: self.amp1 * phase.conj(),
        }
    }

    /// Equality as rays (up to global phase).
    pub fn same_ray(&self, other: &QubitState, tol: f64) -> bool {
        (1.0 - self.inner(other).norm_sqr()).abs() <= tol
    }
}

impl fmt::Display for QubitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:.6}{:+.6}i)|0> + ({:.6}{:+.6}i)|1>",
            self.amp0.re, self.amp0.im, self.amp1.re, self.amp1.im
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Eigenvalue label `j+` or `j-` of basis `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Outcome {
    pub basis_index: usize,
    pub sign: Sign,
}

impl Outcome {
    pub const fn new(basis_index: usize, sign: Sign) -> Self {
        Self { basis_index, sign }
    }
}

/// An orthonormal measurement pair with its eigenvalue labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub index: usize,
    pub delta: usize,
    pub plus: QubitState,
    pub minus: QubitState,
}

impl MeasurementBasis {
    /// Pair the caller guarantees is orthonormal, e.g. the computational
    /// basis, which is not a member of the phase-offset family.
    pub fn from_vectors(index: usize, delta: usize, plus: QubitState, minus: QubitState) -> Self {
        Self {
            index,
            delta,
            plus,
            minus,
        }
    }

    pub fn vector(&self, sign: Sign) -> &QubitState {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

fn check_delta(delta: usize) -> Result<(), QuantumError> {
    if delta < 2 || !delta.is_multiple_of(2) || delta > MAX_DIRECT_DELTA {
        return Err(QuantumError::BadDelta { delta });
    }
    Ok(())
}

/// Basis `M(j)` for maximum degree `delta`.
pub fn build_basis(j: usize, delta: usize) -> Result<MeasurementBasis, QuantumError> {
    check_delta(delta)?;
    if j >= delta / 2 {
        return Err(QuantumError::BadIndex { index: j, delta });
    }
    let phase = Complex64::from_polar(FRAC_1_SQRT_2, j as f64 * PI / delta as f64);
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(MeasurementBasis {
        index: j,
        delta,
        plus: QubitState { amp0: h, amp1: phase },
        minus: QubitState { amp0: h, amp1: -phase },
    })
}

/// All `delta / 2` bases of the family.
pub fn basis_family(delta: usize) -> Result<Vec<MeasurementBasis>, QuantumError> {
    check_delta(delta)?;
    (0..delta / 2).map(|j| build_basis(j, delta)).collect()
}

/// `|<vec|state>|^2`, clamped to `[0, 1]`.
pub fn born_probability(state: &QubitState, vec: &QubitState) -> f64 {
    vec.inner(state).norm_sqr().clamp(0.0, 1.0)
}

/// `|<j_s|k_t>|^2` in closed form: `(1 + cos((k - j) phi)) / 2` when the
/// signs agree, `(1 - cos((k - j) phi)) / 2` when they differ.
pub fn cross_overlap_closed_form(j: usize, k: usize, sign_j: Sign, sign_k: Sign, delta: usize) -> f64 {
    let theta = (k as f64 - j as f64) * PI / delta as f64;
    if sign_j == sign_k {
        0.5 * (1.0 + theta.cos())
    } else {
        0.5 * (1.0 - theta.cos())
    }
}

/// Outcome for a precomputed `P(plus)`; consumes exactly one uniform draw.
#[inline]
pub fn sample_sign(p_plus: f64, rng: &mut RngStream) -> Sign {
    if rng.next_f64() < p_plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Measures one fresh copy of `state` in `basis`. Consumes one draw.
pub fn sample_measurement(state: &QubitState, basis: &MeasurementBasis, rng: &mut RngStream) -> Outcome {
    let sign = sample_sign(born_probability(state, &basis.plus), rng);
    Outcome::new(basis.index, sign)
}

/// `(theta, phi)` with `state ~ cos(theta) |0> + sin(theta) e^{i phi} |1>`
/// after fixing the global phase so `amp0 >= 0`.
///
/// `phi` is reported in `[0, pi)`; a negative `sin(theta)` is folded into
/// `theta in (3pi/2, 2pi)`. When `amp0 == 0` the result is
/// `(pi/2, arg(amp1))` with the argument in `[0, 2pi)`.
pub fn bloch_angles(state: &QubitState) -> (f64, f64) {
    let s = state.canonical();
    let a = s.amp0.re;
    let r = s.amp1.norm();
    if a <= TOLERANCE {
        return (PI / 2.0, s.amp1.arg().rem_euclid(2.0 * PI));
    }
    if r <= TOLERANCE {
        return (0.0, 0.0);
    }
    let mut phi = s.amp1.arg();
    let mut theta = r.atan2(a);
    if phi < 0.0 {
        phi += PI;
        theta = 2.0 * PI - theta;
    } else if phi >= PI {
        phi -= PI;
        theta = 2.0 * PI - theta;
    }
    (theta, phi)
}

/// `cos^2(pi / (2 delta))`: the largest single-shot probability that a wrong
/// basis reproduces a fixed eigenvalue.
pub fn delta_bound(delta: usize) -> f64 {
    let c = (PI / (2.0 * delta as f64)).cos();
    c * c
}
