//! Two-qubit density matrices from a spectrum on the 3-sphere and twelve
//! Euler angles.
//!
//! The diagonal state is
//!
//! ```text
//! ρ_d = diag(w²x²y², (1−w²)x²y², (1−x²)y², 1−y²),   w = sinθ₁, x = sinθ₂, y = sinθ₃
//! ```
//!
//! and the general state is `V ρ_d V†` with V the first twelve factors of the
//! SU(4) Euler product. The remaining λ₃, λ₈, λ₁₅ factors commute with ρ_d.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use crate::algebra::{basis, DIM};
use crate::error::{Error, Result};
use crate::euler::{chain_product, compose_su4, Interval, SU4_GENERATORS};
use crate::linalg::{c, hermitian_eigenvalues, hermiticity_error, Mat4};

/// θ₁, θ₂, θ₃ in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl SpectrumAngles {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self {
            theta1,
            theta2,
            theta3,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.theta1, self.theta2, self.theta3]
    }

    /// The lower corner of the profile, where ρ_d = I/4.
    pub fn maximally_mixed() -> Self {
        let [a, b, c] = spectrum_profile().map(|i| i.lo);
        Self::new(a, b, c)
    }

    /// `(w², x², y²)`.
    pub fn squares(self) -> (f64, f64, f64) {
        (
            self.theta1.sin().powi(2),
            self.theta2.sin().powi(2),
            self.theta3.sin().powi(2),
        )
    }

    /// Diagonal of ρ_d.
    pub fn spectrum(self) -> [f64; 4] {
        let (w2, x2, y2) = self.squares();
        [
            w2 * x2 * y2,
            (1.0 - w2) * x2 * y2,
            (1.0 - x2) * y2,
            1.0 - y2,
        ]
    }
}

/// θ₁ ∈ [π/4, π/2], θ₂ ∈ [arccos(1/√3), π/2], θ₃ ∈ [π/3, π/2].
pub fn spectrum_profile() -> [Interval; 3] {
    [
        Interval {
            lo: FRAC_PI_4,
            hi: FRAC_PI_2,
        },
        Interval {
            lo: (1.0 / 3f64.sqrt()).acos(),
            hi: FRAC_PI_2,
        },
        Interval {
            lo: FRAC_PI_3,
            hi: FRAC_PI_2,
        },
    ]
}

pub fn spectrum_profile_check(theta: &SpectrumAngles) -> bool {
    spectrum_profile()
        .iter()
        .zip(theta.to_array())
        .all(|(i, t)| i.contains(t))
}

/// A Hermitian, unit-trace, positive-semidefinite 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    pub const HERMITIAN_TOLERANCE: f64 = 1e-13;
    pub const TRACE_TOLERANCE: f64 = 1e-13;
    pub const EIGENVALUE_TOLERANCE: f64 = 1e-12;

    /// Validates the density-matrix invariants.
    pub fn new(matrix: Mat4) -> Result<Self> {
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidDensity {
                invariant: "finiteness",
                detail: "matrix has non-finite entries".into(),
            });
        }
        let herm = hermiticity_error(&matrix);
        if herm > Self::HERMITIAN_TOLERANCE {
            return Err(Error::InvalidDensity {
                invariant: "hermiticity",
                detail: format!("max |ρ − ρ†| = {herm:e}"),
            });
        }
        let tr = matrix.trace();
        if (tr - c(1.0)).norm() > Self::TRACE_TOLERANCE {
            return Err(Error::InvalidDensity {
                invariant: "trace",
                detail: format!("trace = {} {:+}i", tr.re, tr.im),
            });
        }
        let min = hermitian_eigenvalues(&matrix)[0];
        if min < -Self::EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidDensity {
                invariant: "positivity",
                detail: format!("smallest eigenvalue {min:e}"),
            });
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix known to be a density matrix by construction.
    pub(crate) fn from_parts(matrix: Mat4) -> Self {
        Self(matrix)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.0)
    }
}

pub fn rho_diagonal(theta: &SpectrumAngles) -> DensityMatrix {
    let s = theta.spectrum();
    DensityMatrix::from_parts(Mat4::from_diagonal(&Vector4::new(
        c(s[0]),
        c(s[1]),
        c(s[2]),
        c(s[3]),
    )))
}

/// `ρ_d = w₀I + w₃λ₃ + w₈λ₈ + w₁₅λ₁₅`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochCoefficients {
    pub w0: f64,
    pub w3: f64,
    pub w8: f64,
    pub w15: f64,
}

impl BlochCoefficients {
    pub fn reconstruct(&self) -> Mat4 {
        let g = basis();
        Mat4::identity() * c(self.w0)
            + g[2].matrix() * c(self.w3)
            + g[7].matrix() * c(self.w8)
            + g[14].matrix() * c(self.w15)
    }
}

/// Closed-form decomposition of ρ_d, checked against `½Tr[ρ_d λⱼ]` for all
/// fifteen generators.
pub fn bloch_coefficients(theta: &SpectrumAngles) -> Result<BlochCoefficients> {
    const TOL: f64 = 1e-13;
    let (w2, x2, y2) = theta.squares();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let coeffs = BlochCoefficients {
        w0: 0.25,
        w3: 0.5 * (-1.0 + 2.0 * w2) * x2 * y2,
        w8: (-2.0 + 3.0 * x2) * y2 / (2.0 * s3),
        w15: (-3.0 + 4.0 * y2) / (2.0 * s6),
    };
    let rho = rho_diagonal(theta);
    for j in 1..=DIM {
        let traced = 0.5 * (rho.matrix() * basis()[j - 1].matrix()).trace().re;
        let expected = match j {
            3 => coeffs.w3,
            8 => coeffs.w8,
            15 => coeffs.w15,
            _ => 0.0,
        };
        if (traced - expected).abs() > TOL {
            return Err(Error::consistency(format!(
                "Gell-Mann coefficient on λ{j} is {traced:e}, expected {expected:e}"
            )));
        }
    }
    Ok(coeffs)
}

/// The twelve-factor conjugating unitary `e^{iλ₃α₁} ⋯ e^{iλ₂α₁₂}`.
pub fn conjugation_unitary(alpha: &[f64; 12]) -> Mat4 {
    chain_product(&SU4_GENERATORS[..12], alpha)
}

/// `V ρ_d V†`.
pub fn rho_full(alpha: &[f64; 12], theta: &SpectrumAngles) -> DensityMatrix {
    let v = conjugation_unitary(alpha);
    let rho_d = rho_diagonal(theta);
    DensityMatrix::from_parts(v * rho_d.matrix() * v.adjoint())
}

/// `U ρ_d U†` with U the full fifteen-angle SU(4) element. Equal to
/// [`rho_full`] on the first twelve angles up to rounding.
pub fn rho_su4(angles: &[f64; 15], theta: &SpectrumAngles) -> DensityMatrix {
    let u = compose_su4(angles).into_matrix();
    let rho_d = rho_diagonal(theta);
    DensityMatrix::from_parts(u * rho_d.matrix() * u.adjoint())
}
