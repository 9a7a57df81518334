//! Small dense helpers over 4×4 complex matrices.

use nalgebra::{Matrix4, SymmetricEigen};
pub use num_complex::Complex64;

pub type Mat4 = Matrix4<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &Mat4, b: &Mat4) -> f64 {
    max_abs(&(a - b))
}

/// `‖U†U − I‖_max`.
pub fn unitarity_error(u: &Mat4) -> f64 {
    max_abs(&(u.adjoint() * u - Mat4::identity()))
}

pub fn hermiticity_error(m: &Mat4) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
pub fn hermitian_eigenvalues(m: &Mat4) -> [f64; 4] {
    let eig = SymmetricEigen::new(*m);
    let mut out = [0.0; 4];
    for (o, v) in out.iter_mut().zip(eig.eigenvalues.iter()) {
        *o = *v;
    }
    out.sort_by(f64::total_cmp);
    out
}
