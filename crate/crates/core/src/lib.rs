//! Euler-angle parametrization of SU(4) and two-qubit density matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: the 15 Gell-Mann generators of su(4), structure constants,
//!   closed-form one-parameter exponentials and the K/P Cartan split.
//! - [`euler`]: SU(2), SU(3) and SU(4) elements as ordered products of
//!   generator exponentials, plus the volume and covering range profiles.
//! - [`haar`]: the invariant one-form coefficient matrix, the closed-form
//!   Haar density, group volumes and Haar sampling of Euler angles.
//! - [`density`]: diagonal spectra on the 3-sphere, their Gell-Mann
//!   decomposition and the 12-angle conjugated density matrix.
//! - [`separability`]: partial transposes, characteristic polynomials, the
//!   resolvent-cubic eigenvalue route and the sign-of-determinant test.
//!
//! Everything is a pure function of its inputs; random draws come from
//! explicit seeded streams (see [`rng`]).

pub mod algebra;
pub mod density;
pub mod error;
pub mod euler;
pub mod haar;
pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod separability;

pub use algebra::{AlgebraElement, GeneratorClass, GeneratorKind, StructureConstants};
pub use density::{BlochCoefficients, DensityMatrix, SpectrumAngles};
pub use error::{Error, Result};
pub use euler::{EulerAngles, Group, GroupElement, Interval, RangeKind, RangeProfile};
pub use haar::{OneFormCoefficients, VolumeMethod, VolumeResult};
pub use linalg::Mat4;
pub use separability::{
    CharPolyCoeffs, DepressedQuartic, ResolventRoots, ScanConfig, ScanRecord, ScanSummary,
    SeparabilityVerdict, SpectrumPolicy, Subsystem,
};
