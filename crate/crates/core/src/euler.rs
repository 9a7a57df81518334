//! Group elements as ordered products of one-parameter exponentials.
//!
//! ```text
//! SU(4): U = e^{iλ₃α₁} e^{iλ₂α₂} e^{iλ₃α₃} e^{iλ₅α₄} e^{iλ₃α₅} e^{iλ₁₀α₆}
//!            · [SU(3) on α₇..α₁₄] · e^{iλ₁₅α₁₅}
//! SU(3): e^{iλ₃α₇} e^{iλ₂α₈} e^{iλ₃α₉} e^{iλ₅α₁₀} D(α₁₁,α₁₂,α₁₃) e^{iλ₈α₁₄}
//! SU(2): D(μ,ν,ξ) = e^{iλ₃μ} e^{iλ₂ν} e^{iλ₃ξ}
//! ```
//!
//! Smaller groups are embedded in the top-left block of a 4×4 matrix.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::exp_i;
use crate::error::{Error, Result};
use crate::linalg::{unitarity_error, Mat4};

/// Generator used by each SU(4) factor, in product order (α₁ first).
pub const SU4_GENERATORS: [usize; 15] = [3, 2, 3, 5, 3, 10, 3, 2, 3, 5, 3, 2, 3, 8, 15];
/// SU(3) factors, acting on α₇..α₁₄.
pub const SU3_GENERATORS: [usize; 8] = [3, 2, 3, 5, 3, 2, 3, 8];
pub const SU2_GENERATORS: [usize; 3] = [3, 2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    Su3,
    Su4,
}

impl Group {
    /// Number of Euler angles.
    pub fn parameter_count(self) -> usize {
        self.generators().len()
    }

    pub fn generators(self) -> &'static [usize] {
        match self {
            Group::Su2 => &SU2_GENERATORS,
            Group::Su3 => &SU3_GENERATORS,
            Group::Su4 => &SU4_GENERATORS,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Su2 => "su2",
            Group::Su3 => "su3",
            Group::Su4 => "su4",
        })
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "su2" => Ok(Group::Su2),
            "su3" => Ok(Group::Su3),
            "su4" => Ok(Group::Su4),
            other => Err(Error::argument(format!("unknown group `{other}`"))),
        }
    }
}

/// Euler angles of an SU(2), SU(3) or SU(4) element, in radians.
///
/// SU(2) stores (μ, ν, ξ), SU(3) stores α₇..α₁₄ and SU(4) stores α₁..α₁₅.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    group: Group,
    values: Vec<f64>,
}

impl EulerAngles {
    pub fn new(group: Group, values: Vec<f64>) -> Result<Self> {
        if values.len() != group.parameter_count() {
            return Err(Error::argument(format!(
                "{group} takes {} angles, got {}",
                group.parameter_count(),
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::argument(format!(
                "angle #{} is not finite ({})",
                pos + 1,
                values[pos]
            )));
        }
        Ok(Self { group, values })
    }

    pub fn su4(values: [f64; 15]) -> Result<Self> {
        Self::new(Group::Su4, values.to_vec())
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The fifteen SU(4) angles, if this is an SU(4) parameter set.
    pub fn as_su4(&self) -> Option<[f64; 15]> {
        (self.group == Group::Su4).then(|| self.values.as_slice().try_into().unwrap())
    }

    pub fn as_su3(&self) -> Option<[f64; 8]> {
        (self.group == Group::Su3).then(|| self.values.as_slice().try_into().unwrap())
    }
}

/// A special-unitary 4×4 matrix (SU(2)/SU(3) elements padded with identity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(Mat4);

impl GroupElement {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.0)
    }

    /// `|det U − 1|`.
    pub fn determinant_error(&self) -> f64 {
        (self.0.determinant() - 1.0).norm()
    }
}

/// Left-to-right product of `exp(iλ_g α)` factors.
pub(crate) fn chain_product(generators: &[usize], angles: &[f64]) -> Mat4 {
    debug_assert_eq!(generators.len(), angles.len());
    generators
        .iter()
        .zip(angles)
        .fold(Mat4::identity(), |acc, (&g, &a)| acc * exp_i(g, a))
}

pub fn compose_su2(mu: f64, nu: f64, xi: f64) -> GroupElement {
    GroupElement(chain_product(&SU2_GENERATORS, &[mu, nu, xi]))
}

/// SU(3) element from α₇..α₁₄ (passed as an 8-array).
pub fn compose_su3(angles: &[f64; 8]) -> GroupElement {
    GroupElement(chain_product(&SU3_GENERATORS, angles))
}

/// SU(4) element from α₁..α₁₅.
pub fn compose_su4(angles: &[f64; 15]) -> GroupElement {
    GroupElement(chain_product(&SU4_GENERATORS, angles))
}

pub fn compose(angles: &EulerAngles) -> GroupElement {
    GroupElement(chain_product(angles.group.generators(), &angles.values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    /// Ranges whose integral, times the center factor, gives the group volume.
    Volume,
    /// Ranges that cover the whole group once.
    Covering,
}

impl FromStr for RangeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "volume" => Ok(RangeKind::Volume),
            "covering" => Ok(RangeKind::Covering),
            other => Err(Error::argument(format!("unknown range kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    const fn upto(hi: f64) -> Self {
        Self { lo: 0.0, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Per-angle integration/sampling bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    group: Group,
    kind: RangeKind,
    bounds: Vec<Interval>,
}

impl RangeProfile {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn kind(&self) -> RangeKind {
        self.kind
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn contains(&self, angles: &[f64]) -> bool {
        angles.len() == self.bounds.len()
            && self.bounds.iter().zip(angles).all(|(b, &a)| b.contains(a))
    }
}

pub fn range_profile(group: Group, kind: RangeKind) -> RangeProfile {
    let half = Interval::upto(PI / 2.0);
    let one = Interval::upto(PI);
    let two = Interval::upto(2.0 * PI);
    let sqrt3 = 3f64.sqrt();
    let l8 = match kind {
        RangeKind::Volume => Interval::upto(PI / sqrt3),
        RangeKind::Covering => Interval::upto(sqrt3 * PI),
    };
    // α₃, α₅, α₉, α₁₃ (and ξ) double on the covering profile
    let doubled = match kind {
        RangeKind::Volume => one,
        RangeKind::Covering => two,
    };
    let bounds = match group {
        Group::Su2 => vec![one, half, doubled],
        Group::Su3 => vec![one, half, doubled, half, one, half, doubled, l8],
        Group::Su4 => {
            let l15 = match kind {
                RangeKind::Volume => Interval::upto(PI / 6f64.sqrt()),
                RangeKind::Covering => Interval::upto(2.0 * (2.0f64 / 3.0).sqrt() * PI),
            };
            vec![
                one, half, doubled, half, doubled, half, one, half, doubled, half, one, half,
                doubled, l8, l15,
            ]
        }
    };
    RangeProfile {
        group,
        kind,
        bounds,
    }
}
