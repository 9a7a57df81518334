//! Partial-transpose separability test for two-qubit states.
//!
//! A two-qubit state is entangled exactly when its partial transpose has a
//! negative eigenvalue, and that partial transpose has at most one. The sign of
//! its determinant `d` — the constant term of the characteristic polynomial
//! `λ⁴ + aλ³ + bλ² + cλ + d` — therefore decides the question on its own.
//!
//! The eigenvalues themselves are also available in closed form: shifting
//! `λ = τ − a/4` removes the cubic term, and the roots `γᵢ` of the resolvent
//! cubic `γ³ + 2pγ² + (p² − 4r)γ − q² = 0` are the squared pair sums
//! `(τ₁ + τⱼ)²`, from which the τ are recovered by square roots.

use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{rho_full, spectrum_profile, DensityMatrix, SpectrumAngles};
use crate::error::{Error, Result};
use crate::euler::{range_profile, Group, RangeKind};
use crate::haar::sample_haar_angles;
use crate::linalg::{c, hermitian_eigenvalues, Mat4};
use crate::rng;

/// Default `|d|` threshold below which a state is reported as boundary.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Allowed deviation of `a` from −1 for unit-trace input.
pub const TRACE_COEFFICIENT_TOLERANCE: f64 = 1e-12;

/// Allowed imaginary part / negativity of a resolvent root.
pub const BRANCH_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    #[default]
    B,
}

impl FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Subsystem::A),
            "b" | "B" => Ok(Subsystem::B),
            other => Err(Error::argument(format!("unknown subsystem `{other}`"))),
        }
    }
}

/// Partial transpose with basis index `2·q_A + q_B`.
///
/// `B` transposes each 2×2 block in place; `A` transposes the grid of blocks.
pub fn partial_transpose(m: &Mat4, subsystem: Subsystem) -> Mat4 {
    Mat4::from_fn(|row, col| {
        let (ra, rb) = (row / 2, row % 2);
        let (ca, cb) = (col / 2, col % 2);
        match subsystem {
            Subsystem::B => m[(2 * ra + cb, 2 * ca + rb)],
            Subsystem::A => m[(2 * ca + rb, 2 * ra + cb)],
        }
    })
}

/// Coefficients of `λ⁴ + aλ³ + bλ² + cλ + d = det(λI − M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharPolyCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CharPolyCoeffs {
    pub fn eval(&self, x: f64) -> f64 {
        (((x + self.a) * x + self.b) * x + self.c) * x + self.d
    }
}

/// Faddeev–LeVerrier recursion; imaginary parts (zero for Hermitian input)
/// are dropped.
pub fn char_poly_coeffs(m: &Mat4) -> CharPolyCoeffs {
    let mut coeffs = [0.0; 4];
    let mut aux = Mat4::zeros();
    let mut prev = c(1.0);
    for k in 1..=4 {
        aux = m * aux + Mat4::identity() * prev;
        let ck = -(m * aux).trace() / c(k as f64);
        coeffs[k - 1] = ck.re;
        prev = ck;
    }
    CharPolyCoeffs {
        a: coeffs[0],
        b: coeffs[1],
        c: coeffs[2],
        d: coeffs[3],
    }
}

/// `τ⁴ + pτ² + qτ + r` with `λ = τ + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepressedQuartic {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// `−a/4`; equal to 1/4 up to rounding for unit-trace matrices.
    pub shift: f64,
}

impl DepressedQuartic {
    pub fn eval(&self, t: f64) -> f64 {
        ((t * t + self.p) * t + self.q) * t + self.r
    }
}

/// Removes the cubic term of a unit-trace characteristic polynomial.
pub fn depressed_quartic(coeffs: &CharPolyCoeffs) -> Result<DepressedQuartic> {
    let CharPolyCoeffs { a, b, c, d } = *coeffs;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
        return Err(Error::argument(
            "characteristic polynomial has non-finite coefficients",
        ));
    }
    if (a + 1.0).abs() > TRACE_COEFFICIENT_TOLERANCE {
        return Err(Error::argument(format!(
            "expected a unit-trace polynomial with a = −1, got a = {a}"
        )));
    }
    let a2 = a * a;
    let dq = DepressedQuartic {
        p: b - 3.0 * a2 / 8.0,
        q: c - a * b / 2.0 + a2 * a / 8.0,
        r: d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0,
        shift: -a / 4.0,
    };
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let original = coeffs.eval(t + dq.shift);
        let shifted = dq.eval(t);
        if (original - shifted).abs() > 1e-12 * (1.0 + original.abs()) {
            return Err(Error::consistency(format!(
                "shifted quartic disagrees with original at τ = {t}: {shifted:e} vs {original:e}"
            )));
        }
    }
    Ok(dq)
}

/// Roots of `γ³ + 2pγ² + (p² − 4r)γ − q²`, ascending by real part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventRoots {
    pub gamma: [Complex64; 3],
    /// All three roots real and nonnegative within [`BRANCH_TOLERANCE`].
    pub branch_valid: bool,
}

/// Cardano with the principal cube root, then one guarded Newton step per
/// root.
pub fn resolvent_roots(dq: &DepressedQuartic) -> ResolventRoots {
    let b = 2.0 * dq.p;
    let cc = dq.p * dq.p - 4.0 * dq.r;
    let d = -dq.q * dq.q;
    let cubic = |g: Complex64| ((g + b) * g + cc) * g + d;
    let slope = |g: Complex64| (g * 3.0 + 2.0 * b) * g + cc;

    // y³ + Py + Q with γ = y − b/3
    let big_p = cc - b * b / 3.0;
    let big_q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let disc = c(big_q * big_q / 4.0 + big_p * big_p * big_p / 27.0).sqrt();
    let half = c(-big_q / 2.0);
    // the larger of the two candidates avoids cancellation
    let cube = if (half + disc).norm() >= (half - disc).norm() {
        half + disc
    } else {
        half - disc
    };
    let u = cube.cbrt();
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut gamma = [c(0.0); 3];
    for (k, g) in gamma.iter_mut().enumerate() {
        let y = if u.norm() == 0.0 {
            c(0.0)
        } else {
            let uk = u * omega.powu(k as u32);
            uk - big_p / (uk * 3.0)
        };
        let mut root = y - b / 3.0;
        let f = cubic(root);
        let df = slope(root);
        if df.norm() > 0.0 {
            let polished = root - f / df;
            if cubic(polished).norm() <= f.norm() {
                root = polished;
            }
        }
        *g = root;
    }
    gamma.sort_by(|x, y| x.re.total_cmp(&y.re));
    let branch_valid = gamma
        .iter()
        .all(|g| g.im.abs() <= BRANCH_TOLERANCE && g.re >= -BRANCH_TOLERANCE);
    ResolventRoots {
        gamma,
        branch_valid,
    }
}

/// Eigenvalues from the resolvent roots, ascending, or `None` when the branch
/// is invalid and the caller should fall back to a numerical eigensolver.
///
/// With `sᵢ = √γᵢ` signed so that `s₁s₂s₃` has the sign of `−q`:
/// `τ = ½(s₁+s₂+s₃), ½(s₁−s₂−s₃), ½(−s₁+s₂−s₃), ½(−s₁−s₂+s₃)`.
pub fn eigenvalues_via_resolvent(dq: &DepressedQuartic) -> Option<[f64; 4]> {
    let roots = resolvent_roots(dq);
    if !roots.branch_valid {
        return None;
    }
    let [s1, s2, mut s3] = roots.gamma.map(|g| g.re.max(0.0).sqrt());
    if dq.q > 0.0 {
        s3 = -s3;
    }
    let mut lambda = [
        0.5 * (s1 + s2 + s3),
        0.5 * (s1 - s2 - s3),
        0.5 * (-s1 + s2 - s3),
        0.5 * (-s1 - s2 + s3),
    ]
    .map(|t| t + dq.shift);
    lambda.sort_by(f64::total_cmp);
    Some(lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    /// `d < −tolerance`.
    pub entangled: bool,
    /// Determinant of the partial transpose.
    pub d_value: f64,
    pub min_eigenvalue: f64,
    /// Eigenvalues of the partial transpose below `−tolerance`.
    pub negative_count: u32,
    /// `|d| ≤ tolerance`.
    pub boundary: bool,
}

impl SeparabilityVerdict {
    pub fn label(&self) -> &'static str {
        if self.entangled {
            "entangled"
        } else if self.boundary {
            "boundary"
        } else {
            "separable"
        }
    }
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance >= 0.0 {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "tolerance must be finite and nonnegative (got {tolerance})"
        )))
    }
}

/// Sign-of-d test on the partial transpose over subsystem B.
pub fn is_entangled(rho: &DensityMatrix, tolerance: f64) -> Result<SeparabilityVerdict> {
    classify(rho, Subsystem::B, tolerance)
}

pub fn classify(
    rho: &DensityMatrix,
    subsystem: Subsystem,
    tolerance: f64,
) -> Result<SeparabilityVerdict> {
    check_tolerance(tolerance)?;
    Ok(verdict(rho.matrix(), subsystem, tolerance))
}

fn verdict(rho: &Mat4, subsystem: Subsystem, tolerance: f64) -> SeparabilityVerdict {
    let pt = partial_transpose(rho, subsystem);
    let d = char_poly_coeffs(&pt).d;
    let eig = hermitian_eigenvalues(&pt);
    SeparabilityVerdict {
        entangled: d < -tolerance,
        d_value: d,
        min_eigenvalue: eig[0],
        negative_count: eig.iter().filter(|&&e| e < -tolerance).count() as u32,
        boundary: d.abs() <= tolerance,
    }
}

/// How θ is chosen for each scanned state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectrumPolicy {
    /// Independent uniform draws over the spectrum profile.
    UniformInProfile,
    Fixed(SpectrumAngles),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub samples: u64,
    pub seed: u64,
    /// Profile the twelve conjugation angles are drawn from.
    pub angle_profile: RangeKind,
    pub spectrum: SpectrumPolicy,
    pub tolerance: f64,
    pub subsystem: Subsystem,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            samples: 1,
            seed: 0,
            angle_profile: RangeKind::Volume,
            spectrum: SpectrumPolicy::UniformInProfile,
            tolerance: DEFAULT_TOLERANCE,
            subsystem: Subsystem::B,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub sample_index: u64,
    pub alpha: [f64; 12],
    pub theta: [f64; 3],
    pub d: f64,
    pub min_eig: f64,
    pub neg_count: u32,
    pub entangled: bool,
    pub boundary: bool,
}

impl ScanRecord {
    pub fn verdict_label(&self) -> &'static str {
        if self.entangled {
            "entangled"
        } else if self.boundary {
            "boundary"
        } else {
            "separable"
        }
    }
}

fn record(
    index: u64,
    alpha: [f64; 12],
    theta: SpectrumAngles,
    subsystem: Subsystem,
    tolerance: f64,
) -> ScanRecord {
    let rho = rho_full(&alpha, &theta);
    let v = verdict(rho.matrix(), subsystem, tolerance);
    ScanRecord {
        sample_index: index,
        alpha,
        theta: theta.to_array(),
        d: v.d_value,
        min_eig: v.min_eigenvalue,
        neg_count: v.negative_count,
        entangled: v.entangled,
        boundary: v.boundary,
    }
}

/// Counts over a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ScanSummary {
    pub total: u64,
    pub separable: u64,
    pub entangled: u64,
    pub boundary: u64,
    pub max_neg_count: u32,
}

impl ScanSummary {
    pub fn add(&mut self, r: &ScanRecord) {
        self.total += 1;
        if r.entangled {
            self.entangled += 1;
        } else if r.boundary {
            self.boundary += 1;
        } else {
            self.separable += 1;
        }
        self.max_neg_count = self.max_neg_count.max(r.neg_count);
    }
}

/// Records computed concurrently per block, handed to `sink` in index order.
const BLOCK: u64 = 1 << 14;

fn drive<E>(
    count: u64,
    make: impl Fn(u64) -> ScanRecord + Sync,
    mut sink: impl FnMut(&ScanRecord) -> Result<(), E>,
) -> Result<ScanSummary, E> {
    let mut summary = ScanSummary::default();
    let mut start = 0;
    while start < count {
        let end = (start + BLOCK).min(count);
        let block: Vec<ScanRecord> = (start..end).into_par_iter().map(&make).collect();
        for r in &block {
            summary.add(r);
            sink(r)?;
        }
        start = end;
    }
    Ok(summary)
}

fn validate_scan(config: &ScanConfig) -> Result<()> {
    check_tolerance(config.tolerance)?;
    if config.samples == 0 {
        return Err(Error::argument("scan needs at least one sample"));
    }
    if let SpectrumPolicy::Fixed(t) = config.spectrum {
        if !t.to_array().iter().all(|x| x.is_finite()) {
            return Err(Error::argument("fixed spectrum angles must be finite"));
        }
    }
    Ok(())
}

/// Random scan. Sample `i` draws from stream `(seed, i)`: fifteen Haar angles
/// (of which the first twelve are used), then θ₁, θ₂, θ₃ if not fixed.
pub fn scan_for_each<E>(
    config: &ScanConfig,
    sink: impl FnMut(&ScanRecord) -> Result<(), E>,
) -> Result<Result<ScanSummary, E>> {
    validate_scan(config)?;
    let profile = range_profile(Group::Su4, config.angle_profile);
    let theta_bounds = spectrum_profile();
    let make = |i: u64| {
        let mut rng = rng::stream(config.seed, i);
        let angles = sample_haar_angles(&mut rng, &profile);
        let mut alpha = [0.0; 12];
        alpha.copy_from_slice(&angles.values()[..12]);
        let theta = match config.spectrum {
            SpectrumPolicy::Fixed(t) => t,
            SpectrumPolicy::UniformInProfile => {
                let [t1, t2, t3] =
                    theta_bounds.map(|b| b.lo + rand::Rng::random::<f64>(&mut rng) * b.length());
                SpectrumAngles::new(t1, t2, t3)
            }
        };
        record(i, alpha, theta, config.subsystem, config.tolerance)
    };
    Ok(drive(config.samples, make, sink))
}

pub fn scan(config: &ScanConfig) -> Result<(Vec<ScanRecord>, ScanSummary)> {
    let mut records = Vec::with_capacity(config.samples.min(1 << 20) as usize);
    let summary = scan_for_each(config, |r| {
        records.push(*r);
        Ok::<_, std::convert::Infallible>(())
    })?
    .unwrap_or_else(|e| match e {});
    Ok((records, summary))
}

/// Number of corner states: each of α₁..α₁₂ and θ₁..θ₃ at either endpoint.
pub const CORNER_COUNT: u64 = 1 << 15;

/// Parameters of corner `index`: bit `k` selects the upper endpoint of
/// parameter `k` (α₁..α₁₂ then θ₁..θ₃).
pub fn corner_parameters(angle_profile: RangeKind, index: u64) -> ([f64; 12], SpectrumAngles) {
    let profile = range_profile(Group::Su4, angle_profile);
    let pick = |k: usize, lo: f64, hi: f64| if index >> k & 1 == 1 { hi } else { lo };
    let mut alpha = [0.0; 12];
    for (k, (a, b)) in alpha.iter_mut().zip(profile.bounds()).enumerate() {
        *a = pick(k, b.lo, b.hi);
    }
    let [t1, t2, t3] = spectrum_profile();
    let theta = SpectrumAngles::new(
        pick(12, t1.lo, t1.hi),
        pick(13, t2.lo, t2.hi),
        pick(14, t3.lo, t3.hi),
    );
    (alpha, theta)
}

/// Exhaustive scan of all [`CORNER_COUNT`] corners.
pub fn scan_corners_for_each<E>(
    angle_profile: RangeKind,
    subsystem: Subsystem,
    tolerance: f64,
    sink: impl FnMut(&ScanRecord) -> Result<(), E>,
) -> Result<Result<ScanSummary, E>> {
    check_tolerance(tolerance)?;
    let make = |i: u64| {
        let (alpha, theta) = corner_parameters(angle_profile, i);
        record(i, alpha, theta, subsystem, tolerance)
    };
    Ok(drive(CORNER_COUNT, make, sink))
}

pub fn scan_corners(
    angle_profile: RangeKind,
    subsystem: Subsystem,
    tolerance: f64,
) -> Result<(Vec<ScanRecord>, ScanSummary)> {
    let mut records = Vec::with_capacity(CORNER_COUNT as usize);
    let summary = scan_corners_for_each(angle_profile, subsystem, tolerance, |r| {
        records.push(*r);
        Ok::<_, std::convert::Infallible>(())
    })?
    .unwrap_or_else(|e| match e {});
    Ok((records, summary))
}
