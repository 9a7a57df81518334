//! Haar measure in Euler coordinates.
//!
//! The density is obtained two ways. [`one_form_matrix`] expands each
//! right-invariant one-form of the transposed chain `u = Uᵀ`,
//!
//! ```text
//! M_k = (∂u/∂α_k) u⁻¹ = E_k (iλᵀ_{g(k)}) E_k⁻¹,   E_k = e^{iλᵀα₁₅} ⋯ e^{iλᵀα_{k+1}},
//! c_kj = (−i/2) Tr[λⱼᵀ M_k],
//! ```
//!
//! whose determinant is the density up to sign. [`haar_density`] is the
//! closed form, a product of one-dimensional factors in α₂, α₄, α₆, α₈, α₁₀
//! and α₁₂. The factorization drives quadrature and sampling.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{basis, exp_i_transposed, DIM};
use crate::error::{Error, Result};
use crate::euler::{
    compose, range_profile, EulerAngles, Group, GroupElement, RangeKind, RangeProfile,
    SU2_GENERATORS, SU3_GENERATORS, SU4_GENERATORS,
};
use crate::linalg::{Mat4, I};
use crate::quadrature::GaussLegendre;
use crate::rng;

const RESIDUE_TOLERANCE: f64 = 1e-12;

/// Expansion coefficients `c_kj` of the invariant one-forms.
///
/// Row `k` is the Euler parameter (0-based), column `j` the algebra generator
/// (0-based position within [`OneFormCoefficients::generators`]).
#[derive(Debug, Clone, PartialEq)]
pub struct OneFormCoefficients {
    group: Group,
    matrix: DMatrix<f64>,
}

impl OneFormCoefficients {
    pub fn group(&self) -> Group {
        self.group
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `c_kj` with 1-based parameter index `k` and generator index `j`.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.matrix[(k - 1, j - 1)]
    }

    /// Algebra generators spanning the columns: λ₁..λ_n for n = 3, 8, 15.
    pub fn generators(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.matrix.ncols()
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        self.matrix.clone().lu().determinant()
    }

    /// Largest `|c_kj|` over rows α₇..α₁₅ and columns λ₉..λ₁₄, the block that
    /// vanishes because the SU(3)·U(1) tail only conjugates within K.
    /// Zero for groups smaller than SU(4).
    pub fn zero_block_max(&self) -> f64 {
        if self.group != Group::Su4 {
            return 0.0;
        }
        let mut m: f64 = 0.0;
        for k in 7..=15 {
            for j in 9..=14 {
                m = m.max(self.get(k, j).abs());
            }
        }
        m
    }
}

fn one_form(group: Group, generators: &[usize], angles: &[f64]) -> Result<OneFormCoefficients> {
    let n = generators.len();
    let g = basis();
    // prefix[k] = Tᵢ for i from n down to k+1 (0-based k), Tᵢ = exp(iλᵀα)
    let mut prefix = vec![Mat4::identity(); n];
    for k in (0..n - 1).rev() {
        prefix[k] = prefix[k + 1] * exp_i_transposed(generators[k + 1], angles[k + 1]);
    }
    let mut matrix = DMatrix::zeros(n, n);
    for k in 0..n {
        let e = &prefix[k];
        let gen_t = g[generators[k] - 1].matrix().transpose() * I;
        let m_k = e * gen_t * e.adjoint();
        for j in 0..n {
            let lam = g[j].matrix();
            // Tr[λⱼᵀ M] = Σ_ab λⱼ[a,b] M[a,b]
            let tr = lam
                .iter()
                .zip(m_k.iter())
                .fold(num_complex::Complex64::new(0.0, 0.0), |acc, (l, m)| {
                    acc + l * m
                });
            let c = tr * (-0.5 * I);
            if c.im.abs() > RESIDUE_TOLERANCE {
                return Err(Error::consistency(format!(
                    "one-form coefficient c({},{}) has imaginary residue {:e}",
                    k + 1,
                    j + 1,
                    c.im
                )));
            }
            matrix[(k, j)] = c.re;
        }
    }
    Ok(OneFormCoefficients { group, matrix })
}

/// 15×15 one-form coefficient matrix at α₁..α₁₅.
pub fn one_form_matrix(angles: &[f64; 15]) -> Result<OneFormCoefficients> {
    debug_assert_eq!(DIM, 15);
    one_form(Group::Su4, &SU4_GENERATORS, angles)
}

/// 8×8 restriction to the SU(3) chain α₇..α₁₄ over λ₁..λ₈.
pub fn one_form_matrix_su3(angles: &[f64; 8]) -> Result<OneFormCoefficients> {
    one_form(Group::Su3, &SU3_GENERATORS, angles)
}

/// 3×3 restriction to D(μ, ν, ξ) over λ₁..λ₃.
pub fn one_form_matrix_su2(angles: &[f64; 3]) -> Result<OneFormCoefficients> {
    one_form(Group::Su2, &SU2_GENERATORS, angles)
}

/// Closed-form SU(4) Haar density with respect to dα₁⋯dα₁₅:
///
/// `cos³α₄ cosα₆ cosα₁₀ sin2α₂ sinα₄ sin⁵α₆ sin2α₈ sin³α₁₀ sin2α₁₂`.
///
/// Nonnegative on the volume and covering profiles; the raw trigonometric
/// product is returned elsewhere.
pub fn haar_density(a: &[f64; 15]) -> f64 {
    let (a2, a4, a6, a8, a10, a12) = (a[1], a[3], a[5], a[7], a[9], a[11]);
    a4.cos().powi(3)
        * a6.cos()
        * a10.cos()
        * (2.0 * a2).sin()
        * a4.sin()
        * a6.sin().powi(5)
        * (2.0 * a8).sin()
        * a10.sin().powi(3)
        * (2.0 * a12).sin()
}

/// SU(3) density on α₇..α₁₄: `sin2α₈ cosα₁₀ sin³α₁₀ sin2α₁₂`.
pub fn haar_density_su3(a: &[f64; 8]) -> f64 {
    (2.0 * a[1]).sin() * a[3].cos() * a[3].sin().powi(3) * (2.0 * a[5]).sin()
}

/// SU(2) density on (μ, ν, ξ): `sin 2ν`.
pub fn haar_density_su2(a: &[f64; 3]) -> f64 {
    (2.0 * a[1]).sin()
}

pub fn density(angles: &EulerAngles) -> f64 {
    let v = angles.values();
    match angles.group() {
        Group::Su2 => haar_density_su2(v.try_into().unwrap()),
        Group::Su3 => haar_density_su3(v.try_into().unwrap()),
        Group::Su4 => haar_density(v.try_into().unwrap()),
    }
}

/// Number of center elements and SU(2)-subgroup doublings folded out of the
/// volume profile: 2 for SU(2), 2·2·3 for SU(3), 2·2·2·2·3·4 for SU(4).
pub fn normalization_factor(group: Group) -> u32 {
    match group {
        Group::Su2 => 2,
        Group::Su3 => 12,
        Group::Su4 => 192,
    }
}

/// Reference volumes: 2π², √3π⁵ and √2π⁹/3.
pub fn analytic_volume(group: Group) -> f64 {
    match group {
        Group::Su2 => 2.0 * PI.powi(2),
        Group::Su3 => 3f64.sqrt() * PI.powi(5),
        Group::Su4 => 2f64.sqrt() * PI.powi(9) / 3.0,
    }
}

/// One-dimensional factor of the density along a single Euler angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Factor {
    Uniform,
    /// `sin 2x`
    Sin2,
    /// `cosᵃx · sin x`
    CosPow(i32),
    /// `cos x · sinᵇx`
    SinPow(i32),
}

impl Factor {
    pub(crate) fn value(self, x: f64) -> f64 {
        match self {
            Factor::Uniform => 1.0,
            Factor::Sin2 => (2.0 * x).sin(),
            Factor::CosPow(a) => x.cos().powi(a) * x.sin(),
            Factor::SinPow(b) => x.cos() * x.sin().powi(b),
        }
    }

    /// Antiderivative on `[0, π/2]` scaled to run from 0 to 1.
    fn cdf(self, x: f64) -> f64 {
        match self {
            Factor::Uniform => x / FRAC_PI_2,
            Factor::Sin2 => x.sin().powi(2),
            Factor::CosPow(a) => 1.0 - x.cos().powi(a + 1),
            Factor::SinPow(b) => x.sin().powi(b + 1),
        }
    }

    fn inverse_cdf(self, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        match self {
            Factor::Uniform => v * FRAC_PI_2,
            Factor::Sin2 => v.sqrt().asin(),
            Factor::CosPow(a) => (1.0 - v).powf(1.0 / f64::from(a + 1)).acos(),
            Factor::SinPow(b) => v.powf(1.0 / f64::from(b + 1)).asin(),
        }
    }

    /// Draw from the factor restricted to `[lo, hi] ⊆ [0, π/2]`.
    fn sample(self, lo: f64, hi: f64, u: f64) -> f64 {
        if self == Factor::Uniform {
            return lo + u * (hi - lo);
        }
        let (flo, fhi) = (self.cdf(lo), self.cdf(hi));
        self.inverse_cdf(flo + u * (fhi - flo)).clamp(lo, hi)
    }
}

pub(crate) fn factors(group: Group) -> &'static [Factor] {
    use Factor::*;
    const SU2: [Factor; 3] = [Uniform, Sin2, Uniform];
    const SU3: [Factor; 8] = [
        Uniform,
        Sin2,
        Uniform,
        SinPow(3),
        Uniform,
        Sin2,
        Uniform,
        Uniform,
    ];
    const SU4: [Factor; 15] = [
        Uniform,
        Sin2,
        Uniform,
        CosPow(3),
        Uniform,
        SinPow(5),
        Uniform,
        Sin2,
        Uniform,
        SinPow(3),
        Uniform,
        Sin2,
        Uniform,
        Uniform,
        Uniform,
    ];
    match group {
        Group::Su2 => &SU2,
        Group::Su3 => &SU3,
        Group::Su4 => &SU4,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeResult {
    pub group: Group,
    pub estimate: f64,
    /// Zero for quadrature.
    pub standard_error: f64,
    pub method: VolumeMethod,
    pub samples_or_nodes: u64,
    pub normalization: u32,
}

pub const MIN_QUADRATURE_NODES: u64 = 2;
pub const MIN_MONTE_CARLO_SAMPLES: u64 = 1000;
const MONTE_CARLO_CHUNK: u64 = 4096;

/// Group volume over the volume profile, scaled by [`normalization_factor`].
pub fn group_volume(
    group: Group,
    method: VolumeMethod,
    resolution: u64,
    seed: u64,
) -> Result<VolumeResult> {
    group_volume_over(group, RangeKind::Volume, method, resolution, seed)
}

/// Like [`group_volume`] but integrating over either profile. The covering
/// profile already accounts for the center, so its normalization is
/// `normalization_factor / Π(interval-length ratios)`, which is 1 for all
/// three groups.
pub fn group_volume_over(
    group: Group,
    kind: RangeKind,
    method: VolumeMethod,
    resolution: u64,
    seed: u64,
) -> Result<VolumeResult> {
    let profile = range_profile(group, kind);
    let normalization = match kind {
        RangeKind::Volume => normalization_factor(group),
        RangeKind::Covering => {
            let volume = range_profile(group, RangeKind::Volume);
            let ratio: f64 = profile
                .bounds()
                .iter()
                .zip(volume.bounds())
                .map(|(c, v)| c.length() / v.length())
                .product();
            (f64::from(normalization_factor(group)) / ratio).round() as u32
        }
    };
    let fs = factors(group);
    let (integral, standard_error) = match method {
        VolumeMethod::Quadrature => {
            if resolution < MIN_QUADRATURE_NODES {
                return Err(Error::argument(format!(
                    "quadrature needs at least {MIN_QUADRATURE_NODES} nodes per axis (got {resolution})"
                )));
            }
            let rule = GaussLegendre::new(resolution as usize)?;
            let v = fs
                .iter()
                .zip(profile.bounds())
                .map(|(f, b)| match f {
                    Factor::Uniform => b.length(),
                    f => rule.integrate(b.lo, b.hi, |x| f.value(x)),
                })
                .product();
            (v, 0.0)
        }
        VolumeMethod::MonteCarlo => {
            if resolution < MIN_MONTE_CARLO_SAMPLES {
                return Err(Error::argument(format!(
                    "Monte Carlo needs at least {MIN_MONTE_CARLO_SAMPLES} samples (got {resolution})"
                )));
            }
            monte_carlo(fs, &profile, resolution, seed)
        }
    };
    let n = f64::from(normalization);
    Ok(VolumeResult {
        group,
        estimate: n * integral,
        standard_error: n * standard_error,
        method,
        samples_or_nodes: resolution,
        normalization,
    })
}

/// Plain Monte Carlo over the box spanned by the non-uniform axes; uniform
/// axes contribute their lengths exactly.
fn monte_carlo(fs: &[Factor], profile: &RangeProfile, samples: u64, seed: u64) -> (f64, f64) {
    let mut box_volume = 1.0;
    let mut axes = Vec::new();
    for (f, b) in fs.iter().zip(profile.bounds()) {
        box_volume *= b.length();
        if *f != Factor::Uniform {
            axes.push((*f, b.lo, b.hi));
        }
    }
    let chunks = samples.div_ceil(MONTE_CARLO_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng::stream(seed, chunk);
            let n = MONTE_CARLO_CHUNK.min(samples - chunk * MONTE_CARLO_CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let v: f64 = axes
                    .iter()
                    .map(|&(f, lo, hi)| f.value(lo + rng.random::<f64>() * (hi - lo)))
                    .product();
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial
        .iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    (box_volume * mean, box_volume * (var / n).sqrt())
}

/// Euler angles distributed proportionally to the Haar density on `profile`.
///
/// Each angle is drawn independently, in index order, by inverting the CDF of
/// its one-dimensional factor.
pub fn sample_haar_angles<R: Rng + ?Sized>(rng: &mut R, profile: &RangeProfile) -> EulerAngles {
    let values = factors(profile.group())
        .iter()
        .zip(profile.bounds())
        .map(|(f, b)| f.sample(b.lo, b.hi, rng.random::<f64>()))
        .collect();
    EulerAngles::new(profile.group(), values).expect("sampled angles are finite")
}

pub fn sample_haar_unitary<R: Rng + ?Sized>(rng: &mut R, profile: &RangeProfile) -> GroupElement {
    compose(&sample_haar_angles(rng, profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn random_su4(seed: u64) -> [f64; 15] {
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = range_profile(Group::Su4, RangeKind::Volume);
        std::array::from_fn(|k| {
            let b = p.bounds()[k];
            b.lo + r.random::<f64>() * b.length()
        })
    }

    #[test]
    fn zero_angles_give_generator_columns() {
        let c = one_form_matrix(&[0.0; 15]).unwrap();
        for k in 1..=15 {
            for j in 1..=15 {
                let expected = if j == SU4_GENERATORS[k - 1] { 1.0 } else { 0.0 };
                assert!((c.get(k, j) - expected).abs() < 1e-15, "c({k},{j})");
            }
        }
    }

    #[test]
    fn determinant_matches_closed_form() {
        for seed in 0..20 {
            let a = random_su4(seed);
            let c = one_form_matrix(&a).unwrap();
            let det = c.determinant().abs();
            let closed = haar_density(&a);
            assert!(
                ((det - closed) / closed).abs() < 1e-8,
                "seed {seed}: {det} vs {closed}"
            );
            assert!(c.zero_block_max() < 1e-12);
        }
    }

    #[test]
    fn density_examples() {
        let mut a = random_su4(3);
        a[3] = 0.0;
        assert_eq!(haar_density(&a), 0.0);

        let q = PI / 4.0;
        let mut a = [0.3; 15];
        for k in [1, 3, 5, 7, 9, 11] {
            a[k] = q;
        }
        let expected = 2f64.powi(-7);
        assert!((haar_density(&a) - expected).abs() < 1e-15);
        let det = one_form_matrix(&a).unwrap().determinant().abs();
        assert!(((det - expected) / expected).abs() < 1e-8);
    }

    #[test]
    fn factors_reproduce_density() {
        for seed in 0..10 {
            let a = random_su4(seed);
            let prod: f64 = factors(Group::Su4)
                .iter()
                .zip(a)
                .map(|(f, x)| f.value(x))
                .product();
            assert!((prod - haar_density(&a)).abs() < 1e-15);
        }
    }

    #[test]
    fn su3_and_su2_restrictions() {
        let a: [f64; 8] = [0.4, 0.9, 2.2, 0.3, 1.7, 1.2, 0.8, 0.5];
        let det = one_form_matrix_su3(&a).unwrap().determinant().abs();
        assert!(((det - haar_density_su3(&a)) / haar_density_su3(&a)).abs() < 1e-8);
        let mut z = a;
        z[3] = 0.0;
        assert_eq!(haar_density_su3(&z), 0.0);

        let b = [0.7, 0.4, 2.5];
        let det = one_form_matrix_su2(&b).unwrap().determinant().abs();
        assert!((det - haar_density_su2(&b)).abs() < 1e-14);
    }

    #[test]
    fn normalization_factors() {
        assert_eq!(normalization_factor(Group::Su2), 2);
        assert_eq!(normalization_factor(Group::Su3), 2 * 2 * 3);
        assert_eq!(normalization_factor(Group::Su4), 2 * 2 * 2 * 2 * 3 * 4);
    }

    #[test]
    fn quadrature_volumes() {
        for (group, tol) in [
            (Group::Su2, 1e-12),
            (Group::Su3, 1e-10),
            (Group::Su4, 1e-10),
        ] {
            let v = group_volume(group, VolumeMethod::Quadrature, 32, 0).unwrap();
            let target = analytic_volume(group);
            assert!(
                ((v.estimate - target) / target).abs() <= tol,
                "{group}: {}",
                v.estimate
            );
            assert_eq!(v.standard_error, 0.0);
        }
    }

    #[test]
    fn covering_profile_absorbs_normalization() {
        for group in [Group::Su2, Group::Su3, Group::Su4] {
            let v = group_volume_over(group, RangeKind::Covering, VolumeMethod::Quadrature, 16, 0)
                .unwrap();
            assert_eq!(v.normalization, 1);
            let target = analytic_volume(group);
            assert!(((v.estimate - target) / target).abs() < 1e-12);
        }
    }

    #[test]
    fn resolution_is_validated() {
        assert!(group_volume(Group::Su2, VolumeMethod::Quadrature, 1, 0).is_err());
        assert!(group_volume(Group::Su2, VolumeMethod::MonteCarlo, 999, 0).is_err());
    }

    #[test]
    fn monte_carlo_within_four_standard_errors() {
        for seed in [1, 2, 3] {
            let v = group_volume(Group::Su4, VolumeMethod::MonteCarlo, 200_000, seed).unwrap();
            let target = analytic_volume(Group::Su4);
            assert!(v.standard_error > 0.0);
            assert!((v.estimate - target).abs() <= 4.0 * v.standard_error);
        }
    }

    #[test]
    fn inverse_cdfs_invert() {
        for f in [
            Factor::Sin2,
            Factor::CosPow(3),
            Factor::SinPow(5),
            Factor::SinPow(3),
        ] {
            for v in [0.0, 0.1, 0.5, 0.93, 1.0] {
                let x = f.inverse_cdf(v);
                assert!((f.cdf(x) - v).abs() < 1e-12, "{f:?} at {v}");
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let p = range_profile(Group::Su4, RangeKind::Covering);
        let mut r1 = rng::stream(11, 0);
        let mut r2 = rng::stream(11, 0);
        for _ in 0..100 {
            let a = sample_haar_angles(&mut r1, &p);
            let b = sample_haar_angles(&mut r2, &p);
            assert_eq!(a, b);
            assert!(p.contains(a.values()));
        }
    }
}
