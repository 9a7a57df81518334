//! The su(4) Lie algebra in the Gell-Mann basis.
//!
//! Generators are indexed 1..=15 with the usual normalization
//! `Tr[λᵢλⱼ] = 2δᵢⱼ`. λ₃, λ₈ and λ₁₅ are diagonal; every other generator is a
//! symmetric (`E_ab + E_ba`) or antisymmetric (`−iE_ab + iE_ba`) pair embedded
//! in two rows/columns. That split is what makes single-generator exponentials
//! available in closed form.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_error, Mat4, I};

/// Number of generators of su(4).
pub const DIM: usize = 15;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT6: f64 = 2.449_489_742_783_178;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Diagonal,
    EmbeddedRotation,
}

/// How a generator acts: its kind and the (zero-based) rows/columns it touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorClass {
    pub kind: GeneratorKind,
    pub support: &'static [usize],
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// `E_ab + E_ba`
    Symmetric(usize, usize),
    /// `−i E_ab + i E_ba`
    Antisymmetric(usize, usize),
    Diagonal([f64; 4]),
}

fn shape(index: usize) -> Shape {
    use Shape::*;
    match index {
        1 => Symmetric(0, 1),
        2 => Antisymmetric(0, 1),
        3 => Diagonal([1.0, -1.0, 0.0, 0.0]),
        4 => Symmetric(0, 2),
        5 => Antisymmetric(0, 2),
        6 => Symmetric(1, 2),
        7 => Antisymmetric(1, 2),
        8 => Diagonal([1.0 / SQRT3, 1.0 / SQRT3, -2.0 / SQRT3, 0.0]),
        9 => Symmetric(0, 3),
        10 => Antisymmetric(0, 3),
        11 => Symmetric(1, 3),
        12 => Antisymmetric(1, 3),
        13 => Symmetric(2, 3),
        14 => Antisymmetric(2, 3),
        15 => Diagonal([1.0 / SQRT6, 1.0 / SQRT6, 1.0 / SQRT6, -3.0 / SQRT6]),
        _ => unreachable!("generator index checked by caller"),
    }
}

pub(crate) fn check_index(index: usize) -> Result<()> {
    if (1..=DIM).contains(&index) {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "index out of range 1..15 (got {index})"
        )))
    }
}

pub fn generator_class(index: usize) -> Result<GeneratorClass> {
    check_index(index)?;
    static PAIRS: [[usize; 2]; 6] = [[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 3]];
    let class = match shape(index) {
        Shape::Symmetric(a, b) | Shape::Antisymmetric(a, b) => GeneratorClass {
            kind: GeneratorKind::EmbeddedRotation,
            support: PAIRS
                .iter()
                .find(|p| p[0] == a && p[1] == b)
                .map(|p| &p[..])
                .expect("pair table covers every off-diagonal generator"),
        },
        Shape::Diagonal(_) => GeneratorClass {
            kind: GeneratorKind::Diagonal,
            support: match index {
                3 => &[0, 1],
                8 => &[0, 1, 2],
                _ => &[0, 1, 2, 3],
            },
        },
    };
    Ok(class)
}

/// A Hermitian, traceless 4×4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    matrix: Mat4,
}

impl AlgebraElement {
    const TOLERANCE: f64 = 1e-14;

    pub fn new(matrix: Mat4) -> Result<Self> {
        let herm = hermiticity_error(&matrix);
        if herm > Self::TOLERANCE {
            return Err(Error::argument(format!(
                "algebra element is not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace().norm();
        if tr > Self::TOLERANCE {
            return Err(Error::argument(format!(
                "algebra element is not traceless (|trace| = {tr:e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Real combination `Σ cᵢ λᵢ`.
    pub fn from_components(terms: &[(usize, f64)]) -> Result<Self> {
        let mut m = Mat4::zeros();
        for &(index, coeff) in terms {
            m += gell_mann(index)?.matrix * c(coeff);
        }
        Ok(Self { matrix: m })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }

    /// Coordinates in the Gell-Mann basis, `cⱼ = Tr[A λⱼ] / 2`.
    pub fn components(&self) -> [f64; DIM] {
        let mut out = [0.0; DIM];
        for (j, o) in out.iter_mut().enumerate() {
            *o = 0.5 * (self.matrix * basis()[j].matrix).trace().re;
        }
        out
    }
}

fn build(index: usize) -> Mat4 {
    let mut m = Mat4::zeros();
    match shape(index) {
        Shape::Symmetric(a, b) => {
            m[(a, b)] = c(1.0);
            m[(b, a)] = c(1.0);
        }
        Shape::Antisymmetric(a, b) => {
            m[(a, b)] = -I;
            m[(b, a)] = I;
        }
        Shape::Diagonal(d) => {
            for (k, v) in d.iter().enumerate() {
                m[(k, k)] = c(*v);
            }
        }
    }
    m
}

/// The 15 generators, zero-indexed (`basis()[0]` is λ₁).
pub fn basis() -> &'static [AlgebraElement; DIM] {
    static BASIS: OnceLock<[AlgebraElement; DIM]> = OnceLock::new();
    BASIS.get_or_init(|| {
        std::array::from_fn(|k| AlgebraElement {
            matrix: build(k + 1),
        })
    })
}

/// Gell-Mann generator λ_index, 1 ≤ index ≤ 15.
pub fn gell_mann(index: usize) -> Result<AlgebraElement> {
    check_index(index)?;
    Ok(basis()[index - 1])
}

/// `Tr[λᵢ λⱼ]`, which is `2δᵢⱼ`.
pub fn pairing(i: usize, j: usize) -> Result<f64> {
    let a = gell_mann(i)?;
    let b = gell_mann(j)?;
    Ok((a.matrix * b.matrix).trace().re)
}

pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> Mat4 {
    a.matrix * b.matrix - b.matrix * a.matrix
}

/// Totally antisymmetric `f_ijk` with `[λᵢ, λⱼ] = 2i Σₖ f_ijk λₖ`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    table: Box<[f64]>,
}

impl StructureConstants {
    const RESIDUE_TOLERANCE: f64 = 1e-12;

    /// Evaluates `f_ijk = (1/4i) Tr[[λᵢ, λⱼ] λₖ]` for every index triple.
    pub fn compute() -> Result<Self> {
        let g = basis();
        let mut table = vec![0.0; DIM * DIM * DIM].into_boxed_slice();
        for i in 0..DIM {
            for j in 0..DIM {
                let comm = commutator(&g[i], &g[j]);
                for k in 0..DIM {
                    let f = (comm * g[k].matrix).trace() / (4.0 * I);
                    if f.im.abs() > Self::RESIDUE_TOLERANCE {
                        return Err(Error::consistency(format!(
                            "f({},{},{}) has imaginary residue {:e}",
                            i + 1,
                            j + 1,
                            k + 1,
                            f.im
                        )));
                    }
                    // squash roundoff so that table zeros are exact
                    let re = if f.re.abs() < 1e-15 { 0.0 } else { f.re };
                    table[(i * DIM + j) * DIM + k] = re;
                }
            }
        }
        Ok(Self { table })
    }

    /// Lookup with 1-based indices. Panics on out-of-range indices.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.table[((i - 1) * DIM + (j - 1)) * DIM + (k - 1)]
    }

    /// Nonzero constants with `i < j < k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        (1..=DIM).flat_map(move |i| {
            (i + 1..=DIM).flat_map(move |j| {
                (j + 1..=DIM).filter_map(move |k| {
                    let f = self.get(i, j, k);
                    (f != 0.0).then_some((i, j, k, f))
                })
            })
        })
    }

    /// `[λᵢ, λⱼ]` rebuilt as `2i Σₖ f_ijk λₖ`.
    pub fn reconstruct_commutator(&self, i: usize, j: usize) -> Mat4 {
        let g = basis();
        let mut m = Mat4::zeros();
        for k in 1..=DIM {
            let f = self.get(i, j, k);
            if f != 0.0 {
                m += g[k - 1].matrix * (2.0 * I * f);
            }
        }
        m
    }

    /// Indices k with `f_ijk ≠ 0`, i.e. the generators `[λᵢ, λⱼ]` expands onto.
    pub fn support(&self, i: usize, j: usize) -> Vec<usize> {
        (1..=DIM).filter(|&k| self.get(i, j, k) != 0.0).collect()
    }
}

static STRUCTURE: OnceLock<Result<StructureConstants>> = OnceLock::new();

/// Shared, lazily computed structure-constant table.
pub fn structure_constants() -> Result<&'static StructureConstants> {
    STRUCTURE
        .get_or_init(StructureConstants::compute)
        .as_ref()
        .map_err(Clone::clone)
}

pub fn structure_constant(i: usize, j: usize, k: usize) -> Result<f64> {
    check_index(i)?;
    check_index(j)?;
    check_index(k)?;
    Ok(structure_constants()?.get(i, j, k))
}

/// `exp(i·λ_index·angle)` in closed form.
pub fn exp_generator(index: usize, angle: f64) -> Result<Mat4> {
    check_index(index)?;
    if !angle.is_finite() {
        return Err(Error::argument(format!(
            "angle must be finite (got {angle})"
        )));
    }
    Ok(exp_i(index, angle))
}

/// Unchecked closed-form exponential for the hot paths.
pub(crate) fn exp_i(index: usize, angle: f64) -> Mat4 {
    let mut m = Mat4::identity();
    match shape(index) {
        Shape::Diagonal(d) => {
            for (k, v) in d.iter().enumerate() {
                m[(k, k)] = Complex64::cis(v * angle);
            }
        }
        Shape::Symmetric(a, b) => {
            let (s, co) = angle.sin_cos();
            m[(a, a)] = c(co);
            m[(b, b)] = c(co);
            m[(a, b)] = Complex64::new(0.0, s);
            m[(b, a)] = Complex64::new(0.0, s);
        }
        Shape::Antisymmetric(a, b) => {
            let (s, co) = angle.sin_cos();
            m[(a, a)] = c(co);
            m[(b, b)] = c(co);
            m[(a, b)] = c(s);
            m[(b, a)] = c(-s);
        }
    }
    m
}

/// `exp(i·λᵀ·angle)`: antisymmetric generators flip sign under transposition.
pub(crate) fn exp_i_transposed(index: usize, angle: f64) -> Mat4 {
    match shape(index) {
        Shape::Antisymmetric(..) => exp_i(index, -angle),
        _ => exp_i(index, angle),
    }
}

/// Whether λ_index is in the K subset {λ₁..λ₈, λ₁₅} or the P subset {λ₉..λ₁₄}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    K,
    P,
}

pub fn subspace(index: usize) -> Subspace {
    if (9..=14).contains(&index) {
        Subspace::P
    } else {
        Subspace::K
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosurePair {
    pub i: usize,
    pub j: usize,
    pub expected: Subspace,
    /// Generators the commutator expands onto.
    pub support: Vec<usize>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CartanReport {
    pub pairs: Vec<ClosurePair>,
}

impl CartanReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClosurePair> {
        self.pairs.iter().filter(|p| !p.pass)
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&ClosurePair> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

/// Checks `[K,K] ⊆ K`, `[P,P] ⊆ K` and `[K,P] ⊆ P` pair by pair.
pub fn cartan_closure_check() -> Result<CartanReport> {
    let f = structure_constants()?;
    let mut pairs = Vec::with_capacity(DIM * (DIM - 1) / 2);
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let expected = if subspace(i) == subspace(j) {
                Subspace::K
            } else {
                Subspace::P
            };
            let support = f.support(i, j);
            let pass = support.iter().all(|&k| subspace(k) == expected);
            pairs.push(ClosurePair {
                i,
                j,
                expected,
                support,
                pass,
            });
        }
    }
    Ok(CartanReport { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use std::f64::consts::PI;

    /// Taylor series with scaling and squaring; independent of the closed forms.
    fn expm_series(a: &Mat4) -> Mat4 {
        let norm = max_abs(a) * 4.0;
        let mut squarings = 0;
        let mut scale = 1.0;
        while norm * scale > 0.5 {
            scale *= 0.5;
            squarings += 1;
        }
        let x = a * c(scale);
        let mut term = Mat4::identity();
        let mut sum = Mat4::identity();
        for n in 1..40 {
            term = term * x * c(1.0 / n as f64);
            sum += term;
            if max_abs(&term) < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn generators_match_printed_matrices() {
        let l1 = gell_mann(1).unwrap();
        let mut expected = Mat4::zeros();
        expected[(0, 1)] = c(1.0);
        expected[(1, 0)] = c(1.0);
        assert_eq!(*l1.matrix(), expected);

        let l15 = gell_mann(15).unwrap();
        let d = 1.0 / 6f64.sqrt();
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(c(d), c(d), c(d), c(-3.0 * d)));
        assert!(max_abs(&(l15.matrix() - expected)) < 1e-16);
    }

    #[test]
    fn generators_are_hermitian_and_traceless() {
        for k in 1..=DIM {
            let g = gell_mann(k).unwrap();
            assert_eq!(hermiticity_error(g.matrix()), 0.0);
            assert!(g.matrix().trace().norm() < 1e-15, "λ{k}");
        }
    }

    #[test]
    fn index_out_of_range() {
        assert!(gell_mann(0).is_err());
        let err = gell_mann(16).unwrap_err();
        assert!(err.to_string().contains("index out of range 1..15"));
        assert!(exp_generator(16, 0.1).is_err());
        assert!(structure_constant(1, 2, 16).is_err());
    }

    #[test]
    fn pairing_is_twice_kronecker() {
        assert_eq!(pairing(3, 3).unwrap(), 2.0);
        assert_eq!(pairing(3, 8).unwrap(), 0.0);
        for i in 1..=DIM {
            for j in 1..=DIM {
                let expected = if i == j { 2.0 } else { 0.0 };
                assert!((pairing(i, j).unwrap() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let l = |k| gell_mann(k).unwrap();
        let got = commutator(&l(1), &l(2));
        assert!(max_abs(&(got - l(3).matrix() * (2.0 * I))) < 1e-15);

        let got = commutator(&l(9), &l(10));
        let expected = AlgebraElement::from_components(&[
            (3, 1.0),
            (8, 1.0 / SQRT3),
            (15, 2.0 * (2.0f64 / 3.0).sqrt()),
        ])
        .unwrap();
        assert!(max_abs(&(got - expected.matrix() * I)) < 1e-15);

        assert_eq!(commutator(&l(7), &l(7)), Mat4::zeros());
    }

    #[test]
    fn structure_constant_examples() {
        assert!((structure_constant(1, 2, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!((structure_constant(1, 9, 12).unwrap() - 0.5).abs() < 1e-15);
        for i in 1..=DIM {
            for k in 1..=DIM {
                assert_eq!(structure_constant(i, i, k).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn structure_constants_are_totally_antisymmetric() {
        let f = structure_constants().unwrap();
        for i in 1..=DIM {
            for j in 1..=DIM {
                for k in 1..=DIM {
                    let v = f.get(i, j, k);
                    assert!((v + f.get(j, i, k)).abs() < 1e-15);
                    assert!((v + f.get(i, k, j)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn reconstruction_matches_direct_commutator() {
        let f = structure_constants().unwrap();
        let g = basis();
        for i in 1..=DIM {
            for j in 1..=DIM {
                let direct = commutator(&g[i - 1], &g[j - 1]);
                let rebuilt = f.reconstruct_commutator(i, j);
                assert!(max_abs(&(direct - rebuilt)) <= 1e-13, "[λ{i}, λ{j}]");
            }
        }
    }

    #[test]
    fn closed_form_exponentials_match_series() {
        for k in 1..=DIM {
            for &angle in &[0.0, 0.3, -1.1, PI / 2.0, 2.7, 7.5] {
                let closed = exp_generator(k, angle).unwrap();
                let series = expm_series(&(gell_mann(k).unwrap().matrix() * (I * angle)));
                assert!(
                    max_abs(&(closed - series)) < 1e-13,
                    "λ{k} at {angle}: {:e}",
                    max_abs(&(closed - series))
                );
                assert!(crate::linalg::unitarity_error(&closed) <= 1e-14);
                assert!((closed.determinant() - c(1.0)).norm() <= 1e-13);
            }
        }
    }

    #[test]
    fn exponential_examples() {
        assert_eq!(exp_generator(3, 0.0).unwrap(), Mat4::identity());

        let nu = 0.37;
        let got = exp_generator(2, nu).unwrap();
        let mut expected = Mat4::identity();
        expected[(0, 0)] = c(nu.cos());
        expected[(0, 1)] = c(nu.sin());
        expected[(1, 0)] = c(-nu.sin());
        expected[(1, 1)] = c(nu.cos());
        assert_eq!(got, expected);

        let got = exp_generator(3, PI).unwrap();
        let expected =
            Mat4::from_diagonal(&nalgebra::Vector4::new(c(-1.0), c(-1.0), c(1.0), c(1.0)));
        assert!(max_abs(&(got - expected)) < 1e-15);

        assert!(exp_generator(2, f64::NAN).is_err());
        assert!(exp_generator(2, f64::INFINITY).is_err());
    }

    #[test]
    fn transposed_exponential_is_transpose() {
        for k in 1..=DIM {
            let a = exp_i(k, 0.81).transpose();
            let b = exp_i_transposed(k, 0.81);
            assert!(max_abs(&(a - b)) < 1e-16);
        }
    }

    #[test]
    fn generator_classes() {
        let diag: Vec<_> = (1..=DIM)
            .filter(|&k| generator_class(k).unwrap().kind == GeneratorKind::Diagonal)
            .collect();
        assert_eq!(diag, vec![3, 8, 15]);
        assert_eq!(generator_class(10).unwrap().support, &[0, 3]);
        assert_eq!(generator_class(8).unwrap().support, &[0, 1, 2]);
    }

    #[test]
    fn cartan_split_closes() {
        let report = cartan_closure_check().unwrap();
        assert_eq!(report.pairs.len(), 105);
        assert!(report.passed());
        assert_eq!(report.pair(4, 5).unwrap().support, vec![3, 8]);
        assert_eq!(report.pair(13, 14).unwrap().support, vec![8, 15]);
        assert_eq!(report.pair(8, 10).unwrap().support, vec![9]);
        assert_eq!(report.pair(8, 10).unwrap().expected, Subspace::P);
    }

    #[test]
    fn components_round_trip() {
        let a = AlgebraElement::from_components(&[(2, 0.5), (11, -1.25), (15, 3.0)]).unwrap();
        let comps = a.components();
        assert!((comps[1] - 0.5).abs() < 1e-15);
        assert!((comps[10] + 1.25).abs() < 1e-15);
        assert!((comps[14] - 3.0).abs() < 1e-15);
        assert!(AlgebraElement::new(*a.matrix()).is_ok());
        assert!(AlgebraElement::new(Mat4::identity()).is_err());
    }
}
