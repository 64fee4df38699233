//! The symplectic form, Sp(4,ℝ), the affine symplectic group and its Lie algebra.
//!
//! Group elements are pairs `(a, A)` acting by `x ↦ A x + a`. Their 5×5 matrix
//! form is `[[1, 0], [a, A]]` with the translation in the first column.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Mat4, Mat5, Vec4, Vector};
use crate::scalar::{Field, Real};

/// Default tolerance for group membership.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The standard symplectic matrix `[[0, I], [−I, 0]]`.
pub fn j_matrix<T: Field>() -> Mat4<T> {
    let mut j = Mat4::zeros();
    j.0[0][2] = T::one();
    j.0[1][3] = T::one();
    j.0[2][0] = -T::one();
    j.0[3][1] = -T::one();
    j
}

/// `Λ(x, y) = xᵀ J y`.
#[inline]
pub fn lambda<T: Field>(x: &Vec4<T>, y: &Vec4<T>) -> T {
    x.0[0] * y.0[2] + x.0[1] * y.0[3] - x.0[2] * y.0[0] - x.0[3] * y.0[1]
}

/// Max-norm of `AᵀJA − J`, measured on leading parts.
pub fn symplectic_defect<T: Field>(a: &Mat4<T>) -> f64 {
    let j = j_matrix::<T>();
    (a.transpose() * j * *a - j).norm_max_lead()
}

pub fn is_symplectic<T: Field>(a: &Mat4<T>, tol: f64) -> bool {
    symplectic_defect(a) <= tol
}

/// Max-norm of `MᵀJ + JM`, zero exactly on 𝔰𝔭(4,ℝ).
pub fn algebra_defect<T: Field>(m: &Mat4<T>) -> f64 {
    let j = j_matrix::<T>();
    (m.transpose() * j + j * *m).norm_max_lead()
}

/// An affine symplectic transformation. Also used as a moving frame, where
/// the translation is the origin and the columns of the linear part are the
/// frame vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement<T> {
    pub translation: Vec4<T>,
    pub linear: Mat4<T>,
}

/// A point `p` with a symplectic basis `E₁..E₄`.
pub type MovingFrame<T> = GroupElement<T>;

impl<T: Field> GroupElement<T> {
    pub fn identity() -> Self {
        GroupElement { translation: Vector::zeros(), linear: Mat4::identity() }
    }

    pub fn pure_translation(a: Vec4<T>) -> Self {
        GroupElement { translation: a, linear: Mat4::identity() }
    }

    /// Assemble without checking membership. Used where the parts are
    /// symplectic by construction, or when the scalar is a series type.
    pub fn from_parts_unchecked(translation: Vec4<T>, linear: Mat4<T>) -> Self {
        GroupElement { translation, linear }
    }

    pub fn from_frame_unchecked(origin: Vec4<T>, basis: &[Vec4<T>; 4]) -> Self {
        GroupElement { translation: origin, linear: Mat4::from_columns(basis) }
    }

    pub fn origin(&self) -> Vec4<T> {
        self.translation
    }

    /// Frame vector `E_i`, 1-based as in the geometry.
    pub fn e(&self, i: usize) -> Vec4<T> {
        self.linear.column(i - 1)
    }

    pub fn act(&self, x: &Vec4<T>) -> Vec4<T> {
        self.linear.mul_vec(x) + self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        GroupElement {
            translation: self.linear.mul_vec(&other.translation) + self.translation,
            linear: self.linear * other.linear,
        }
    }

    /// Inverse using `A⁻¹ = −J Aᵀ J`, valid for symplectic `A`.
    pub fn inverse(&self) -> Self {
        let j = j_matrix::<T>();
        let ainv = -(j * self.linear.transpose() * j);
        GroupElement { translation: -ainv.mul_vec(&self.translation), linear: ainv }
    }

    pub fn to_matrix5(&self) -> Mat5<T> {
        let mut m = Mat5::zeros();
        m.0[0][0] = T::one();
        for i in 0..4 {
            m.0[i + 1][0] = self.translation.0[i];
            for j in 0..4 {
                m.0[i + 1][j + 1] = self.linear.0[i][j];
            }
        }
        m
    }

    pub fn defect(&self) -> f64 {
        symplectic_defect(&self.linear)
    }

    pub fn map<S: Field>(&self, f: impl Fn(T) -> S + Copy) -> GroupElement<S> {
        GroupElement { translation: self.translation.map(f), linear: self.linear.map(f) }
    }
}

impl<T: Real> GroupElement<T> {
    pub fn new(translation: Vec4<T>, linear: Mat4<T>) -> Result<Self> {
        Self::new_with_tol(translation, linear, SYMPLECTIC_TOL)
    }

    /// Rejects non-finite entries and linear parts off Sp(4,ℝ) by more than `tol`.
    pub fn new_with_tol(translation: Vec4<T>, linear: Mat4<T>, tol: f64) -> Result<Self> {
        if !translation.is_finite() || !linear.is_finite() {
            return Err(Error::InvalidInput("non-finite group element".into()));
        }
        let defect = symplectic_defect(&linear);
        if defect > tol {
            return Err(Error::NotSymplectic { defect });
        }
        Ok(GroupElement { translation, linear })
    }

    pub fn from_matrix5(m: &Mat5<T>) -> Result<Self> {
        let mut top = (m.0[0][0] - T::one()).abs();
        for j in 1..5 {
            top = top.max(m.0[0][j].abs());
        }
        if top.to_f64_lossless() > SYMPLECTIC_TOL {
            return Err(Error::InvalidInput("first row must be (1, 0, 0, 0, 0)".into()));
        }
        let mut a = Vector::zeros();
        let mut lin = Mat4::zeros();
        for i in 0..4 {
            a.0[i] = m.0[i + 1][0];
            for j in 0..4 {
                lin.0[i][j] = m.0[i + 1][j + 1];
            }
        }
        Self::new(a, lin)
    }

    /// Max-norm distance between two elements in 5×5 form.
    pub fn distance(&self, other: &Self) -> T {
        (self.to_matrix5() - other.to_matrix5()).norm_max()
    }
}

/// Names of the Lie algebra basis, in coefficient order.
pub const BASIS_NAMES: [&str; 14] = [
    "T1", "T2", "T3", "T4", "A11", "A22", "A12", "A21", "B11", "B22", "B12", "C11", "C22", "C12",
];

/// Element of 𝔰(4,ℝ) = ℝ⁴ ⋊ 𝔰𝔭(4,ℝ) as coefficients on [`BASIS_NAMES`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraElement<T> {
    pub coeffs: [T; 14],
}

/// The basis matrix with the given index (see [`BASIS_NAMES`]).
pub fn basis_matrix<T: Field>(index: usize) -> Mat5<T> {
    let one = T::one();
    let mut m = Mat5::zeros();
    // (row, col) in 5×5 form; the 4×4 block sits at offset 1.
    let mut set = |i: usize, j: usize, v: T| m.0[i][j] = v;
    match index {
        0..=3 => set(index + 1, 0, one),
        4 => {
            set(1, 1, one);
            set(3, 3, -one);
        }
        5 => {
            set(2, 2, one);
            set(4, 4, -one);
        }
        6 => {
            set(1, 2, one);
            set(4, 3, -one);
        }
        7 => {
            set(2, 1, one);
            set(3, 4, -one);
        }
        8 => set(1, 3, one),
        9 => set(2, 4, one),
        10 => {
            set(1, 4, one);
            set(2, 3, one);
        }
        11 => set(3, 1, one),
        12 => set(4, 2, one),
        13 => {
            set(3, 2, one);
            set(4, 1, one);
        }
        _ => panic!("basis index out of range"),
    }
    m
}

impl<T: Field> AlgebraElement<T> {
    pub fn zero() -> Self {
        AlgebraElement { coeffs: [T::zero(); 14] }
    }

    pub fn basis(index: usize) -> Self {
        let mut e = Self::zero();
        e.coeffs[index] = T::one();
        e
    }

    pub fn by_name(name: &str) -> Option<Self> {
        BASIS_NAMES.iter().position(|n| *n == name).map(Self::basis)
    }

    pub fn to_matrix5(&self) -> Mat5<T> {
        let mut m = Mat5::zeros();
        for (i, c) in self.coeffs.iter().enumerate() {
            m = m + basis_matrix::<T>(i).scale(*c);
        }
        m
    }

    /// Read coefficients off a 5×5 matrix without checking membership.
    pub fn coefficients_of(m: &Mat5<T>) -> Self {
        let b = |i: usize, j: usize| m.0[i + 1][j + 1];
        let mut c = [T::zero(); 14];
        for (a, slot) in c.iter_mut().take(4).enumerate() {
            *slot = m.0[a + 1][0];
        }
        c[4] = b(0, 0);
        c[5] = b(1, 1);
        c[6] = b(0, 1);
        c[7] = b(1, 0);
        c[8] = b(0, 2);
        c[9] = b(1, 3);
        c[10] = b(0, 3);
        c[11] = b(2, 0);
        c[12] = b(3, 1);
        c[13] = b(2, 1);
        AlgebraElement { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..14 {
            out.coeffs[i] = self.coeffs[i] + other.coeffs[i];
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c = *c * s;
        }
        out
    }
}

impl<T: Real> AlgebraElement<T> {
    /// Decompose a 5×5 matrix; fails unless it lies in the algebra to 1e−12 (relative).
    pub fn from_matrix5(m: &Mat5<T>) -> Result<Self> {
        let e = Self::coefficients_of(m);
        let back = e.to_matrix5();
        let scale = m.norm_max_lead().max(1.0);
        let defect = (back - *m).norm_max_lead();
        if defect > 1e-12 * scale {
            return Err(Error::InvalidInput(format!(
                "matrix is not in the affine symplectic algebra (defect {defect:.3e})"
            )));
        }
        Ok(e)
    }

    /// Group element `exp(t·self)`.
    pub fn exp(&self, t: T) -> GroupElement<T> {
        expm_group(&self.to_matrix5(), t)
    }
}

/// `exp(t·m)` for a 5×5 matrix by scaling and squaring with a Taylor series.
pub fn expm<T: Real>(m: &Mat5<T>, t: T) -> Mat5<T> {
    let a = m.scale(t);
    let norm = a.norm1_lead();
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = a.scale(T::from_f64(0.5f64.powi(squarings as i32)));
    let mut sum = Mat5::identity();
    let mut term = Mat5::identity();
    for k in 1..=30usize {
        term = (term * scaled).scale(T::one() / T::from_usize(k));
        sum = sum + term;
        if k >= 13 && term.norm_max_lead() <= f64::EPSILON * 1e-3 * sum.norm_max_lead() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// `exp(t·m)` for `m` in the algebra, as a group element.
pub fn expm_group<T: Real>(m: &Mat5<T>, t: T) -> GroupElement<T> {
    let e = expm(m, t);
    let mut a = Vector::zeros();
    let mut lin = Mat4::zeros();
    for i in 0..4 {
        a.0[i] = e.0[i + 1][0];
        for j in 0..4 {
            lin.0[i][j] = e.0[i + 1][j + 1];
        }
    }
    GroupElement::from_parts_unchecked(a, lin)
}

/// Embed a 4×4 matrix as the linear block of a 5×5 algebra matrix.
pub fn embed_linear<T: Field>(m: &Mat4<T>, translation: &Vec4<T>) -> Mat5<T> {
    let mut out = Mat::zeros();
    for i in 0..4 {
        out.0[i + 1][0] = translation.0[i];
        for j in 0..4 {
            out.0[i + 1][j + 1] = m.0[i][j];
        }
    }
    out
}
