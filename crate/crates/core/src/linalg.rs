//! Small fixed-size vectors and square matrices.

use crate::scalar::{Field, Real};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector<T, const N: usize>(pub [T; N]);

pub type Vec2<T> = Vector<T, 2>;
pub type Vec4<T> = Vector<T, 4>;

impl<T: Field, const N: usize> Vector<T, N> {
    pub fn zeros() -> Self {
        Vector([T::zero(); N])
    }

    /// Standard basis vector, 0-based.
    pub fn unit(i: usize) -> Self {
        let mut v = Self::zeros();
        v.0[i] = T::one();
        v
    }

    pub fn dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..N {
            acc = acc + self.0[i] * other.0[i];
        }
        acc
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for x in out.0.iter_mut() {
            *x = *x * s;
        }
        out
    }

    pub fn map<S: Field>(&self, f: impl Fn(T) -> S) -> Vector<S, N> {
        let mut out = [S::zero(); N];
        for i in 0..N {
            out[i] = f(self.0[i]);
        }
        Vector(out)
    }

    /// Largest absolute component, measured on the leading part.
    pub fn norm_max_lead(&self) -> f64 {
        self.0.iter().map(|x| x.lead().abs()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the leading part.
    pub fn norm_lead(&self) -> f64 {
        self.0.iter().map(|x| x.lead() * x.lead()).sum::<f64>().sqrt()
    }
}

impl<T: Real, const N: usize> Vector<T, N> {
    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn norm_max(&self) -> T {
        self.0.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl<T, const N: usize> Index<usize> for Vector<T, N> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T, const N: usize> IndexMut<usize> for Vector<T, N> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Field, const N: usize> Add for Vector<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] = self.0[i] + rhs.0[i];
        }
        out
    }
}

impl<T: Field, const N: usize> Sub for Vector<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] = self.0[i] - rhs.0[i];
        }
        out
    }
}

impl<T: Field, const N: usize> Neg for Vector<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Serialize, const N: usize> Serialize for Vector<T, N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(N))?;
        for x in &self.0 {
            seq.serialize_element(x)?;
        }
        seq.end()
    }
}

impl<'de, T: Deserialize<'de> + Copy + Default, const N: usize> Deserialize<'de> for Vector<T, N> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<T> = Vec::deserialize(d)?;
        if v.len() != N {
            return Err(serde::de::Error::invalid_length(v.len(), &"a fixed-length vector"));
        }
        let mut out = [T::default(); N];
        out.copy_from_slice(&v);
        Ok(Vector(out))
    }
}

/// Row-major square matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<T, const N: usize>(pub [[T; N]; N]);

pub type Mat2<T> = Mat<T, 2>;
pub type Mat4<T> = Mat<T, 4>;
pub type Mat5<T> = Mat<T, 5>;

impl<T: Field, const N: usize> Mat<T, N> {
    pub fn zeros() -> Self {
        Mat([[T::zero(); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = T::one();
        }
        m
    }

    pub fn from_columns(cols: &[Vector<T, N>; N]) -> Self {
        let mut m = Self::zeros();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..N {
                m.0[i][j] = col.0[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vector<T, N> {
        let mut v = Vector::zeros();
        for i in 0..N {
            v.0[i] = self.0[i][j];
        }
        v
    }

    pub fn set_column(&mut self, j: usize, v: &Vector<T, N>) {
        for i in 0..N {
            self.0[i][j] = v.0[i];
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * s;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vector<T, N>) -> Vector<T, N> {
        let mut out = Vector::zeros();
        for i in 0..N {
            let mut acc = T::zero();
            for j in 0..N {
                acc = acc + self.0[i][j] * v.0[j];
            }
            out.0[i] = acc;
        }
        out
    }

    pub fn map<S: Field>(&self, f: impl Fn(T) -> S) -> Mat<S, N> {
        let mut m = Mat::<S, N>::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(self.0[i][j]);
            }
        }
        m
    }

    /// Commutator `self·other − other·self`.
    pub fn bracket(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Max-norm of the leading parts.
    pub fn norm_max_lead(&self) -> f64 {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .map(|x| x.lead().abs())
            .fold(0.0, f64::max)
    }

    /// Induced 1-norm of the leading parts.
    pub fn norm1_lead(&self) -> f64 {
        (0..N)
            .map(|j| (0..N).map(|i| self.0[i][j].lead().abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting on the leading parts.
    /// Returns `None` when a pivot's leading part is exactly zero.
    fn lu(&self) -> Option<(Self, [usize; N], bool)> {
        let mut a = *self;
        let mut perm = [0usize; N];
        for (i, p) in perm.iter_mut().enumerate() {
            *p = i;
        }
        let mut odd = false;
        for k in 0..N {
            let mut piv = k;
            let mut best = a.0[k][k].lead().abs();
            for i in k + 1..N {
                let v = a.0[i][k].lead().abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            if piv != k {
                a.0.swap(piv, k);
                perm.swap(piv, k);
                odd = !odd;
            }
            let d = a.0[k][k];
            for i in k + 1..N {
                let f = a.0[i][k] / d;
                a.0[i][k] = f;
                for j in k + 1..N {
                    a.0[i][j] = a.0[i][j] - f * a.0[k][j];
                }
            }
        }
        Some((a, perm, odd))
    }

    pub fn trace(&self) -> T {
        (0..N).fold(T::zero(), |acc, i| acc + self.0[i][i])
    }

    /// Coefficients of `det(λI − self)`, highest degree first (Faddeev–LeVerrier).
    pub fn characteristic_polynomial(&self) -> Vec<T> {
        let mut coeffs = vec![T::one()];
        let mut m = Self::zeros();
        for k in 1..=N {
            m = *self * m + Self::identity().scale(coeffs[k - 1]);
            let c = -(*self * m).trace() / T::from_f64(k as f64);
            coeffs.push(c);
        }
        coeffs
    }

    pub fn det(&self) -> T {
        match self.lu() {
            None => T::zero(),
            Some((lu, _, odd)) => {
                let mut d = T::one();
                for i in 0..N {
                    d = d * lu.0[i][i];
                }
                if odd {
                    -d
                } else {
                    d
                }
            }
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let (lu, perm, _) = self.lu()?;
        let mut inv = Self::zeros();
        for col in 0..N {
            let mut x = [T::zero(); N];
            for i in 0..N {
                x[i] = if perm[i] == col { T::one() } else { T::zero() };
            }
            for i in 0..N {
                for j in 0..i {
                    x[i] = x[i] - lu.0[i][j] * x[j];
                }
            }
            for i in (0..N).rev() {
                for j in i + 1..N {
                    x[i] = x[i] - lu.0[i][j] * x[j];
                }
                x[i] = x[i] / lu.0[i][i];
            }
            for i in 0..N {
                inv.0[i][col] = x[i];
            }
        }
        Some(inv)
    }
}

impl<T: Real, const N: usize> Mat<T, N> {
    pub fn norm_max(&self) -> T {
        self.0
            .iter()
            .flat_map(|r| r.iter())
            .fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flat_map(|r| r.iter()).all(|x| x.is_finite())
    }
}

impl<T, const N: usize> Index<(usize, usize)> for Mat<T, N> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for Mat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T: Field, const N: usize> Mul for Mat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    m.0[i][j] = m.0[i][j] + a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<T: Field, const N: usize> Add for Mat<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        m
    }
}

impl<T: Field, const N: usize> Sub for Mat<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        m
    }
}

impl<T: Field, const N: usize> Neg for Mat<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}
