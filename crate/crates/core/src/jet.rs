//! Truncated Taylor series with a fixed inline capacity.
//!
//! A `Jet` holds the normalized coefficients `c_k = f^(k)(t0) / k!` for
//! `k < len`. Arithmetic truncates to the shorter operand, so constants are
//! created at full capacity and never limit the result.

use crate::scalar::{Elementary, Field, Real};
use num_traits::{One, Zero};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Maximum number of coefficients a jet can carry.
pub const JET_CAPACITY: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<T> {
    c: [T; JET_CAPACITY],
    len: usize,
}

impl<T: Real> Jet<T> {
    /// The identity function `t ↦ t` expanded at `t0`, with `len` coefficients.
    pub fn variable(t0: T, len: usize) -> Self {
        assert!((1..=JET_CAPACITY).contains(&len), "jet length out of range");
        let mut c = [T::zero(); JET_CAPACITY];
        c[0] = t0;
        if len > 1 {
            c[1] = T::one();
        }
        Jet { c, len }
    }

    pub fn constant(x: T) -> Self {
        let mut c = [T::zero(); JET_CAPACITY];
        c[0] = x;
        Jet { c, len: JET_CAPACITY }
    }

    /// Build from normalized Taylor coefficients.
    pub fn from_coeffs(coeffs: &[T]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= JET_CAPACITY);
        let mut c = [T::zero(); JET_CAPACITY];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet { c, len: coeffs.len() }
    }

    /// Build from derivative values `f^(k)(t0)`.
    pub fn from_derivatives(d: &[T]) -> Self {
        let mut out = Self::from_coeffs(d);
        let mut fact = T::one();
        for k in 1..d.len() {
            fact = fact * T::from_usize(k);
            out.c[k] = out.c[k] / fact;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    pub fn coeff(&self, k: usize) -> T {
        if k < self.len {
            self.c[k]
        } else {
            T::zero()
        }
    }

    /// `f^(k)(t0)`; zero beyond the stored length.
    pub fn derivative(&self, k: usize) -> T {
        let mut fact = T::one();
        for i in 2..=k {
            fact = fact * T::from_usize(i);
        }
        self.coeff(k) * fact
    }

    /// The series of `f'`, one coefficient shorter.
    pub fn differentiate(&self) -> Self {
        let len = self.len.saturating_sub(1).max(1);
        let mut c = [T::zero(); JET_CAPACITY];
        for k in 0..self.len.saturating_sub(1) {
            c[k] = self.c[k + 1] * T::from_usize(k + 1);
        }
        Jet { c, len }
    }

    /// Keep only the first `len` coefficients.
    pub fn truncate(&self, len: usize) -> Self {
        let mut out = *self;
        out.len = len.clamp(1, self.len);
        for k in out.len..JET_CAPACITY {
            out.c[k] = T::zero();
        }
        out
    }

    fn with_len(len: usize) -> Self {
        Jet { c: [T::zero(); JET_CAPACITY], len }
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let n = self.len;
        let mut s = Self::with_len(n);
        let mut co = Self::with_len(n);
        s.c[0] = self.c[0].sin();
        co.c[0] = self.c[0].cos();
        for k in 1..n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for j in 1..=k {
                let ja = T::from_usize(j) * self.c[j];
                ss = ss + ja * co.c[k - j];
                cc = cc + ja * s.c[k - j];
            }
            let kk = T::from_usize(k);
            s.c[k] = ss / kk;
            co.c[k] = -cc / kk;
        }
        (s, co)
    }

    pub fn sinh_cosh(self) -> (Self, Self) {
        let n = self.len;
        let mut s = Self::with_len(n);
        let mut co = Self::with_len(n);
        s.c[0] = self.c[0].sinh();
        co.c[0] = self.c[0].cosh();
        for k in 1..n {
            let mut ss = T::zero();
            let mut cc = T::zero();
            for j in 1..=k {
                let ja = T::from_usize(j) * self.c[j];
                ss = ss + ja * co.c[k - j];
                cc = cc + ja * s.c[k - j];
            }
            let kk = T::from_usize(k);
            s.c[k] = ss / kk;
            co.c[k] = cc / kk;
        }
        (s, co)
    }
}

impl<T: Real> Zero for Jet<T> {
    fn zero() -> Self {
        Self::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.c[..self.len].iter().all(|x| x.is_zero())
    }
}

impl<T: Real> One for Jet<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.len.min(rhs.len);
        let mut out = Self::with_len(n);
        for k in 0..n {
            out.c[k] = self.c[k] + rhs.c[k];
        }
        out
    }
}

impl<T: Real> Sub for Jet<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.len.min(rhs.len);
        let mut out = Self::with_len(n);
        for k in 0..n {
            out.c[k] = self.c[k] - rhs.c[k];
        }
        out
    }
}

impl<T: Real> Neg for Jet<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = self;
        for k in 0..self.len {
            out.c[k] = -self.c[k];
        }
        out
    }
}

impl<T: Real> Mul for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let n = self.len.min(rhs.len);
        let mut out = Self::with_len(n);
        for k in 0..n {
            let mut acc = T::zero();
            for i in 0..=k {
                acc = acc + self.c[i] * rhs.c[k - i];
            }
            out.c[k] = acc;
        }
        out
    }
}

impl<T: Real> Div for Jet<T> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let n = self.len.min(rhs.len);
        let mut out = Self::with_len(n);
        let b0 = rhs.c[0];
        for k in 0..n {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc = acc - rhs.c[i] * out.c[k - i];
            }
            out.c[k] = acc / b0;
        }
        out
    }
}

impl<T: Real> Mul<T> for Jet<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        let mut out = self;
        for k in 0..self.len {
            out.c[k] = self.c[k] * rhs;
        }
        out
    }
}

impl<T: Real> Add<T> for Jet<T> {
    type Output = Self;
    fn add(self, rhs: T) -> Self {
        let mut out = self;
        out.c[0] = self.c[0] + rhs;
        out
    }
}

impl<T: Real> Sub<T> for Jet<T> {
    type Output = Self;
    fn sub(self, rhs: T) -> Self {
        let mut out = self;
        out.c[0] = self.c[0] - rhs;
        out
    }
}

impl<T: Real> AddAssign for Jet<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> SubAssign for Jet<T> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<T: Real> MulAssign for Jet<T> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<T: Real> Field for Jet<T> {
    fn from_f64(x: f64) -> Self {
        Self::constant(T::from_f64(x))
    }
    fn lead(&self) -> f64 {
        self.c[0].lead()
    }
}

impl<T: Real> Elementary for Jet<T> {
    fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    fn exp(self) -> Self {
        let n = self.len;
        let mut e = Self::with_len(n);
        e.c[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + T::from_usize(j) * self.c[j] * e.c[k - j];
            }
            e.c[k] = acc / T::from_usize(k);
        }
        e
    }

    fn ln(self) -> Self {
        let n = self.len;
        let mut l = Self::with_len(n);
        let a0 = self.c[0];
        l.c[0] = a0.ln();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..k {
                acc = acc + T::from_usize(j) * l.c[j] * self.c[k - j];
            }
            l.c[k] = (self.c[k] - acc / T::from_usize(k)) / a0;
        }
        l
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn sinh(self) -> Self {
        self.sinh_cosh().0
    }

    fn cosh(self) -> Self {
        self.sinh_cosh().1
    }

    /// Power with a real exponent; requires a nonzero constant term.
    fn powf(self, e: f64) -> Self {
        let n = self.len;
        let r = T::from_f64(e);
        let a0 = self.c[0];
        let mut p = Self::with_len(n);
        p.c[0] = a0.powf(e);
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                let w = r * T::from_usize(j) - T::from_usize(k - j);
                acc = acc + w * self.c[j] * p.c[k - j];
            }
            p.c[k] = acc / (T::from_usize(k) * a0);
        }
        p
    }

    fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut m = n.unsigned_abs();
        let mut acc = Self::one();
        while m > 0 {
            if m & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            m >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc.truncate(self.len)
        }
    }
}
