//! One-dimensional quadrature.

use crate::scalar::Real;

/// Composite Simpson rule on `n` nodes (`n` odd, ≥ 3).
pub fn simpson<T: Real>(a: T, b: T, n: usize, f: impl Fn(T) -> T) -> T {
    let n = if n.is_multiple_of(2) { n + 1 } else { n.max(3) };
    let h = (b - a) / T::from_usize(n - 1);
    let mut acc = f(a) + f(b);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + T::from_f64(w) * f(a + h * T::from_usize(i));
    }
    acc * h / T::from_f64(3.0)
}

/// Composite Simpson rule on already sampled values with spacing `h`.
pub fn simpson_samples<T: Real>(values: &[T], h: T) -> T {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd number (≥ 3) of samples");
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + T::from_f64(w) * *v;
    }
    acc * h / T::from_f64(3.0)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed-order Gauss–Legendre rule on [a, b].
pub struct GaussRule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        let (x, w) = gauss_legendre(n);
        GaussRule { x, w }
    }

    pub fn integrate<T: Real>(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        let half = (b - a) / T::from_f64(2.0);
        let mid = (a + b) / T::from_f64(2.0);
        let mut acc = T::zero();
        for (xi, wi) in self.x.iter().zip(&self.w) {
            acc = acc + T::from_f64(*wi) * f(mid + half * T::from_f64(*xi));
        }
        acc * half
    }
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real>(a: T, b: T, f: &impl Fn(T) -> T) -> (T, T) {
    let half = (b - a) / T::from_f64(2.0);
    let mid = (a + b) / T::from_f64(2.0);
    let fc = f(mid);
    let mut k = fc * T::from_f64(GK_WK[7]);
    let mut g = fc * T::from_f64(GK_WG[3]);
    for i in 0..7 {
        let dx = half * T::from_f64(GK_X[i]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * T::from_f64(GK_WK[i]);
        if i % 2 == 1 {
            g = g + s * T::from_f64(GK_WG[i / 2]);
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to absolute tolerance `tol`
/// (floored at a few ulps of the integral).
pub fn adaptive<T: Real>(a: T, b: T, tol: f64, f: impl Fn(T) -> T) -> T {
    fn rec<T: Real>(a: T, b: T, tol: f64, depth: usize, f: &impl Fn(T) -> T, whole: (T, T)) -> T {
        let (v, e) = whole;
        if e.to_f64_lossless() <= tol || depth == 0 {
            return v;
        }
        let m = (a + b) / T::from_f64(2.0);
        let l = gk15(a, m, f);
        let r = gk15(m, b, f);
        rec(a, m, tol / 2.0, depth - 1, f, l) + rec(m, b, tol / 2.0, depth - 1, f, r)
    }
    let whole = gk15(a, b, &f);
    let scale = whole.0.abs().to_f64_lossless().max(1e-300);
    rec(a, b, tol.max(4.0 * f64::EPSILON * scale), 40, &f, whole)
}
