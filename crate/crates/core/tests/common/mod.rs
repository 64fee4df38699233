//! Independent reference computations shared by the integration suites.
#![allow(dead_code)]

use lagframe::linalg::Mat;
use lagframe::Mat5;

/// Matrix exponential by Taylor series with scaling and squaring, written
/// without reference to the library routine.
pub fn taylor_expm(m: &Mat5, t: f64) -> Mat5 {
    let a = m.scale(t);
    let norm = a.norm_max() * 5.0;
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = a.scale(scale);
    let mut term = Mat::identity();
    let mut sum = Mat::identity();
    for k in 1..=30 {
        term = (term * a).scale(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn c1(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t - 2.0 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h)
}

fn c2(f: &impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (-f(t - 2.0 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2.0 * h)) / (12.0 * h * h)
}

/// First derivative: fourth-order central differences at `h` and `h/2`,
/// Richardson-extrapolated to sixth order.
pub fn d1(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (16.0 * c1(&f, t, h / 2.0) - c1(&f, t, h)) / 15.0
}

/// Second derivative, extrapolated as in [`d1`].
pub fn d2(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (16.0 * c2(&f, t, h / 2.0) - c2(&f, t, h)) / 15.0
}

/// `|a − b| / max(1, |a|, |b|)`.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Symplectic form written out coordinate by coordinate.
pub fn lambda_ref(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    x[0] * y[2] - x[2] * y[0] + x[1] * y[3] - x[3] * y[1]
}
