//! Closed constant-curvature curves and their torus-knot type.
//!
//! A curve with constant curvatures is closed exactly in the window
//! `κ₃ > 0`, `κ₃² > κ₄ > ¾κ₃²` (family I.2.b) with `μ/ν` rational. The length
//! is found by a brute-force period search on the closed form rather than a
//! formula.

use crate::classify::{classify, generate, CaseTag, ClassCase};
use crate::curve::{jet, Curve};
use crate::lagrangian::symplectic_length;
use crate::linalg::Vec4;
use serde::Serialize;
use std::f64::consts::PI;

/// Best rational approximation `m/n` of `x > 0` among continued-fraction
/// convergents with `n ≤ max_den` and `|x − m/n| ≤ tol`. The pair is coprime.
pub fn rational_approximation(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x.is_finite() && x > 0.0) {
        return None;
    }
    let (mut h1, mut h2) = (1u64, 0u64);
    let (mut k1, mut k2) = (0u64, 1u64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a > u32::MAX as f64 {
            return None;
        }
        let a = a as u64;
        let h = a.checked_mul(h1)?.checked_add(h2)?;
        let k = a.checked_mul(k1)?.checked_add(k2)?;
        if k > max_den {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= tol {
            return Some((h, k));
        }
        let frac = y - a as f64;
        if frac <= f64::EPSILON {
            return None;
        }
        y = 1.0 / frac;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    None
}

/// `κ₃ > 0` and `κ₃² > κ₄ > ¾κ₃²`.
pub fn in_closed_window(k3: f64, k4: f64) -> bool {
    k3 > 0.0 && k3 * k3 > k4 && k4 > 0.75 * k3 * k3
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodSearch {
    pub period: f64,
    /// max over the check grid of ‖γ(s + T) − γ(s)‖.
    pub defect: f64,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodOptions {
    /// Largest period tried.
    pub t_max: f64,
    /// Coarse scan step.
    pub step: f64,
    /// The s-window over which periodicity is measured.
    pub span: f64,
    /// Accepted periodicity defect.
    pub tol: f64,
}

fn points(c: &Curve<f64>, ss: &[f64], shift: f64) -> Vec<Vec4<f64>> {
    ss.iter().map(|&s| c.point(s + shift).expect("closed form")).collect()
}

fn defect(c: &Curve<f64>, ss: &[f64], base: &[Vec4<f64>], t: f64) -> f64 {
    ss.iter().zip(base).map(|(&s, p)| (c.point(s + t).expect("closed form") - *p).norm()).fold(0.0, f64::max)
}

/// Smallest `T > 0` with `γ(s + T) = γ(s)`, found by scanning
/// `Σ‖γ(s + T) − γ(s)‖²` for local minima and refining each by Newton's
/// method. Returns the first verified period, or the best candidate.
pub fn fundamental_period(c: &Curve<f64>, opts: &PeriodOptions) -> Option<PeriodSearch> {
    let coarse: Vec<f64> = (0..48).map(|i| opts.span * i as f64 / 48.0).collect();
    let fine: Vec<f64> = (0..256).map(|i| opts.span * i as f64 / 256.0).collect();
    let base = points(c, &coarse, 0.0);
    let base_fine = points(c, &fine, 0.0);
    let energy = |t: f64| -> f64 {
        coarse.iter().zip(&base).map(|(&s, p)| {
            let d = c.point(s + t).expect("closed form") - *p;
            d.dot(&d)
        }).sum()
    };
    let refine = |mut t: f64| -> f64 {
        for _ in 0..40 {
            let (mut g, mut dg) = (0.0, 0.0);
            for (&s, p) in coarse.iter().zip(&base) {
                let j = jet(c, s + t, 2).expect("closed form");
                let d = j.x(0) - *p;
                g += d.dot(&j.x(1));
                dg += j.x(1).dot(&j.x(1)) + d.dot(&j.x(2));
            }
            if dg <= 0.0 {
                break;
            }
            let dt = g / dg;
            t -= dt.clamp(-opts.step, opts.step);
            if dt.abs() < 1e-15 * t.abs().max(1.0) {
                break;
            }
        }
        t
    };
    let mut best: Option<PeriodSearch> = None;
    let (mut e2, mut e1) = (f64::INFINITY, energy(opts.step));
    let mut t = 2.0 * opts.step;
    while t <= opts.t_max + opts.step {
        let e0 = energy(t);
        if e1 < e2 && e1 <= e0 {
            let cand = refine(t - opts.step);
            if cand > 0.5 * opts.step {
                let d = defect(c, &fine, &base_fine, cand);
                let found = PeriodSearch { period: cand, defect: d, verified: d <= opts.tol };
                if found.verified {
                    return Some(found);
                }
                if best.is_none_or(|b| d < b.defect) {
                    best = Some(found);
                }
            }
        }
        e2 = e1;
        e1 = e0;
        t += opts.step;
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusKnotInfo {
    pub m: u64,
    pub n: u64,
    pub mu: f64,
    pub nu: f64,
    /// Symplectic length of one period.
    pub length: f64,
    /// Fundamental period found by the search.
    pub period: f64,
    /// |μ/ν − m/n|.
    pub ratio_error: f64,
    /// Periodicity defect at the reported period.
    pub period_defect: f64,
    /// Whether the period search met its tolerance.
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosednessOptions {
    pub max_denominator: u64,
    pub period_tol: f64,
}

impl Default for ClosednessOptions {
    fn default() -> Self {
        ClosednessOptions { max_denominator: 64, period_tol: 1e-9 }
    }
}

/// Torus-knot data of the constant-curvature curve, or `None` when it is not
/// closed (outside the window or μ/ν not within `tol` of a rational).
pub fn closedness(k3: f64, k4: f64, tol: f64) -> Option<TorusKnotInfo> {
    closedness_with(k3, k4, tol, &ClosednessOptions::default())
}

pub fn closedness_with(k3: f64, k4: f64, tol: f64, opts: &ClosednessOptions) -> Option<TorusKnotInfo> {
    if !in_closed_window(k3, k4) {
        return None;
    }
    let case = classify(k3, k4);
    if case.tag != CaseTag::I2b {
        return None;
    }
    let (mu, nu) = (case.mu, case.nu);
    let (m, n) = rational_approximation(mu / nu, opts.max_denominator, tol)?;
    let curve = generate(&ClassCase::new(CaseTag::I2b, mu, nu).ok()?).ok()?;
    let slow = 2.0 * PI / nu;
    let search = fundamental_period(
        &curve,
        &PeriodOptions {
            t_max: slow * (opts.max_denominator as f64 + 1.0),
            step: 2.0 * PI / (40.0 * mu),
            span: slow,
            tol: opts.period_tol,
        },
    )?;
    let length = symplectic_length(&curve, (0.0, search.period), 1e-12).ok()?;
    Some(TorusKnotInfo {
        m,
        n,
        mu,
        nu,
        length,
        period: search.period,
        ratio_error: (mu / nu - m as f64 / n as f64).abs(),
        period_defect: search.defect,
        verified: search.verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_approximation(3.0, 64, 1e-9), Some((3, 1)));
        assert_eq!(rational_approximation(1.25, 64, 1e-9), Some((5, 4)));
        assert_eq!(rational_approximation(355.0 / 113.0, 200, 1e-12), Some((355, 113)));
        assert_eq!(rational_approximation(2f64.sqrt(), 64, 1e-9), None);
        assert_eq!(rational_approximation(0.4, 64, 1e-12), Some((2, 5)));
    }

    #[test]
    fn figure_examples() {
        let a = closedness(2.5, 5.6875, 1e-9).unwrap();
        assert_eq!((a.m, a.n), (3, 1));
        assert!(a.verified);
        assert!((a.length - 4.0 * PI).abs() < 1e-8, "{}", a.length);
        let b = closedness(1.64, 2.0496, 1e-9).unwrap();
        assert_eq!((b.m, b.n), (5, 4));
        assert!((b.mu - 1.0).abs() < 1e-12 && (b.nu - 0.8).abs() < 1e-12);
        assert!((b.length - 10.0 * PI).abs() < 1e-8, "{}", b.length);
    }

    #[test]
    fn outside_window_is_open() {
        assert!(closedness(1.0, 1.0, 1e-9).is_none());
        assert!(closedness(-2.5, 5.6875, 1e-9).is_none());
        // μ/ν = √2 is irrational.
        let (m2, n2) = (2.0f64, 1.0f64);
        assert!(closedness(m2 + n2, m2 * m2 + m2 * n2 + n2 * n2, 1e-9).is_none());
    }
}
