//! Lagrangian predicates, the symplectic arc element and arc-length
//! reparametrization.
//!
//! A curve is Lagrangian when `Λ(γ′,γ″) = 0` with `γ′, γ″` independent,
//! non-degenerate when `Λ(γ″,γ‴) ≠ 0` and linearly full when
//! `det(γ′,γ″,γ‴,γ⁗) ≠ 0`. The intrinsic orientation is `Λ(γ″,γ‴) > 0`; it
//! is checked, never flipped silently (see [`reversed`]).

use crate::curve::{grid, jet, Curve, CurveJet, SampledCurve, MIN_SAMPLES};
use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec4};
use crate::quad::{adaptive, GaussRule};
use crate::scalar::Real;
use crate::symplectic::lambda;
use serde::Serialize;

/// Default number of grid points for pointwise checks.
pub const DEFAULT_GRID: usize = 101;

/// Norm of the bivector `x ∧ y`.
pub fn wedge_norm<T: Real>(x: &Vec4<T>, y: &Vec4<T>) -> T {
    let mut acc = T::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            let m = x[i] * y[j] - x[j] * y[i];
            acc = acc + m * m;
        }
    }
    acc.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LagrangianCheck {
    pub lagrangian: bool,
    /// max |Λ(γ′,γ″)| over the grid.
    pub max_residual: f64,
    /// min |γ′∧γ″| / (|γ′||γ″|) over the grid.
    pub min_rank_measure: f64,
}

/// Relative threshold below which `γ′ ∧ γ″` counts as rank deficient.
pub const RANK_TOL: f64 = 1e-10;

/// `|Λ(γ′,γ″)| ≤ tol` and `rank(γ′,γ″) = 2` on a uniform grid of the window.
pub fn is_lagrangian<T: Real>(c: &Curve<T>, window: (T, T), tol: f64) -> Result<LagrangianCheck> {
    is_lagrangian_on(c, &grid(window.0, window.1, DEFAULT_GRID), tol)
}

/// [`is_lagrangian`] on explicit parameter values.
pub fn is_lagrangian_on<T: Real>(c: &Curve<T>, ts: &[T], tol: f64) -> Result<LagrangianCheck> {
    let mut max_residual = 0.0f64;
    let mut min_rank = f64::INFINITY;
    for &t in ts {
        let j = jet(c, t, 2)?;
        let (x1, x2) = (j.x(1), j.x(2));
        max_residual = max_residual.max(lambda(&x1, &x2).abs().to_f64_lossless());
        let denom = (x1.norm() * x2.norm()).to_f64_lossless();
        let rank = if denom > 0.0 { wedge_norm(&x1, &x2).to_f64_lossless() / denom } else { 0.0 };
        min_rank = min_rank.min(rank);
    }
    Ok(LagrangianCheck {
        lagrangian: max_residual <= tol && min_rank > RANK_TOL,
        max_residual,
        min_rank_measure: min_rank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Predicates {
    pub lagrangian: bool,
    pub nondegenerate: bool,
    pub linearly_full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredicateOptions {
    pub samples: usize,
    /// Bound on |Λ(γ′,γ″)| relative to |γ′||γ″|.
    pub lagrangian_tol: f64,
    /// Relative threshold for Λ(γ″,γ‴) and det(γ′..γ⁗) to count as nonzero.
    pub degeneracy_tol: f64,
}

impl Default for PredicateOptions {
    fn default() -> Self {
        PredicateOptions { samples: DEFAULT_GRID, lagrangian_tol: 1e-8, degeneracy_tol: 1e-10 }
    }
}

fn relative<T: Real>(value: T, scale: T) -> f64 {
    let s = scale.to_f64_lossless();
    if s > 0.0 {
        value.abs().to_f64_lossless() / s
    } else {
        0.0
    }
}

/// Evaluate the three conditions at a single jet of order ≥ 4.
pub fn jet_predicates<T: Real>(j: &CurveJet<T>, opts: &PredicateOptions) -> Result<Predicates> {
    j.require(4)?;
    let x: Vec<Vec4<T>> = (1..=4).map(|i| j.x(i)).collect();
    let n: Vec<T> = x.iter().map(|v| v.norm()).collect();
    let lag_res = relative(lambda(&x[0], &x[1]), n[0] * n[1]);
    let rank = relative(wedge_norm(&x[0], &x[1]), n[0] * n[1]);
    let nondeg = relative(lambda(&x[1], &x[2]), n[1] * n[2]);
    let det = Mat4::from_columns(&[x[0], x[1], x[2], x[3]]).det();
    let full = relative(det, n[0] * n[1] * n[2] * n[3]);
    Ok(Predicates {
        lagrangian: lag_res <= opts.lagrangian_tol && rank > RANK_TOL,
        nondegenerate: nondeg > opts.degeneracy_tol,
        linearly_full: full > opts.degeneracy_tol,
    })
}

/// The three predicates, each required to hold at every grid point.
pub fn predicates<T: Real>(c: &Curve<T>, window: (T, T)) -> Result<Predicates> {
    predicates_with(c, window, &PredicateOptions::default())
}

pub fn predicates_with<T: Real>(c: &Curve<T>, window: (T, T), opts: &PredicateOptions) -> Result<Predicates> {
    let mut out = Predicates { lagrangian: true, nondegenerate: true, linearly_full: true };
    for t in grid(window.0, window.1, opts.samples) {
        let p = jet_predicates(&jet(c, t, 4)?, opts)?;
        out.lagrangian &= p.lagrangian;
        out.nondegenerate &= p.nondegenerate;
        out.linearly_full &= p.linearly_full;
    }
    Ok(out)
}

/// The symplectic arc element `σ = Λ(γ″,γ‴)^{1/5}` at `t`.
pub fn sigma<T: Real>(c: &Curve<T>, t: T) -> Result<T> {
    let j = jet(c, t, 3)?;
    let u = lambda(&j.x(2), &j.x(3));
    if !(u > T::zero()) {
        return Err(Error::OrientationViolation { t: t.to_f64_lossless() });
    }
    Ok(u.powf(0.2))
}

/// `∫ σ dt` over the window by adaptive quadrature.
pub fn symplectic_length<T: Real>(c: &Curve<T>, window: (T, T), tol: f64) -> Result<T> {
    check_orientation(c, window, 4 * DEFAULT_GRID)?;
    let failure = std::cell::RefCell::new(None);
    let v = adaptive(window.0, window.1, tol, |t| {
        sigma(c, t).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            T::zero()
        })
    });
    match failure.into_inner() {
        None => Ok(v),
        Some(e) => Err(e),
    }
}

/// Fails at the first grid point where `Λ(γ″,γ‴) ≤ 0`.
pub fn check_orientation<T: Real>(c: &Curve<T>, window: (T, T), samples: usize) -> Result<()> {
    for t in grid(window.0, window.1, samples) {
        sigma(c, t)?;
    }
    Ok(())
}

/// The curve traversed backwards, `t ↦ γ(−t)`; this flips the sign of
/// `Λ(γ″,γ‴)`.
pub fn reversed<T: Real>(c: &Curve<T>) -> Result<Curve<T>> {
    match c {
        Curve::ClosedForm(f) => {
            let f = f.clone();
            let label = format!("reversed {}", f.describe());
            Ok(Curve::from_fn(&label, move |t| f.eval(-t)))
        }
        Curve::Sampled(s) => {
            let mut points = s.points.clone();
            points.reverse();
            Ok(Curve::Sampled(SampledCurve::new(-s.t_end(), s.h, points)?.with_accuracy(s.accuracy)?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcLengthOptions {
    /// Target spacing of the output samples in arc length.
    pub spacing: f64,
    /// Absolute tolerance of the length quadrature.
    pub quad_tol: f64,
    /// Stencil accuracy attached to the output samples.
    pub accuracy: usize,
    /// Bound on |Λ(γ′,γ″)| relative to |γ′||γ″| accepted as Lagrangian.
    pub lagrangian_tol: f64,
}

impl Default for ArcLengthOptions {
    fn default() -> Self {
        ArcLengthOptions { spacing: 0.02, quad_tol: 1e-12, accuracy: 8, lagrangian_tol: 1e-8 }
    }
}

#[derive(Clone, Debug)]
pub struct ArcLength<T: Real> {
    /// Samples uniformly spaced in arc length, starting at s = 0.
    pub curve: Curve<T>,
    pub length: T,
    /// Original parameter of every output sample.
    pub params: Vec<T>,
}

/// Reparametrize a non-degenerate Lagrangian curve by symplectic arc length.
pub fn arclength_reparam<T: Real>(c: &Curve<T>, window: (T, T)) -> Result<ArcLength<T>> {
    arclength_reparam_with(c, window, &ArcLengthOptions::default())
}

pub fn arclength_reparam_with<T: Real>(c: &Curve<T>, window: (T, T), opts: &ArcLengthOptions) -> Result<ArcLength<T>> {
    let (a, b) = window;
    if !(b > a) {
        return Err(Error::InvalidParameters("empty window".into()));
    }
    let popts = PredicateOptions { lagrangian_tol: opts.lagrangian_tol, ..Default::default() };
    for t in grid(a, b, DEFAULT_GRID) {
        let j = jet(c, t, 2)?;
        let (x1, x2) = (j.x(1), j.x(2));
        let scale = x1.norm() * x2.norm();
        let res = relative(lambda(&x1, &x2), scale);
        if res > popts.lagrangian_tol || relative(wedge_norm(&x1, &x2), scale) <= RANK_TOL {
            return Err(Error::NotLagrangian { residual: res });
        }
    }
    let length = symplectic_length(c, window, opts.quad_tol)?;
    let n = ((length.to_f64_lossless() / opts.spacing).ceil() as usize + 1).max(MIN_SAMPLES);
    let ds = length / T::from_usize(n - 1);
    let rule = GaussRule::new(12);
    let mut params = Vec::with_capacity(n);
    params.push(a);
    let (mut t_prev, mut s_prev) = (a, T::zero());
    for i in 1..n - 1 {
        let target = ds * T::from_usize(i);
        let mut t = t_prev + (target - s_prev) / sigma(c, t_prev)?;
        for _ in 0..50 {
            let s = s_prev + rule.integrate(t_prev, t, |u| sigma(c, u).unwrap_or(T::zero()));
            let step = (s - target) / sigma(c, t)?;
            t = (t - step).max(t_prev).min(b);
            if step.abs().to_f64_lossless() <= 1e-15 * (1.0 + t.abs().to_f64_lossless()) {
                break;
            }
        }
        params.push(t);
        t_prev = t;
        s_prev = target;
    }
    params.push(b);
    let points = params.iter().map(|&t| c.point(t)).collect::<Result<Vec<_>>>()?;
    let sampled = SampledCurve::new(T::zero(), ds, points)?.with_accuracy(opts.accuracy)?;
    Ok(ArcLength { curve: Curve::Sampled(sampled), length, params })
}

/// max |Λ(γ″,γ‴) − 1| over the interior of a curve's jet window.
pub fn arc_length_defect<T: Real>(c: &Curve<T>, window: (T, T), samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for t in grid(window.0, window.1, samples) {
        let j = jet(c, t, 3)?;
        worst = worst.max((lambda(&j.x(2), &j.x(3)) - T::one()).abs().to_f64_lossless());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::scalar::Elementary;

    fn type_iv() -> Curve<f64> {
        Curve::from_fn("IV", |t: Jet<f64>| {
            let (r24, r12) = (24f64.sqrt(), 12f64.sqrt());
            [t * (1.0 / r24), t.powi(2) * (1.0 / r12), -t.powi(4) * (1.0 / r24), t.powi(3) * (1.0 / r12)]
        })
    }

    fn i2b() -> Curve<f64> {
        let (mu, nu) = (1.5f64, 0.5f64);
        let r = (mu * mu - nu * nu).sqrt();
        Curve::from_fn("I.2.b", move |s: Jet<f64>| {
            [
                (s * nu).sin() * (1.0 / (r * nu.powf(1.5))),
                (s * mu).cos() * (1.0 / (r * mu.powf(1.5))),
                (s * nu).cos() * (1.0 / (r * nu.powf(1.5))),
                (s * mu).sin() * (1.0 / (r * mu.powf(1.5))),
            ]
        })
    }

    #[test]
    fn lagrangian_examples() {
        assert!(is_lagrangian(&type_iv(), (-2.0, 2.0), 1e-12).unwrap().lagrangian);
        let c = Curve::from_fn("parabola", |t: Jet<f64>| [t, Jet::constant(0.0), t * t, Jet::constant(0.0)]);
        let r = is_lagrangian(&c, (-1.0, 1.0), 1e-8).unwrap();
        assert!(!r.lagrangian);
        assert!((r.max_residual - 2.0).abs() < 1e-12);
        let planar = Curve::from_fn("planar", |t: Jet<f64>| [t.cos(), t.sin(), Jet::constant(0.0), Jet::constant(0.0)]);
        assert!(is_lagrangian(&planar, (0.0, 6.0), 1e-14).unwrap().lagrangian);
        let line = Curve::from_fn("line", |t: Jet<f64>| [t, t, Jet::constant(0.0), Jet::constant(0.0)]);
        assert!(!is_lagrangian(&line, (0.0, 1.0), 1e-14).unwrap().lagrangian);
    }

    #[test]
    fn predicate_examples() {
        let p = predicates(&type_iv(), (0.5, 2.0)).unwrap();
        assert_eq!((p.lagrangian, p.nondegenerate, p.linearly_full), (true, true, true));
        let p = predicates(&i2b(), (0.0, 12.0)).unwrap();
        assert_eq!((p.lagrangian, p.nondegenerate, p.linearly_full), (true, true, true));
        let line = Curve::from_fn("line", |t: Jet<f64>| [t, t * 2.0, Jet::constant(1.0), t * -1.0]);
        let p = predicates(&line, (0.0, 1.0)).unwrap();
        assert_eq!((p.lagrangian, p.nondegenerate, p.linearly_full), (false, false, false));
    }

    #[test]
    fn arc_length_of_arc_length_curve_is_identity() {
        let r = arclength_reparam(&type_iv(), (0.0, 3.0)).unwrap();
        assert!((r.length - 3.0).abs() < 1e-12);
        for (i, t) in r.params.iter().enumerate() {
            assert!((t - i as f64 * r.length / (r.params.len() - 1) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn i2b_period_length() {
        let l = symplectic_length(&i2b(), (0.0, 4.0 * std::f64::consts::PI), 1e-12).unwrap();
        assert!((l - 12.5664).abs() < 1e-4);
    }

    #[test]
    fn reparametrized_curve_has_unit_arc_element() {
        // γ(t) = I.2.b(t + t³/10) is Lagrangian but not in arc length.
        let base = i2b();
        let slow = Curve::from_fn("slow", move |t: Jet<f64>| base.eval_series(t + t.powi(3) * 0.1).unwrap());
        let r = arclength_reparam(&slow, (0.0, 2.0)).unwrap();
        let direct = symplectic_length(&i2b(), (0.0, 2.0 + 0.8), 1e-12).unwrap();
        assert!((r.length - direct).abs() < 1e-9);
        let w = r.curve.domain(3).unwrap();
        assert!(arc_length_defect(&r.curve, w, 200).unwrap() < 1e-6);
    }

    #[test]
    fn orientation_is_checked_and_reversal_flips_it() {
        let c = i2b();
        let rev = reversed(&c).unwrap();
        assert!(matches!(sigma(&rev, 0.3), Err(Error::OrientationViolation { .. })));
        assert!(matches!(arclength_reparam(&rev, (0.0, 1.0)), Err(Error::OrientationViolation { .. })));
        let p = rev.point(-0.3).unwrap();
        assert!((p - c.point(0.3).unwrap()).norm() < 1e-15);
    }
}
