//! Curves with prescribed curvatures, by integrating `dρ̃/ds = ρ̃·K(κ(s))` on
//! the affine symplectic group, and alignment of congruent curves.
//!
//! Every step multiplies by an exact group exponential, so the frame stays
//! symplectic up to roundoff and the drift measures only accumulated
//! rounding.

use crate::curve::{jet, Curve, SampledCurve};
use crate::error::{Error, Result};
use crate::frames::{frame, CrossSection};
use crate::invariants::InvariantReport;
use crate::jet::Jet;
use crate::lagrangian::{jet_predicates, PredicateOptions};
use crate::linalg::{Mat5, Vec4, Vector};
use crate::scalar::Real;
use crate::serret::serret_matrix;
use crate::symplectic::{expm, symplectic_defect, GroupElement, MovingFrame};
use std::fmt;
use std::sync::Arc;

type ProfileFn<T> = dyn Fn(Jet<T>) -> [Jet<T>; 4] + Send + Sync;

/// Curvature functions `(κ₁, κ₂, κ₃, κ₄)` of the integration parameter.
#[derive(Clone)]
pub enum CurvatureProfile<T: Real> {
    Constant([T; 4]),
    /// A formula evaluated over series, so its derivatives are exact.
    Function(Arc<ProfileFn<T>>),
    /// Uniform samples whose components are `κ₁..κ₄`; derivatives by
    /// central differences.
    Tabulated(SampledCurve<T>),
}

impl<T: Real> fmt::Debug for CurvatureProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureProfile::Constant(k) => write!(f, "Constant({k:?})"),
            CurvatureProfile::Function(_) => write!(f, "Function"),
            CurvatureProfile::Tabulated(s) => write!(f, "Tabulated({} rows)", s.len()),
        }
    }
}

impl<T: Real> CurvatureProfile<T> {
    /// Arc-length Lagrangian profile `κ₁ = 0, κ₂ = 1` with constant `κ₃, κ₄`.
    pub fn constant(k3: T, k4: T) -> Self {
        CurvatureProfile::Constant([T::zero(), T::one(), k3, k4])
    }

    /// Lagrangian profile (`κ₁ ≡ 0`) from a formula for `(κ₂, κ₃, κ₄)`.
    pub fn lagrangian<F>(f: F) -> Self
    where
        F: Fn(Jet<T>) -> [Jet<T>; 3] + Send + Sync + 'static,
    {
        CurvatureProfile::Function(Arc::new(move |s: Jet<T>| {
            let [k2, k3, k4] = f(s);
            [k2 * T::zero(), k2, k3, k4]
        }))
    }

    /// General profile from a formula for `(κ₁, κ₂, κ₃, κ₄)`.
    pub fn general<F>(f: F) -> Self
    where
        F: Fn(Jet<T>) -> [Jet<T>; 4] + Send + Sync + 'static,
    {
        CurvatureProfile::Function(Arc::new(f))
    }

    /// Series of length `len` of the four curvatures at `s`.
    pub fn series(&self, s: T, len: usize) -> Result<[Jet<T>; 4]> {
        match self {
            CurvatureProfile::Constant(k) => Ok(k.map(|x| Jet::constant(x).truncate(len))),
            CurvatureProfile::Function(f) => Ok(f(Jet::variable(s, len))),
            CurvatureProfile::Tabulated(t) => {
                let j = t.jet(s, len - 1)?;
                Ok([0, 1, 2, 3].map(|i| {
                    let d: Vec<T> = j.cols.iter().map(|c| c[i]).collect();
                    Jet::from_derivatives(&d)
                }))
            }
        }
    }

    /// Invariants at `s` as needed by the Frenet matrices.
    pub fn report(&self, s: T) -> Result<InvariantReport<T>> {
        Ok(InvariantReport::from_curvature_series(&self.series(s, 4)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stepper {
    /// `exp(h·K(s + h/2))`, order 2.
    Midpoint,
    /// Two-point Gauss commutator-corrected exponential, order 4.
    Magnus4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReconstructOptions {
    pub section: CrossSection,
    pub stepper: Stepper,
    /// When set, each step compares the two steppers and subdivides until
    /// their difference is below this bound.
    pub adaptive_tol: Option<f64>,
    pub max_subdivisions: u32,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            section: CrossSection::MinimalLagrangian,
            stepper: Stepper::Magnus4,
            adaptive_tol: None,
            max_subdivisions: 12,
        }
    }
}

/// Default step size.
pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct ReconstructionResult<T> {
    pub s: Vec<T>,
    pub frames: Vec<MovingFrame<T>>,
    /// max over the path of ‖ᵗE·J·E − J‖_max.
    pub drift: f64,
    /// Uniform spacing of `s`.
    pub h: T,
}

impl<T: Real> ReconstructionResult<T> {
    pub fn points(&self) -> Vec<Vec4<T>> {
        self.frames.iter().map(|f| f.origin()).collect()
    }

    /// The curve samples as a sampled curve.
    pub fn curve(&self) -> Result<SampledCurve<T>> {
        SampledCurve::new(self.s[0], self.h, self.points())
    }
}

struct Integrator<'a, T: Real> {
    profile: &'a CurvatureProfile<T>,
    section: CrossSection,
    sign: f64,
}

impl<T: Real> Integrator<'_, T> {
    fn transverse_measure(&self, r: &InvariantReport<T>) -> f64 {
        match self.section {
            CrossSection::Generic => (r.k1 * r.phi).lead(),
            _ => r.k2.lead(),
        }
    }

    fn generator(&self, s: T) -> Result<Mat5<T>> {
        let singular = || Error::ProfileSingularity { s: s.to_f64_lossless() };
        let r = self.profile.report(s)?;
        let m = self.transverse_measure(&r);
        if !(m * self.sign > 0.0) {
            return Err(singular());
        }
        let k = serret_matrix(self.section, &r).map_err(|_| singular())?.k;
        if !k.is_finite() {
            return Err(singular());
        }
        Ok(k)
    }

    fn step(&self, stepper: Stepper, s: T, h: T) -> Result<Mat5<T>> {
        match stepper {
            Stepper::Midpoint => Ok(expm(&self.generator(s + h / T::from_f64(2.0))?, h)),
            Stepper::Magnus4 => {
                let d = T::from_f64(3f64.sqrt() / 6.0);
                let half = T::from_f64(0.5);
                let a1 = self.generator(s + (half - d) * h)?;
                let a2 = self.generator(s + (half + d) * h)?;
                let omega = (a1 + a2).scale(half * h) + a1.bracket(&a2).scale(T::from_f64(3f64.sqrt() / 12.0) * h * h);
                Ok(expm(&omega, T::one()))
            }
        }
    }

    fn adaptive_step(&self, s: T, h: T, tol: f64, depth: u32) -> Result<Mat5<T>> {
        let low = self.step(Stepper::Midpoint, s, h)?;
        let high = self.step(Stepper::Magnus4, s, h)?;
        let estimate = (low - high).norm_max().to_f64_lossless();
        if estimate <= tol {
            return Ok(high);
        }
        if depth == 0 {
            return Err(Error::StepRejected { s: s.to_f64_lossless(), estimate });
        }
        let half = h / T::from_f64(2.0);
        let left = self.adaptive_step(s, half, tol / 2.0, depth - 1)?;
        let right = self.adaptive_step(s + half, half, tol / 2.0, depth - 1)?;
        Ok(left * right)
    }
}

/// Integrate the Frenet system of a section from `init` at `s_range.0`
/// to `s_range.1` with step close to `h`.
pub fn integrate<T: Real>(
    profile: &CurvatureProfile<T>,
    s_range: (T, T),
    h: T,
    init: &MovingFrame<T>,
) -> Result<ReconstructionResult<T>> {
    integrate_with(profile, s_range, h, init, &ReconstructOptions::default())
}

pub fn integrate_with<T: Real>(
    profile: &CurvatureProfile<T>,
    s_range: (T, T),
    h: T,
    init: &MovingFrame<T>,
    opts: &ReconstructOptions,
) -> Result<ReconstructionResult<T>> {
    let (s0, s1) = s_range;
    if !(h > T::zero()) || !(s1 > s0) {
        return Err(Error::InvalidParameters("need h > 0 and s1 > s0".into()));
    }
    let init = GroupElement::new(init.translation, init.linear)?;
    let n = ((s1 - s0) / h).to_f64_lossless().round().max(1.0) as usize;
    let h = (s1 - s0) / T::from_usize(n);
    let mut it = Integrator { profile, section: opts.section, sign: 1.0 };
    let start = it.transverse_measure(&profile.report(s0)?);
    if start == 0.0 || !start.is_finite() {
        return Err(Error::ProfileSingularity { s: s0.to_f64_lossless() });
    }
    it.sign = start.signum();
    let mut rho = init.to_matrix5();
    let mut s_out = Vec::with_capacity(n + 1);
    let mut frames = Vec::with_capacity(n + 1);
    let mut drift = init.defect();
    s_out.push(s0);
    frames.push(init);
    for i in 0..n {
        let s = s0 + h * T::from_usize(i);
        let step = match opts.adaptive_tol {
            Some(tol) => it.adaptive_step(s, h, tol, opts.max_subdivisions)?,
            None => it.step(opts.stepper, s, h)?,
        };
        rho = rho * step;
        let f = frame_of(&rho);
        drift = drift.max(symplectic_defect(&f.linear));
        s_out.push(s0 + h * T::from_usize(i + 1));
        frames.push(f);
    }
    Ok(ReconstructionResult { s: s_out, frames, drift, h })
}

fn frame_of<T: Real>(m: &Mat5<T>) -> MovingFrame<T> {
    let mut a = Vector::zeros();
    let mut lin = crate::linalg::Mat4::zeros();
    for i in 0..4 {
        a.0[i] = m.0[i + 1][0];
        for j in 0..4 {
            lin.0[i][j] = m.0[i + 1][j + 1];
        }
    }
    GroupElement::from_parts_unchecked(a, lin)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alignment<T> {
    pub g: GroupElement<T>,
    /// max_i ‖g⋆γ₁(sᵢ) − γ₂(sᵢ)‖.
    pub residual: f64,
}

/// The congruence carrying `γ₁` onto `γ₂`, from their frames at one
/// parameter value: `g = ρ̃₂(s₀)·ρ̃₁(s₀)⁻¹`.
///
/// The frames come from difference jets, whose accuracy depends on the
/// spacing; the samples are thinned by several strides and the alignment
/// with the smallest residual is kept.
pub fn congruence_align<T: Real>(c1: &SampledCurve<T>, c2: &SampledCurve<T>) -> Result<Alignment<T>> {
    if c1.len() != c2.len() || c1.t0 != c2.t0 || c1.h != c2.h {
        return Err(Error::InvalidInput("curves must share a parameter grid".into()));
    }
    let mid = c1.t_at(c1.len() / 2);
    let mut best: Option<Alignment<T>> = None;
    let mut not_full = false;
    let mut stride = 1;
    while (c1.len() - 1) / stride + 1 >= 2 * (c1.half_width(4) + 1) {
        for accuracy in [4, 8] {
            let (Ok(d1), Ok(d2)) = (thinned(c1, stride, accuracy), thinned(c2, stride, accuracy)) else {
                continue;
            };
            match align_at(&d1, &d2, mid) {
                Ok(g) => {
                    let residual = alignment_residual(&g, c1, c2);
                    if best.as_ref().is_none_or(|b| residual < b.residual) {
                        best = Some(Alignment { g, residual });
                    }
                }
                Err(Error::NotFull) => not_full = true,
                Err(_) => {}
            }
        }
        stride *= 2;
    }
    match best {
        Some(b) => Ok(b),
        None if not_full => Err(Error::NotFull),
        None => Err(Error::InvalidInput("curves too short for frame alignment".into())),
    }
}

fn thinned<T: Real>(c: &SampledCurve<T>, stride: usize, accuracy: usize) -> Result<SampledCurve<T>> {
    c.decimate(stride)?.with_accuracy(accuracy)
}

fn align_at<T: Real>(c1: &SampledCurve<T>, c2: &SampledCurve<T>, t: T) -> Result<GroupElement<T>> {
    let (a, b) = c1.jet_window(4);
    let t = t.max(a).min(b);
    let frame_at = |c: &SampledCurve<T>| -> Result<MovingFrame<T>> {
        let j = c.jet(t, 4)?;
        if !jet_predicates(&j, &PredicateOptions::default())?.linearly_full {
            return Err(Error::NotFull);
        }
        frame(CrossSection::GramSchmidt, &j)
            .or_else(|_| frame(CrossSection::MinimalLagrangian, &j))
            .map_err(|_| Error::NotFull)
    };
    let f1 = frame_at(c1)?;
    let f2 = frame_at(c2)?;
    Ok(f2.compose(&f1.inverse()))
}

fn alignment_residual<T: Real>(g: &GroupElement<T>, c1: &SampledCurve<T>, c2: &SampledCurve<T>) -> f64 {
    c1.points
        .iter()
        .zip(&c2.points)
        .map(|(p, q)| (g.act(p) - *q).norm().to_f64_lossless())
        .fold(0.0, f64::max)
}

/// Measured `(κ₁..κ₄)` of a sampled curve at `s`, for round-trip checks.
pub fn measured_curvatures<T: Real>(c: &SampledCurve<T>, s: T) -> Result<[T; 4]> {
    let j = jet(&Curve::Sampled(c.clone()), s, 5)?;
    Ok(crate::invariants::curvatures(&j)?.curvatures())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{generate, CaseTag, ClassCase};
    use crate::curve::grid;
    use crate::scalar::Elementary;
    use crate::serret::constant_generator;
    use crate::symplectic::{expm_group, AlgebraElement};

    fn random_group(seed: f64) -> GroupElement<f64> {
        let mut coeffs = [0.0; 14];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = ((i as f64 + 1.0) * 12.9898 * seed).sin() * 0.4;
        }
        AlgebraElement { coeffs }.exp(1.0)
    }

    #[test]
    fn constant_profile_matches_exponential() {
        let (k3, k4) = (1.0, 1.0);
        let r = integrate(&CurvatureProfile::constant(k3, k4), (0.0, 10.0), 1e-3, &GroupElement::identity()).unwrap();
        let a = constant_generator(k3, k4);
        let mut worst = 0.0f64;
        for (s, f) in r.s.iter().zip(&r.frames).step_by(50) {
            let exact = expm_group(&a, *s);
            worst = worst.max((f.origin() - exact.origin()).norm_max());
        }
        assert!(worst < 1e-9, "{worst:e}");
        assert!(r.drift < 1e-9, "{:e}", r.drift);
    }

    #[test]
    fn type_iv_profile_gives_polynomial_curve() {
        let r = integrate(&CurvatureProfile::constant(0.0, 0.0), (0.0, 2.0), 1e-2, &GroupElement::identity()).unwrap();
        let curve = r.curve().unwrap();
        let case = ClassCase::new(CaseTag::IV, 0.0, 0.0).unwrap();
        let exact = crate::curve::sample(&generate(&case).unwrap(), 0.0, 2.0, curve.len()).unwrap();
        let al = congruence_align(&curve, &exact).unwrap();
        assert!(al.residual < 1e-9, "{}", al.residual);
    }

    #[test]
    fn magnus_is_fourth_order() {
        let profile = CurvatureProfile::lagrangian(|s: Jet<f64>| {
            let k3 = s.sin() * 0.3 + 1.0;
            [s.cos() * 0.2 + 1.0, k3, k3 * k3 * 0.9]
        });
        let end = |h: f64, stepper| {
            let opts = ReconstructOptions { stepper, ..Default::default() };
            let r = integrate_with(&profile, (0.0, 2.0), h, &GroupElement::identity(), &opts).unwrap();
            *r.frames.last().unwrap()
        };
        let reference = end(1e-3, Stepper::Magnus4);
        for (stepper, order) in [(Stepper::Midpoint, 4.0), (Stepper::Magnus4, 16.0)] {
            let e1 = end(0.1, stepper).distance(&reference);
            let e2 = end(0.05, stepper).distance(&reference);
            let ratio = e1 / e2;
            assert!((ratio / order - 1.0).abs() < 0.2, "{stepper:?}: ratio {ratio}");
        }
    }

    #[test]
    fn initial_frame_equivariance() {
        let profile = CurvatureProfile::lagrangian(|s: Jet<f64>| [Jet::constant(1.0), s.sin() * 0.1 + 1.0, s.cos() + 0.5]);
        let g = random_group(0.37);
        let base = integrate(&profile, (0.0, 3.0), 1e-2, &GroupElement::identity()).unwrap();
        let moved = integrate(&profile, (0.0, 3.0), 1e-2, &g).unwrap();
        for (a, b) in base.frames.iter().zip(&moved.frames) {
            assert!(g.compose(a).distance(b) < 1e-11);
        }
    }

    #[test]
    fn round_trip_recovers_curvatures() {
        let profile = CurvatureProfile::lagrangian(|s: Jet<f64>| {
            let k3 = s.sin() * 0.1 + 1.0;
            [Jet::constant(1.0), k3, k3 * k3]
        });
        let r = integrate(&profile, (0.0, 5.0), 1e-3, &random_group(0.11)).unwrap();
        let c = r.curve().unwrap().decimate(100).unwrap().with_accuracy(12).unwrap();
        let (a, b) = c.jet_window(5);
        let mut worst = 0.0f64;
        for s in grid(a, b, 40) {
            let k = measured_curvatures(&c, s).unwrap();
            let k3 = s.sin() * 0.1 + 1.0;
            let want = [0.0, 1.0, k3, k3 * k3];
            for i in 0..4 {
                worst = worst.max((k[i] - want[i]).abs());
            }
        }
        assert!(worst < 1e-6, "{worst:e}");
    }

    #[test]
    fn generic_section_reconstructs_general_curve() {
        // Curvatures of a non-Lagrangian curve, then rebuild it.
        let c = Curve::from_fn("wiggle", |t: Jet<f64>| {
            [t.sin() + t * t * 0.3, (t * 0.7).cosh(), (t * 1.3).cos() * 0.5 + t.powi(3) * 0.1, t.exp() * 0.2 - t]
        });
        let cc = c.clone();
        let profile = CurvatureProfile::general(move |s: Jet<f64>| {
            // κᵢ as series: evaluate the curve on a longer series and pair columns.
            let len = s.len();
            let x = cc.eval_series(Jet::variable(s.value(), len + 5)).unwrap();
            let d = |k: usize| -> Vec4<Jet<f64>> { Vector([0, 1, 2, 3].map(|i| differentiate_n(x[i], k).truncate(len))) };
            let k = |i: usize| crate::symplectic::lambda(&d(i), &d(i + 1));
            [k(1), k(2), k(3), k(4)]
        });
        for section in [CrossSection::Generic, CrossSection::MinimalLagrangian, CrossSection::GramSchmidt] {
            let init = frame(section, &jet(&c, -0.6, 5).unwrap()).unwrap();
            let opts = ReconstructOptions { section, ..Default::default() };
            let r = integrate_with(&profile, (-0.6, 0.2), 1e-3, &init, &opts).unwrap();
            for (s, f) in r.s.iter().zip(&r.frames).step_by(100) {
                let exact = frame(section, &jet(&c, *s, 5).unwrap()).unwrap();
                assert!(f.distance(&exact) < 1e-8, "{section} at {s}: {}", f.distance(&exact));
            }
        }
    }

    fn differentiate_n(x: Jet<f64>, k: usize) -> Jet<f64> {
        (0..k).fold(x, |acc, _| acc.differentiate())
    }

    #[test]
    fn singular_profile_is_rejected() {
        let profile = CurvatureProfile::lagrangian(|s: Jet<f64>| [s.cos(), Jet::constant(1.0), Jet::constant(0.5)]);
        let err = integrate(&profile, (0.0, 3.0), 1e-2, &GroupElement::identity()).unwrap_err();
        assert!(matches!(err, Error::ProfileSingularity { .. }), "{err:?}");
    }

    #[test]
    fn adaptive_mode_refines_and_rejects() {
        let profile = CurvatureProfile::lagrangian(|s: Jet<f64>| {
            let k3 = (s * 3.0).sin() + 1.0;
            [Jet::constant(1.0), k3, k3 * k3]
        });
        let opts = ReconstructOptions { adaptive_tol: Some(1e-10), ..Default::default() };
        let r = integrate_with(&profile, (0.0, 1.0), 0.1, &GroupElement::identity(), &opts).unwrap();
        let fine = integrate(&profile, (0.0, 1.0), 1e-3, &GroupElement::identity()).unwrap();
        assert!(r.frames.last().unwrap().distance(fine.frames.last().unwrap()) < 1e-8);
        let strict = ReconstructOptions { adaptive_tol: Some(1e-30), max_subdivisions: 2, ..Default::default() };
        let err = integrate_with(&profile, (0.0, 1.0), 0.1, &GroupElement::identity(), &strict).unwrap_err();
        assert!(matches!(err, Error::StepRejected { .. }));
    }

    #[test]
    fn alignment_recovers_group_element() {
        let case = ClassCase::new(CaseTag::I2b, 1.5, 0.5).unwrap();
        let c1 = crate::curve::sample(&generate(&case).unwrap(), 0.0, 6.0, 301).unwrap();
        let g0 = random_group(0.77);
        let pts = c1.points.iter().map(|p| g0.act(p)).collect();
        let c2 = SampledCurve::new(c1.t0, c1.h, pts).unwrap();
        let al = congruence_align(&c1, &c2).unwrap();
        assert!(al.residual < 1e-8, "{}", al.residual);
        assert!(al.g.distance(&g0) < 1e-6);
        let other = crate::curve::sample(&generate(&ClassCase::new(CaseTag::I2b, 1.5, 0.6).unwrap()).unwrap(), 0.0, 6.0, 301).unwrap();
        assert!(congruence_align(&c1, &other).unwrap().residual > 1e-3);
        let line = SampledCurve::new(0.0, 0.1, (0..20).map(|i| Vector([i as f64, 0.0, 1.0, 2.0])).collect()).unwrap();
        assert!(matches!(congruence_align(&line, &line), Err(Error::NotFull)));
    }
}
