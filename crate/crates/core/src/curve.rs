//! Curve representations and jet extraction.

use crate::error::{Error, Result};
use crate::jet::{Jet, JET_CAPACITY};
use crate::linalg::{Vec4, Vector};
use crate::scalar::{Field, Real};
use crate::symplectic::GroupElement;
use std::fmt;
use std::sync::Arc;

/// Highest jet order exposed through [`jet`].
pub const MAX_JET_ORDER: usize = 6;

/// Derivative columns `X⁽⁰⁾..X⁽ᵏ⁾` of a curve at parameter `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveJet<T> {
    pub t: T,
    pub cols: Vec<Vec4<T>>,
}

impl<T: Field> CurveJet<T> {
    pub fn new(t: T, cols: Vec<Vec4<T>>) -> Self {
        CurveJet { t, cols }
    }

    pub fn order(&self) -> usize {
        self.cols.len().saturating_sub(1)
    }

    /// Column `X⁽ⁱ⁾`.
    pub fn x(&self, i: usize) -> Vec4<T> {
        self.cols[i]
    }

    pub fn require(&self, k: usize) -> Result<()> {
        if self.order() < k {
            return Err(Error::OrderTooHigh { requested: k, max: self.order() });
        }
        Ok(())
    }

    /// Translation acts on `X⁽⁰⁾` only; the linear part acts on every column.
    pub fn transformed(&self, g: &GroupElement<T>) -> Self {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { g.act(x) } else { g.linear.mul_vec(x) })
            .collect();
        CurveJet { t: self.t, cols }
    }

    /// The jet of `t ↦ γ(a t + b)` at the preimage of `self.t`.
    pub fn rescaled(&self, a: T, t_new: T) -> Self {
        let mut f = T::one();
        let cols = self
            .cols
            .iter()
            .map(|x| {
                let out = x.scale(f);
                f = f * a;
                out
            })
            .collect();
        CurveJet { t: t_new, cols }
    }
}

impl<T: Real> CurveJet<T> {
    /// Lift to a jet whose entries are first-order series in `t`: column `i`
    /// becomes `X⁽ⁱ⁾ + X⁽ⁱ⁺¹⁾ dt`. The result has one order less.
    pub fn to_dual(&self) -> CurveJet<Jet<T>> {
        let k = self.order();
        let cols = (0..k)
            .map(|i| {
                let a = self.cols[i];
                let b = self.cols[i + 1];
                Vector([0, 1, 2, 3].map(|j| Jet::from_coeffs(&[a.0[j], b.0[j]])))
            })
            .collect();
        CurveJet { t: Jet::from_coeffs(&[self.t, T::one()]), cols }
    }
}

/// Act on every column of a jet; see [`CurveJet::transformed`].
pub fn act_on_jet<T: Field>(g: &GroupElement<T>, jet: &CurveJet<T>) -> CurveJet<T> {
    jet.transformed(g)
}

/// A curve given by a formula evaluated over truncated series.
pub trait ClosedFormCurve<T: Real>: Send + Sync {
    fn eval(&self, t: Jet<T>) -> [Jet<T>; 4];

    fn describe(&self) -> String {
        "closed form".to_string()
    }
}

struct FnCurve<F> {
    f: F,
    label: String,
}

impl<T: Real, F> ClosedFormCurve<T> for FnCurve<F>
where
    F: Fn(Jet<T>) -> [Jet<T>; 4] + Send + Sync,
{
    fn eval(&self, t: Jet<T>) -> [Jet<T>; 4] {
        (self.f)(t)
    }
    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Uniformly spaced samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve<T> {
    pub t0: T,
    pub h: T,
    pub points: Vec<Vec4<T>>,
    /// Accuracy order of the central difference stencils (even, ≥ 2).
    pub accuracy: usize,
}

/// Minimum number of samples for a sampled curve.
pub const MIN_SAMPLES: usize = 9;

impl<T: Real> SampledCurve<T> {
    pub fn new(t0: T, h: T, points: Vec<Vec4<T>>) -> Result<Self> {
        if points.len() < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "sampled curve needs at least {MIN_SAMPLES} points, got {}",
                points.len()
            )));
        }
        if !(h > T::zero()) || !h.is_finite() || !t0.is_finite() {
            return Err(Error::InvalidInput("sample spacing must be positive and finite".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        Ok(SampledCurve { t0, h, points, accuracy: 4 })
    }

    /// Use central stencils of the given (even) accuracy order.
    pub fn with_accuracy(mut self, accuracy: usize) -> Result<Self> {
        if accuracy < 2 || !accuracy.is_multiple_of(2) || accuracy > 16 {
            return Err(Error::InvalidParameters(format!(
                "stencil accuracy must be even in 2..=16, got {accuracy}"
            )));
        }
        self.accuracy = accuracy;
        Ok(self)
    }

    /// Keep every `stride`-th sample.
    pub fn decimate(&self, stride: usize) -> Result<Self> {
        let stride = stride.max(1);
        let points: Vec<_> = self.points.iter().step_by(stride).copied().collect();
        let mut out = SampledCurve::new(self.t0, self.h * T::from_usize(stride), points)?;
        out.accuracy = self.accuracy;
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_at(&self, i: usize) -> T {
        self.t0 + self.h * T::from_usize(i)
    }

    pub fn t_end(&self) -> T {
        self.t_at(self.points.len() - 1)
    }

    /// Half-width of the stencil used for derivatives up to order `k`.
    pub fn half_width(&self, k: usize) -> usize {
        k.div_ceil(2).saturating_sub(1) + self.accuracy / 2
    }

    /// Window of parameters where a jet of order `k` is available.
    pub fn jet_window(&self, k: usize) -> (T, T) {
        let m = self.half_width(k);
        (self.t_at(m), self.t_at(self.len().saturating_sub(m + 1)))
    }

    pub fn jet(&self, t: T, k: usize) -> Result<CurveJet<T>> {
        if k > MAX_JET_ORDER {
            return Err(Error::OrderTooHigh { requested: k, max: MAX_JET_ORDER });
        }
        let m = self.half_width(k) as isize;
        let x = (t - self.t0) / self.h;
        if !x.is_finite() {
            return Err(Error::OutOfRange { t: t.to_f64_lossless() });
        }
        let xf = x.to_f64_lossless();
        let centre = xf.round() as isize;
        let n = self.len() as isize;
        if centre - m < 0 || centre + m >= n || xf < -0.5 || xf > (n as f64) - 0.5 {
            return Err(Error::OutOfRange { t: t.to_f64_lossless() });
        }
        let offset = x - T::from_f64(centre as f64);
        let nodes: Vec<T> = (-m..=m).map(|i| T::from_f64(i as f64)).collect();
        let w = fornberg_weights(offset, &nodes, k);
        let mut cols = vec![Vector::zeros(); k + 1];
        let mut hp = T::one();
        for (d, col) in cols.iter_mut().enumerate() {
            let mut acc = Vector::<T, 4>::zeros();
            for (j, wj) in w[d].iter().enumerate() {
                let idx = (centre - m + j as isize) as usize;
                acc = acc + self.points[idx].scale(*wj);
            }
            *col = acc.scale(T::one() / hp);
            hp = hp * self.h;
        }
        Ok(CurveJet { t, cols })
    }
}

/// Finite-difference weights (Fornberg) for derivatives `0..=k` at `z`
/// on the given nodes. Returns `w[d][j]`.
pub fn fornberg_weights<T: Real>(z: T, x: &[T], k: usize) -> Vec<Vec<T>> {
    let n = x.len();
    let mut c = vec![vec![T::zero(); n]; k + 1];
    let mut c1 = T::one();
    let mut c4 = x[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for d in (1..=mn).rev() {
                    c[d][i] = c1 * (T::from_usize(d) * c[d - 1][i - 1] - c5 * c[d][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for d in (1..=mn).rev() {
                c[d][j] = (c4 * c[d][j] - T::from_usize(d) * c[d - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// A parametrized curve in ℝ⁴.
#[derive(Clone)]
pub enum Curve<T: Real> {
    ClosedForm(Arc<dyn ClosedFormCurve<T>>),
    Sampled(SampledCurve<T>),
}

impl<T: Real> fmt::Debug for Curve<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::ClosedForm(c) => write!(f, "Curve::ClosedForm({})", c.describe()),
            Curve::Sampled(s) => write!(f, "Curve::Sampled({} points)", s.len()),
        }
    }
}

impl<T: Real> Curve<T> {
    /// Wrap a formula. The closure receives the parameter as a series and
    /// must use only series arithmetic on it.
    pub fn from_fn<F>(label: &str, f: F) -> Self
    where
        F: Fn(Jet<T>) -> [Jet<T>; 4] + Send + Sync + 'static,
    {
        Curve::ClosedForm(Arc::new(FnCurve { f, label: label.to_string() }))
    }

    pub fn from_closed_form(c: impl ClosedFormCurve<T> + 'static) -> Self {
        Curve::ClosedForm(Arc::new(c))
    }

    pub fn sampled(s: SampledCurve<T>) -> Self {
        Curve::Sampled(s)
    }

    /// Evaluate the formula as a series of length `len` at `t`
    /// (closed forms only).
    pub fn series(&self, t: T, len: usize) -> Option<[Jet<T>; 4]> {
        match self {
            Curve::ClosedForm(c) => Some(c.eval(Jet::variable(t, len.clamp(1, JET_CAPACITY)))),
            Curve::Sampled(_) => None,
        }
    }

    /// Evaluate the formula on an arbitrary series argument (closed forms
    /// only); composes the curve with a reparametrization.
    pub fn eval_series(&self, t: Jet<T>) -> Option<[Jet<T>; 4]> {
        match self {
            Curve::ClosedForm(c) => Some(c.eval(t)),
            Curve::Sampled(_) => None,
        }
    }

    pub fn point(&self, t: T) -> Result<Vec4<T>> {
        Ok(jet(self, t, 0)?.cols[0])
    }

    /// Parameter window over which jets of order `k` are available
    /// (unbounded for closed forms).
    pub fn domain(&self, k: usize) -> Option<(T, T)> {
        match self {
            Curve::ClosedForm(_) => None,
            Curve::Sampled(s) => Some(s.jet_window(k)),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        matches!(self, Curve::ClosedForm(_))
    }
}

/// Columns of a curve jet read off a series evaluation.
pub fn jet_from_series<T: Real>(t: T, s: &[Jet<T>; 4], k: usize) -> CurveJet<T> {
    let cols = (0..=k).map(|d| Vector([0, 1, 2, 3].map(|j| s[j].derivative(d)))).collect();
    CurveJet { t, cols }
}

/// Jet of order `k ≤ 6` of a curve at `t`. Closed forms are exact to
/// roundoff; sampled curves use central differences.
pub fn jet<T: Real>(c: &Curve<T>, t: T, k: usize) -> Result<CurveJet<T>> {
    if k > MAX_JET_ORDER {
        return Err(Error::OrderTooHigh { requested: k, max: MAX_JET_ORDER });
    }
    match c {
        Curve::ClosedForm(f) => {
            let s = f.eval(Jet::variable(t, k + 1));
            let out = jet_from_series(t, &s, k);
            if out.cols.iter().any(|x| !x.is_finite()) {
                return Err(Error::OutOfRange { t: t.to_f64_lossless() });
            }
            Ok(out)
        }
        Curve::Sampled(s) => s.jet(t, k),
    }
}

/// Jet of arbitrary order up to the series capacity (closed forms only);
/// used internally where more than six derivatives are needed.
pub fn deep_jet<T: Real>(c: &Curve<T>, t: T, k: usize) -> Result<CurveJet<T>> {
    if k >= JET_CAPACITY {
        return Err(Error::OrderTooHigh { requested: k, max: JET_CAPACITY - 1 });
    }
    match c {
        Curve::ClosedForm(f) => Ok(jet_from_series(t, &f.eval(Jet::variable(t, k + 1)), k)),
        Curve::Sampled(s) => s.jet(t, k),
    }
}

/// Evenly spaced parameters covering `[a, b]` inclusive.
pub fn grid<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    if n <= 1 {
        return vec![a];
    }
    let step = (b - a) / T::from_usize(n - 1);
    (0..n).map(|i| a + step * T::from_usize(i)).collect()
}

/// Sample a curve on a uniform grid.
pub fn sample<T: Real>(c: &Curve<T>, t0: T, t1: T, n: usize) -> Result<SampledCurve<T>> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidInput(format!("need at least {MIN_SAMPLES} samples")));
    }
    let h = (t1 - t0) / T::from_usize(n - 1);
    let pts = (0..n)
        .map(|i| c.point(t0 + h * T::from_usize(i)))
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::new(t0, h, pts)
}
