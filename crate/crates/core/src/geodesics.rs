//! The symplectic arc-length functional on Lagrangian curves.
//!
//! For an arc-length Lagrangian curve with `k₁ = −κ₃` and `k₂ = κ₃² − κ₄`,
//! the first variation along an admissible field `𝔳 = Σ vᵢEᵢ` (components in
//! the Frenet frame, `v₂ = ½(v₃″ − 3v₄′)`) is
//! `∫_K ((2k₂ + k₁″)v₃ + k₁′v₄) ds`. Geodesics are the curves with `k₁`
//! constant and `k₂ = 0`.

use crate::curve::{grid, jet, Curve};
use crate::error::{Error, Result};
use crate::invariants::curvatures;
use crate::jet::Jet;
use crate::linalg::Vector;
use crate::symplectic::lambda;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type JVec = Vector<Jet<f64>, 4>;

/// Polynomial bump `A·(4(s − a)(b − s)/(b − a)²)^m` on `[a, b]`, zero
/// elsewhere. It is `C^{m−1}` on the line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub a: f64,
    pub b: f64,
    #[serde(default = "Bump::default_order")]
    pub order: u32,
    #[serde(default = "Bump::default_amplitude")]
    pub amplitude: f64,
}

impl Bump {
    pub const DEFAULT_ORDER: u32 = 5;

    fn default_order() -> u32 {
        Self::DEFAULT_ORDER
    }

    fn default_amplitude() -> f64 {
        1.0
    }

    pub fn new(a: f64, b: f64, order: u32, amplitude: f64) -> Result<Self> {
        let bump = Bump { a, b, order, amplitude };
        bump.validate()?;
        Ok(bump)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite() && self.a < self.b && self.amplitude.is_finite()) {
            return Err(Error::InvalidParameters(format!("bump needs finite a < b (a = {}, b = {})", self.a, self.b)));
        }
        if self.order == 0 {
            return Err(Error::SmoothnessInsufficient("bump order must be at least 1".into()));
        }
        Ok(())
    }

    /// Number of continuous derivatives on the line.
    pub fn smoothness(&self) -> u32 {
        self.order - 1
    }

    pub fn eval(&self, s: Jet<f64>) -> Jet<f64> {
        let zero = Jet::constant(0.0).truncate(s.len());
        if s.value() < self.a || s.value() > self.b {
            return zero;
        }
        let w = self.b - self.a;
        let base = (s - self.a) * (-(s - self.b)) * (4.0 / (w * w));
        let mut out = Jet::constant(self.amplitude).truncate(s.len());
        for _ in 0..self.order {
            out *= base;
        }
        out
    }
}

fn eval_sum(bumps: &[Bump], s: Jet<f64>) -> Jet<f64> {
    bumps.iter().fold(Jet::constant(0.0).truncate(s.len()), |acc, b| acc + b.eval(s))
}

fn min_smoothness(bumps: &[Bump]) -> Option<u32> {
    bumps.iter().map(Bump::smoothness).min()
}

/// Components of a variation field in the Frenet frame, each a sum of bumps.
/// `v2` is derived from the admissibility constraint unless given.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variation {
    #[serde(default)]
    pub v1: Vec<Bump>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v2: Option<Vec<Bump>>,
    #[serde(default)]
    pub v3: Vec<Bump>,
    #[serde(default)]
    pub v4: Vec<Bump>,
}

/// `v₂ = ½(v₃″ − 3v₄′)` filled in from `v₃, v₄`; `v₃` must be `C²` and `v₄`
/// `C¹`.
pub fn make_admissible(v3: Vec<Bump>, v4: Vec<Bump>, v1: Vec<Bump>) -> Result<Variation> {
    let var = Variation { v1, v2: None, v3, v4 };
    var.validate()?;
    Ok(var)
}

impl Variation {
    pub fn zero() -> Self {
        Variation::default()
    }

    pub fn validate(&self) -> Result<()> {
        for b in self.v1.iter().chain(self.v2.iter().flatten()).chain(&self.v3).chain(&self.v4) {
            b.validate()?;
        }
        if let Some(k) = min_smoothness(&self.v3).filter(|&k| k < 2) {
            return Err(Error::SmoothnessInsufficient(format!("v3 must be C^2, got C^{k}")));
        }
        if let Some(k) = min_smoothness(&self.v4).filter(|&k| k < 1) {
            return Err(Error::SmoothnessInsufficient(format!("v4 must be C^1, got C^{k}")));
        }
        Ok(())
    }

    /// Smallest interval containing every bump, or `None` for the zero field.
    pub fn support(&self) -> Option<(f64, f64)> {
        let all = self.v1.iter().chain(self.v2.iter().flatten()).chain(&self.v3).chain(&self.v4);
        all.fold(None, |acc: Option<(f64, f64)>, b| match acc {
            None => Some((b.a, b.b)),
            Some((a, c)) => Some((a.min(b.a), c.max(b.b))),
        })
    }

    /// Series of `(v₁, v₂, v₃, v₄)` at `s` with `len` coefficients.
    pub fn components(&self, s: f64, len: usize) -> [Jet<f64>; 4] {
        let x = Jet::variable(s, (len + 2).min(crate::jet::JET_CAPACITY));
        let v1 = eval_sum(&self.v1, x).truncate(len);
        let v3 = eval_sum(&self.v3, x);
        let v4 = eval_sum(&self.v4, x);
        let v2 = match &self.v2 {
            Some(b) => eval_sum(b, x).truncate(len),
            None => ((v3.differentiate().differentiate() - v4.differentiate() * 3.0) * 0.5).truncate(len),
        };
        [v1, v2, v3.truncate(len), v4.truncate(len)]
    }

    /// max `|v₂ − ½(v₃″ − 3v₄′)|` over `samples` points of the support.
    pub fn admissibility_defect(&self, samples: usize) -> f64 {
        let Some((a, b)) = self.support() else { return 0.0 };
        let Some(v2) = &self.v2 else { return 0.0 };
        grid(a, b, samples)
            .into_iter()
            .map(|s| {
                let x = Jet::variable(s, 3);
                let (v3, v4) = (eval_sum(&self.v3, x), eval_sum(&self.v4, x));
                (eval_sum(v2, x).value() - 0.5 * (v3.derivative(2) - 3.0 * v4.derivative(1))).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub const ARC_LENGTH_TOL: f64 = 1e-6;
pub const GEODESIC_TOL: f64 = 1e-6;
const FULLNESS_TOL: f64 = 1e-10;

/// `k₁ = −κ₃`, `k₂ = κ₃² − κ₄` and the Euler–Lagrange coefficients along a
/// curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicReport {
    pub s: Vec<f64>,
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    /// `2k₂ + k₁″`, the coefficient of `v₃`.
    pub el_v3: Vec<f64>,
    /// `k₁′`, the coefficient of `v₄`.
    pub el_v4: Vec<f64>,
    pub sup_k1p: f64,
    pub sup_k2: f64,
    pub tol: f64,
    pub verdict: bool,
}

/// Sample the Euler–Lagrange coefficients; the verdict holds when
/// `sup|k₁′| ≤ tol` and `sup|k₂| ≤ tol`.
pub fn el_residual(c: &Curve<f64>, window: (f64, f64), samples: usize, tol: f64) -> Result<GeodesicReport> {
    let mut rep = GeodesicReport {
        s: Vec::with_capacity(samples),
        k1: Vec::with_capacity(samples),
        k2: Vec::with_capacity(samples),
        el_v3: Vec::with_capacity(samples),
        el_v4: Vec::with_capacity(samples),
        sup_k1p: 0.0,
        sup_k2: 0.0,
        tol,
        verdict: false,
    };
    for s in grid(window.0, window.1, samples) {
        let j = jet(c, s, 6)?;
        let inv = curvatures(&j)?;
        if (inv.k2 - 1.0).abs() > ARC_LENGTH_TOL {
            return Err(Error::NotArcLength { defect: (inv.k2 - 1.0).abs() });
        }
        if inv.phi.abs() <= FULLNESS_TOL {
            return Err(Error::NotFull);
        }
        let k3pp = lambda(&j.x(4), &j.x(5)) + lambda(&j.x(3), &j.x(6));
        let (k1, k2) = (-inv.k3, inv.k3 * inv.k3 - inv.k4);
        let (k1p, k1pp) = (-inv.k3p, -k3pp);
        rep.sup_k1p = rep.sup_k1p.max(k1p.abs());
        rep.sup_k2 = rep.sup_k2.max(k2.abs());
        rep.s.push(s);
        rep.k1.push(k1);
        rep.k2.push(k2);
        rep.el_v3.push(2.0 * k2 + k1pp);
        rep.el_v4.push(k1p);
    }
    rep.verdict = rep.sup_k1p <= tol && rep.sup_k2 <= tol;
    Ok(rep)
}

/// Frenet frame of an arc-length Lagrangian curve as series in `s`:
/// `E₁ = γ′, E₂ = γ″, E₃ = −γ⁗ − κ₃γ″, E₄ = γ‴`, plus the curve itself.
fn frame_series(c: &Curve<f64>, s: f64, len: usize) -> Result<(JVec, [JVec; 4])> {
    let g = c
        .series(s, len + 4)
        .ok_or_else(|| Error::InvalidInput("first variation needs a closed-form curve".into()))?;
    let d = |k: usize| -> JVec {
        Vector(g.map(|x| {
            let mut y = x;
            for _ in 0..k {
                y = y.differentiate();
            }
            y
        }))
    };
    let (g2, g3, g4) = (d(2), d(3), d(4));
    let k3 = lambda(&g3, &g4);
    let e3 = -(g4 + g2.map(|x| x * k3));
    Ok((Vector(g), [d(1), g2, e3, g3]))
}

fn deriv(v: &JVec) -> JVec {
    v.map(|x| x.differentiate())
}

/// `σ_u = Λ(γ_u″, γ_u‴)^{1/5}` at `s` for the perturbed curve and the
/// Lagrangian residual `Λ(γ_u′, γ_u″)` left after the corrector.
pub fn perturbed_element(c: &Curve<f64>, var: &Variation, s: f64, u: f64) -> Result<(f64, f64)> {
    // Each corrector step consumes two orders; two steps leave the four
    // coefficients σ needs.
    let len = 8;
    let (g, e) = frame_series(c, s, len)?;
    let v = var.components(s, len);
    let mut p: JVec = Vector::zeros();
    for i in 0..4 {
        p = p + e[i].map(|x| x * v[i]);
    }
    let mut gu = g + p.map(|x| x * u);
    // Newton steps on Λ(γ_u′, γ_u″) = 0 through the E₂ component: adding
    // wE₂ changes the residual by −2w to first order.
    for _ in 0..2 {
        let r = lambda(&deriv(&gu), &deriv(&deriv(&gu)));
        gu = gu + e[1].map(|x| x * r * 0.5);
    }
    let d1 = deriv(&gu);
    let d2 = deriv(&d1);
    let d3 = deriv(&d2);
    let l = lambda(&d2, &d3).value();
    if !(l > 0.0) {
        return Err(Error::LagrangianViolated { residual: f64::NAN });
    }
    Ok((l.powf(0.2), lambda(&d1, &d2).value()))
}

/// Simpson node count used for the functional and its integrands.
pub const FIRST_VARIATION_NODES: usize = 4001;
pub const LAGRANGIAN_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FirstVariation {
    pub support: (f64, f64),
    pub epsilon: f64,
    /// Derivative of `ℓ = ∫_K σ` at `u = 0` from central differences at `ε`
    /// and `ε/2` with Richardson extrapolation.
    pub finite_difference: f64,
    /// `∫_K ((2k₂ + k₁″)v₃ + k₁′v₄) ds`.
    pub el_integral: f64,
    /// `∫_K (2k₂v₃ + k₁v₃″ + 2v₃⁽⁴⁾ + 3k₁′v₄ + 2k₁v₄′ − 5v₄‴) ds`.
    pub raw_integral: f64,
    /// `el_integral / 5`: the derivative of `∫ Λ(γ″,γ‴)^{1/5}` implied by
    /// an integrand that is the first variation of `Λ(γ″,γ‴)` itself.
    pub predicted_derivative: f64,
    /// max `|Λ(γ_u′, γ_u″)|` over the perturbed curves.
    pub lagrangian_residual: f64,
}

/// Integrands of the reduced and raw first-variation formulas at `s`.
fn el_integrands(c: &Curve<f64>, var: &Variation, s: f64) -> Result<(f64, f64)> {
    let j = jet(c, s, 6)?;
    let inv = curvatures(&j)?;
    let k3pp = lambda(&j.x(4), &j.x(5)) + lambda(&j.x(3), &j.x(6));
    let (k1, k2, k1p, k1pp) = (-inv.k3, inv.k3 * inv.k3 - inv.k4, -inv.k3p, -k3pp);
    let x = Jet::variable(s, 5);
    let (v3, v4) = (eval_sum(&var.v3, x), eval_sum(&var.v4, x));
    let reduced = (2.0 * k2 + k1pp) * v3.value() + k1p * v4.value();
    let raw = 2.0 * k2 * v3.value() + k1 * v3.derivative(2) + 2.0 * v3.derivative(4) + 3.0 * k1p * v4.value()
        + 2.0 * k1 * v4.derivative(1)
        - 5.0 * v4.derivative(3);
    Ok((reduced, raw))
}

impl Variation {
    /// Support endpoints of every bump, sorted: the integrands are smooth
    /// between consecutive breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .v1
            .iter()
            .chain(self.v2.iter().flatten())
            .chain(&self.v3)
            .chain(&self.v4)
            .flat_map(|b| [b.a, b.b])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

/// Composite Simpson over the support split at the variation's breakpoints,
/// with about `nodes` points in total, for `N` integrands at once.
fn piecewise_simpson<const N: usize>(
    var: &Variation,
    nodes: usize,
    f: impl Fn(f64) -> Result<[f64; N]> + Sync,
) -> Result<[f64; N]> {
    let pts = var.breakpoints();
    let mut total = [0.0; N];
    let (Some(&a), Some(&b)) = (pts.first(), pts.last()) else { return Ok(total) };
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q <= p {
            continue;
        }
        let n = ((nodes as f64 * (q - p) / (b - a)).ceil() as usize).max(2);
        let n = n + (n & 1);
        let h = (q - p) / n as f64;
        let vals = (0..=n).into_par_iter().map(|i| f(p + h * i as f64)).collect::<Result<Vec<_>>>()?;
        for (k, t) in total.iter_mut().enumerate() {
            let col: Vec<f64> = vals.iter().map(|v| v[k]).collect();
            *t += crate::quad::simpson_samples(&col, h);
        }
    }
    Ok(total)
}

/// Reduced and raw first-variation integrals over the support by composite
/// Simpson with about `nodes` points.
pub fn el_integrals(c: &Curve<f64>, var: &Variation, nodes: usize) -> Result<(f64, f64)> {
    let [reduced, raw] = piecewise_simpson(var, nodes, |s| el_integrands(c, var, s).map(|(x, y)| [x, y]))?;
    Ok((reduced, raw))
}

/// Central-difference first variation of `ℓ = ∫_K σ` next to the
/// Euler–Lagrange integral.
pub fn first_variation(c: &Curve<f64>, var: &Variation, epsilon: f64) -> Result<FirstVariation> {
    first_variation_with(c, var, epsilon, FIRST_VARIATION_NODES)
}

pub fn first_variation_with(c: &Curve<f64>, var: &Variation, epsilon: f64, nodes: usize) -> Result<FirstVariation> {
    var.validate()?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameters(format!("epsilon must be positive, got {epsilon}")));
    }
    let defect = var.admissibility_defect(1001);
    if defect > 1e-9 {
        return Err(Error::VariationNotAdmissible { defect });
    }
    let Some(support) = var.support() else {
        return Ok(FirstVariation {
            support: (0.0, 0.0),
            epsilon,
            finite_difference: 0.0,
            el_integral: 0.0,
            raw_integral: 0.0,
            predicted_derivative: 0.0,
            lagrangian_residual: 0.0,
        });
    };
    // Central differences at ε and ε/2, combined to cancel the ε² term.
    let worst = std::sync::Mutex::new(0.0f64);
    let [fd] = piecewise_simpson(var, nodes, |s| {
        let mut residual: f64 = 0.0;
        let mut central = |u: f64| -> Result<f64> {
            let (sp, rp) = perturbed_element(c, var, s, u)?;
            let (sm, rm) = perturbed_element(c, var, s, -u)?;
            residual = residual.max(rp.abs()).max(rm.abs());
            Ok((sp - sm) / (2.0 * u))
        };
        let (d1, d2) = (central(epsilon)?, central(0.5 * epsilon)?);
        if residual > LAGRANGIAN_TOL {
            return Err(Error::LagrangianViolated { residual });
        }
        let mut w = worst.lock().expect("residual lock");
        *w = w.max(residual);
        Ok([(4.0 * d2 - d1) / 3.0])
    })?;
    let residual = worst.into_inner().expect("residual lock");
    let (el, raw) = el_integrals(c, var, nodes)?;
    Ok(FirstVariation {
        support,
        epsilon,
        finite_difference: fd,
        el_integral: el,
        raw_integral: raw,
        predicted_derivative: el / 5.0,
        lagrangian_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{generate, CaseTag, ClassCase};

    fn curve(tag: CaseTag, mu: f64, nu: f64) -> Curve<f64> {
        generate(&ClassCase::new(tag, mu, nu).unwrap()).unwrap()
    }

    fn bump(a: f64, b: f64, amp: f64) -> Vec<Bump> {
        vec![Bump::new(a, b, 6, amp).unwrap()]
    }

    #[test]
    fn admissible_fields() {
        let v = make_admissible(vec![], bump(0.0, 2.0, 1.0), vec![]).unwrap();
        let b = Bump::new(0.0, 2.0, 6, 1.0).unwrap();
        for s in [0.3, 1.0, 1.7] {
            let comps = v.components(s, 3);
            let d = b.eval(Jet::variable(s, 3)).derivative(1);
            assert!((comps[1].value() + 1.5 * d).abs() < 1e-14);
        }
        let v = make_admissible(bump(0.0, 2.0, 1.0), vec![], vec![]).unwrap();
        let comps = v.components(0.8, 3);
        assert!((comps[1].value() - 0.5 * b.eval(Jet::variable(0.8, 3)).derivative(2)).abs() < 1e-14);
        assert_eq!(make_admissible(vec![], vec![], vec![]).unwrap(), Variation::zero());
        let rough = vec![Bump::new(0.0, 1.0, 2, 1.0).unwrap()];
        assert!(matches!(make_admissible(rough, vec![], vec![]), Err(Error::SmoothnessInsufficient(_))));
        let given = Variation { v2: Some(bump(0.0, 1.0, 1.0)), ..Variation::zero() };
        assert!(given.admissibility_defect(101) > 1e-3);
    }

    #[test]
    fn geodesic_verdicts() {
        let geo = el_residual(&curve(CaseTag::II2, 1.0, 0.0), (0.0, 5.0), 50, GEODESIC_TOL).unwrap();
        assert!(geo.verdict);
        let iv = el_residual(&curve(CaseTag::IV, 0.0, 0.0), (-2.0, 2.0), 50, GEODESIC_TOL).unwrap();
        assert!(iv.verdict);
        let knot = el_residual(&curve(CaseTag::I2b, 1.5, 0.5), (0.0, 5.0), 50, GEODESIC_TOL).unwrap();
        assert!(!knot.verdict);
        assert!((knot.sup_k2 - 0.5625).abs() < 1e-9, "{}", knot.sup_k2);
    }

    #[test]
    fn arc_length_and_fullness_required() {
        let slow = Curve::from_fn("slow", |t: Jet<f64>| {
            let (s, c) = (t * 2.0).sin_cos();
            [s, c, c, s * 0.5]
        });
        assert!(matches!(el_residual(&slow, (0.0, 1.0), 5, GEODESIC_TOL), Err(Error::NotArcLength { .. })));
    }

    #[test]
    fn finite_difference_matches_fifth_of_el_integral() {
        let c = curve(CaseTag::I2b, 1.5, 0.5);
        let var = make_admissible(bump(0.2, 1.6, 0.05), bump(0.4, 1.8, 0.05), bump(0.0, 1.0, 0.1)).unwrap();
        let fv = first_variation(&c, &var, 1e-4).unwrap();
        assert!((fv.finite_difference - fv.predicted_derivative).abs() < 1e-8, "{fv:?}");
        assert!((fv.el_integral - fv.raw_integral).abs() < 1e-8);
        // k₁ constant: a v₄-only field has zero first variation.
        let v4 = make_admissible(vec![], bump(0.2, 1.6, 0.05), vec![]).unwrap();
        let fv = first_variation(&c, &v4, 1e-4).unwrap();
        assert!(fv.finite_difference.abs() < 1e-9 && fv.el_integral.abs() < 1e-12);
    }

    #[test]
    fn geodesic_has_zero_first_variation() {
        let c = curve(CaseTag::II2, 1.0, 0.0);
        let var = make_admissible(bump(0.2, 1.6, 0.05), bump(0.4, 1.8, 0.05), vec![]).unwrap();
        let fv = first_variation(&c, &var, 1e-4).unwrap();
        assert!(fv.finite_difference.abs() < 1e-6 && fv.el_integral.abs() < 1e-6, "{fv:?}");
        let z = first_variation(&c, &Variation::zero(), 1e-4).unwrap();
        assert_eq!(z.finite_difference, 0.0);
    }

    #[test]
    fn large_steps_break_the_constraint() {
        let c = curve(CaseTag::I2b, 1.5, 0.5);
        let var = make_admissible(bump(0.2, 1.4, 0.3), vec![], vec![]).unwrap();
        assert!(matches!(first_variation(&c, &var, 1e-4), Err(Error::LagrangianViolated { .. })));
    }
}
