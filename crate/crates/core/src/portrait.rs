//! Phase portraits `a = (γ₁, γ₃)`, `b = (−γ₂, γ₄)` and d-pair witnesses.
//!
//! `Λ(γ′,γ″) = a′∧a″ − b′∧b″`, so a regular curve is Lagrangian exactly when
//! its two portraits have equal areal speed. Where neither portrait inflects
//! they are second-order deformations of each other under the special
//! affine group of the plane.

use crate::curve::{grid, jet, Curve, CurveJet};
use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2, Vec4, Vector};
use crate::scalar::Real;
use serde::Serialize;

/// Planar cross product `x ∧ y`.
pub fn cross<T: Real>(x: &Vec2<T>, y: &Vec2<T>) -> T {
    x[0] * y[1] - x[1] * y[0]
}

fn split<T: Real>(x: &Vec4<T>) -> (Vec2<T>, Vec2<T>) {
    (Vector([x[0], x[2]]), Vector([-x[1], x[3]]))
}

/// Second-order jets of both portraits at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PortraitJet<T> {
    pub t: T,
    /// `a, a′, a″`.
    pub a: [Vec2<T>; 3],
    /// `b, b′, b″`.
    pub b: [Vec2<T>; 3],
}

impl<T: Real> PortraitJet<T> {
    pub fn from_curve_jet(j: &CurveJet<T>) -> Result<Self> {
        j.require(2)?;
        let (a0, b0) = split(&j.x(0));
        let (a1, b1) = split(&j.x(1));
        let (a2, b2) = split(&j.x(2));
        Ok(PortraitJet { t: j.t, a: [a0, a1, a2], b: [b0, b1, b2] })
    }

    /// `a′∧a″ − b′∧b″`, which equals `Λ(γ′,γ″)`.
    pub fn areal_defect(&self) -> T {
        cross(&self.a[1], &self.a[2]) - cross(&self.b[1], &self.b[2])
    }
}

#[derive(Clone, Debug)]
pub struct PhasePortrait<T: Real> {
    pub t: Vec<T>,
    pub a: Vec<Vec2<T>>,
    pub b: Vec<Vec2<T>>,
    /// max |a′∧a″ − b′∧b″| over the samples.
    pub dpair_residual: f64,
    curve: Curve<T>,
}

impl<T: Real> PhasePortrait<T> {
    pub fn curve(&self) -> &Curve<T> {
        &self.curve
    }

    /// Portrait jets at any parameter where the curve has a 2-jet.
    pub fn jet_at(&self, t: T) -> Result<PortraitJet<T>> {
        PortraitJet::from_curve_jet(&jet(&self.curve, t, 2)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PortraitRow<T> {
    pub t: T,
    pub a1: T,
    pub a2: T,
    pub b1: T,
    pub b2: T,
}

impl<T: Real> PhasePortrait<T> {
    pub fn rows(&self) -> Vec<PortraitRow<T>> {
        (0..self.t.len())
            .map(|i| PortraitRow { t: self.t[i], a1: self.a[i][0], a2: self.a[i][1], b1: self.b[i][0], b2: self.b[i][1] })
            .collect()
    }
}

/// Sample both portraits on `samples` uniform parameter values of the window.
pub fn phase_portraits<T: Real>(c: &Curve<T>, window: (T, T), samples: usize) -> Result<PhasePortrait<T>> {
    let ts = grid(window.0, window.1, samples);
    let mut a = Vec::with_capacity(ts.len());
    let mut b = Vec::with_capacity(ts.len());
    let mut residual = 0.0f64;
    for &t in &ts {
        let pj = PortraitJet::from_curve_jet(&jet(c, t, 2)?)?;
        a.push(pj.a[0]);
        b.push(pj.b[0]);
        residual = residual.max(pj.areal_defect().abs().to_f64_lossless());
    }
    Ok(PhasePortrait { t: ts, a, b, dpair_residual: residual, curve: c.clone() })
}

/// The curve `γ = (a₁, −b₁, a₂, b₂)` with the given portraits.
pub fn from_portraits<T: Real>(a: &[Vec2<T>], b: &[Vec2<T>]) -> Result<Vec<Vec4<T>>> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!("portrait lengths differ ({} vs {})", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(p, q)| Vector([p[0], -q[0], p[1], q[1]])).collect())
}

/// Special affine map `x ↦ A x + T` carrying the 2-jet of `a` to that of `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DPairWitness<T> {
    pub a: Mat2<T>,
    pub translation: Vec2<T>,
}

impl<T: Real> DPairWitness<T> {
    pub fn det(&self) -> T {
        self.a.det()
    }

    pub fn apply(&self, x: &Vec2<T>) -> Vec2<T> {
        self.a.mul_vec(x) + self.translation
    }
}

/// Relative bound on `|x′∧x″|` below which a portrait counts as inflected.
pub const INFLECTION_TOL: f64 = 1e-12;

/// `A = (b′,b″)·(a′,a″)⁻¹` and `T = b − A a` from portrait jets.
pub fn dpair_witness_from_jet<T: Real>(pj: &PortraitJet<T>) -> Result<DPairWitness<T>> {
    for x in [&pj.a, &pj.b] {
        let w = cross(&x[1], &x[2]);
        let scale = (x[1].norm() * x[2].norm()).to_f64_lossless();
        if !(w.abs().to_f64_lossless() > INFLECTION_TOL * scale) {
            return Err(Error::InflectionPoint { t: pj.t.to_f64_lossless() });
        }
    }
    let pa = Mat2::from_columns(&[pj.a[1], pj.a[2]]);
    let pb = Mat2::from_columns(&[pj.b[1], pj.b[2]]);
    let inv = pa.inverse().ok_or(Error::InflectionPoint { t: pj.t.to_f64_lossless() })?;
    let a = pb * inv;
    let translation = pj.b[0] - a.mul_vec(&pj.a[0]);
    Ok(DPairWitness { a, translation })
}

/// d-pair witness of the portraits at parameter `t`.
pub fn dpair_witness<T: Real>(portrait: &PhasePortrait<T>, t: T) -> Result<DPairWitness<T>> {
    dpair_witness_from_jet(&portrait.jet_at(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;
    use crate::scalar::Elementary;

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
    fn lagrangian_portraits_have_equal_areal_speed() {
        let p = phase_portraits(&i2b(), (0.0, 12.0), 400).unwrap();
        assert!(p.dpair_residual < 1e-12);
        assert_eq!(p.a.len(), p.b.len());
    }

    #[test]
    fn portraits_round_trip() {
        let p = phase_portraits(&i2b(), (0.0, 3.0), 50).unwrap();
        let pts = from_portraits(&p.a, &p.b).unwrap();
        for (i, t) in p.t.iter().enumerate() {
            assert_eq!(pts[i], i2b().point(*t).unwrap());
        }
    }

    #[test]
    fn curve_in_first_plane_has_constant_b() {
        let c = Curve::from_fn("e1e3", |t: Jet<f64>| [t.cos(), Jet::constant(0.0), t.sin(), Jet::constant(0.0)]);
        let p = phase_portraits(&c, (0.0, 1.0), 20).unwrap();
        assert!(p.b.iter().all(|x| *x == p.b[0]));
    }

    #[test]
    fn identical_portraits_give_identity() {
        // a = b when γ = (x, −x, y, y).
        let c = Curve::from_fn("diag", |t: Jet<f64>| [t.cos(), -t.cos(), t.sin() * 2.0, t.sin() * 2.0]);
        let p = phase_portraits(&c, (0.0, 1.0), 10).unwrap();
        let w = dpair_witness(&p, 0.4).unwrap();
        assert!((w.a - Mat2::identity()).norm_max() < 1e-14);
        assert!(w.translation.norm() < 1e-14);
    }

    #[test]
    fn witness_on_i2b_is_special_affine() {
        let p = phase_portraits(&i2b(), (0.0, 12.0), 10).unwrap();
        for k in 0..100 {
            let t = 0.123 + 0.117 * k as f64;
            let pj = p.jet_at(t).unwrap();
            let w = dpair_witness(&p, t).unwrap();
            assert!((w.det() - 1.0).abs() < 1e-9);
            assert!((w.apply(&pj.a[0]) - pj.b[0]).norm() < 1e-8);
            assert!((w.a.mul_vec(&pj.a[1]) - pj.b[1]).norm() < 1e-8);
            assert!((w.a.mul_vec(&pj.a[2]) - pj.b[2]).norm() < 1e-8);
        }
    }

    #[test]
    fn circles_with_equal_areal_speed_differ_by_rotation() {
        // a(t) = (cos t, sin t), b(t) = (cos(t+φ), sin(t+φ)): A is the rotation by φ.
        let phi = 0.7f64;
        let c = Curve::from_fn("circles", move |t: Jet<f64>| {
            let u = t + phi;
            [t.cos(), -u.cos(), t.sin(), u.sin()]
        });
        let p = phase_portraits(&c, (0.0, 6.0), 30).unwrap();
        assert!(p.dpair_residual < 1e-14);
        let w = dpair_witness(&p, 1.1).unwrap();
        let rot = Mat2::from_columns(&[Vector([phi.cos(), phi.sin()]), Vector([-phi.sin(), phi.cos()])]);
        assert!((w.a - rot).norm_max() < 1e-13);
        assert!(w.translation.norm() < 1e-13);
    }

    #[test]
    fn inflection_is_rejected() {
        // a(t) = (t, t³) inflects at t = 0.
        let c = Curve::from_fn("cubic", |t: Jet<f64>| [t, -t.cos(), t.powi(3), t.sin()]);
        let p = phase_portraits(&c, (-1.0, 1.0), 11).unwrap();
        assert!(matches!(dpair_witness(&p, 0.0), Err(Error::InflectionPoint { .. })));
    }
}
