//! Symplectic curvatures and their derivatives.
//!
//! With `κᵢ = Λ(X⁽ⁱ⁾, X⁽ⁱ⁺¹⁾)` the derivatives needed by the frames follow
//! from Λ-identities on a fifth-order jet:
//!
//! | invariant | formula |
//! |-----------|---------|
//! | κ₁′ | Λ(X⁽¹⁾, X⁽³⁾) |
//! | κ₁″ | Λ(X⁽¹⁾, X⁽⁴⁾) + κ₂ |
//! | κ₁‴ | Λ(X⁽¹⁾, X⁽⁵⁾) + 2κ₂′ |
//! | κ₂′ | Λ(X⁽²⁾, X⁽⁴⁾) |
//! | κ₂″ | Λ(X⁽²⁾, X⁽⁵⁾) + κ₃ |
//! | κ₃′ | Λ(X⁽³⁾, X⁽⁵⁾) |
//!
//! The κ₂″ row reads `Λ(X⁽²⁾,X⁽⁵⁾) = κ₂″ − κ₃`; the form `κ₂′ − κ₃` found in
//! some write-ups does not hold and is not used.
//!
//! `φ = det(X⁽¹⁾..X⁽⁴⁾)` is computed directly and also through
//! `κ₂² − κ₁κ₃ + κ₁′κ₂′ − κ₂κ₁″`; the two must agree.

use crate::curve::CurveJet;
use crate::error::Result;
use crate::jet::Jet;
use crate::linalg::Mat4;
use crate::scalar::{Field, Real};
use crate::symplectic::lambda;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantReport<T> {
    pub k1: T,
    pub k2: T,
    pub k3: T,
    pub k4: T,
    pub k1p: T,
    pub k1pp: T,
    pub k1ppp: T,
    pub k2p: T,
    pub k2pp: T,
    pub k3p: T,
    /// `det(X⁽¹⁾..X⁽⁴⁾)`.
    pub phi: T,
    /// `φ` through the curvature identity.
    pub phi_from_curvatures: T,
    /// `φ′ = det(X⁽¹⁾, X⁽²⁾, X⁽³⁾, X⁽⁵⁾)`.
    pub phi_p: T,
}

/// `κ₂² − κ₁κ₃ + κ₁′κ₂′ − κ₂κ₁″`.
pub fn phi_identity<T: Field>(k1: T, k2: T, k3: T, k1p: T, k2p: T, k1pp: T) -> T {
    k2 * k2 - k1 * k3 + k1p * k2p - k2 * k1pp
}

/// Curvatures and derivative invariants from a jet of order ≥ 5.
pub fn curvatures<T: Field>(jet: &CurveJet<T>) -> Result<InvariantReport<T>> {
    jet.require(5)?;
    let x = |i: usize| jet.x(i);
    let l = |i: usize, j: usize| lambda(&x(i), &x(j));
    let k1 = l(1, 2);
    let k2 = l(2, 3);
    let k3 = l(3, 4);
    let k4 = l(4, 5);
    let k1p = l(1, 3);
    let k2p = l(2, 4);
    let k1pp = l(1, 4) + k2;
    let k1ppp = l(1, 5) + k2p + k2p;
    let k2pp = l(2, 5) + k3;
    let k3p = l(3, 5);
    let phi = Mat4::from_columns(&[x(1), x(2), x(3), x(4)]).det();
    let phi_p = Mat4::from_columns(&[x(1), x(2), x(3), x(5)]).det();
    Ok(InvariantReport {
        k1,
        k2,
        k3,
        k4,
        k1p,
        k1pp,
        k1ppp,
        k2p,
        k2pp,
        k3p,
        phi,
        phi_from_curvatures: phi_identity(k1, k2, k3, k1p, k2p, k1pp),
        phi_p,
    })
}

impl<T: Field> InvariantReport<T> {
    /// `|φ − φ_identity|` relative to `max(1, |φ|)`.
    pub fn phi_defect(&self) -> f64 {
        let d = (self.phi - self.phi_from_curvatures).lead().abs();
        d / self.phi.lead().abs().max(1.0)
    }

    pub fn curvatures(&self) -> [T; 4] {
        [self.k1, self.k2, self.k3, self.k4]
    }
}

impl<T: Real> InvariantReport<T> {
    /// Build a report from curvature functions given as series in arc length
    /// (at least four coefficients). `φ` comes from the identity and `φ′`
    /// from its derivative.
    pub fn from_curvature_series(k: &[Jet<T>; 4]) -> Self {
        let [k1, k2, k3, k4] = *k;
        let d1 = |j: Jet<T>| j.derivative(1);
        let phi = phi_identity(k1, k2, k3, k1.differentiate(), k2.differentiate(), k1.differentiate().differentiate());
        InvariantReport {
            k1: k1.value(),
            k2: k2.value(),
            k3: k3.value(),
            k4: k4.value(),
            k1p: d1(k1),
            k1pp: k1.derivative(2),
            k1ppp: k1.derivative(3),
            k2p: d1(k2),
            k2pp: k2.derivative(2),
            k3p: d1(k3),
            phi: phi.value(),
            phi_from_curvatures: phi.value(),
            phi_p: phi.derivative(1),
        }
    }

    /// Report for an arc-length Lagrangian curve (κ₁ ≡ 0) from κ₂, κ₃, κ₄ and
    /// the derivatives the Frenet matrix uses.
    pub fn lagrangian(k2: T, k3: T, k4: T, k2p: T, k2pp: T, k3p: T) -> Self {
        let z = T::zero();
        InvariantReport {
            k1: z,
            k2,
            k3,
            k4,
            k1p: z,
            k1pp: z,
            k1ppp: z,
            k2p,
            k2pp,
            k3p,
            phi: k2 * k2,
            phi_from_curvatures: k2 * k2,
            phi_p: T::from_f64(2.0) * k2 * k2p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{jet, Curve};
    use crate::scalar::Elementary;
    use approx::assert_relative_eq;

    fn type_iv() -> Curve<f64> {
        Curve::from_fn("IV", |t: Jet<f64>| {
            let r24 = 24f64.sqrt();
            let r12 = 12f64.sqrt();
            [
                t * (1.0 / r24),
                t.powi(2) * (1.0 / r12),
                -t.powi(4) * (1.0 / r24),
                t.powi(3) * (1.0 / r12),
            ]
        })
    }

    #[test]
    fn type_iv_curvatures() {
        for &t in &[-1.3, 0.0, 0.7, 2.0] {
            let r = curvatures(&jet(&type_iv(), t, 5).unwrap()).unwrap();
            assert!(r.k1.abs() < 1e-14);
            assert_relative_eq!(r.k2, 1.0, epsilon = 1e-13);
            assert!(r.k3.abs() < 1e-13);
            assert!(r.k4.abs() < 1e-13);
            assert_relative_eq!(r.phi, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn i2b_figure_values() {
        let (mu, nu) = (1.5f64, 0.5f64);
        let r = (mu * mu - nu * nu).sqrt();
        let an = 1.0 / (r * nu.powf(1.5));
        let am = 1.0 / (r * mu.powf(1.5));
        let c = Curve::from_fn("I.2.b", move |t: Jet<f64>| {
            [(t * nu).sin() * an, (t * mu).cos() * am, (t * nu).cos() * an, (t * mu).sin() * am]
        });
        let rep = curvatures(&jet(&c, 0.37, 5).unwrap()).unwrap();
        assert_relative_eq!(rep.k3, 2.5, epsilon = 1e-12);
        assert_relative_eq!(rep.k4, 5.6875, epsilon = 1e-12);
    }

    #[test]
    fn needs_order_five() {
        let j = jet(&type_iv(), 0.0, 4).unwrap();
        assert!(curvatures(&j).is_err());
    }

    #[test]
    fn derivative_identities_against_series() {
        // κᵢ as series in t, differentiated directly.
        let c = Curve::from_fn("wiggle", |t: Jet<f64>| {
            [
                t.sin() + t * t * 0.3,
                (t * 0.7).cosh(),
                (t * 1.3).cos() * 0.5 + t.powi(3) * 0.1,
                t.exp() * 0.2 - t,
            ]
        });
        let t0 = 0.41;
        let s = c.series(t0, 10).unwrap();
        let d = |k: usize| -> crate::linalg::Vec4<Jet<f64>> {
            let mut v = s;
            for _ in 0..k {
                v = v.map(|x| x.differentiate());
            }
            crate::linalg::Vector(v)
        };
        let ks: Vec<Jet<f64>> = (1..=4).map(|i| lambda(&d(i), &d(i + 1))).collect();
        let rep = curvatures(&jet(&c, t0, 5).unwrap()).unwrap();
        let tol = 1e-9;
        assert_relative_eq!(rep.k1p, ks[0].derivative(1), max_relative = tol);
        assert_relative_eq!(rep.k1pp, ks[0].derivative(2), max_relative = tol);
        assert_relative_eq!(rep.k1ppp, ks[0].derivative(3), max_relative = tol);
        assert_relative_eq!(rep.k2p, ks[1].derivative(1), max_relative = tol);
        assert_relative_eq!(rep.k2pp, ks[1].derivative(2), max_relative = tol);
        assert_relative_eq!(rep.k3p, ks[2].derivative(1), max_relative = tol);
        assert!(rep.phi_defect() < 1e-10);
        let phi_series = {
            let m = Mat4::from_columns(&[d(1), d(2), d(3), d(4)]);
            m.det()
        };
        assert_relative_eq!(rep.phi_p, phi_series.derivative(1), max_relative = tol);
    }
}
