//! Maurer–Cartan (Serret–Frenet) matrices of the three sections.
//!
//! For the 5×5 frame `ρ̃ = [[1, 0], [p, E]]` the matrix `K` satisfies
//! `dρ̃/dt = ρ̃·K`: column 0 of `K` expresses `p′` in the frame and column `j`
//! expresses `E_j′`.
//!
//! Sign conventions, each checked against a finite-difference derivative of
//! the frame:
//! - MinimalLagrangian: the matrix as usually displayed.
//! - Generic: the translation column is `e₁` as displayed, but the 𝔰𝔭(4) block
//!   is the negative of the displayed block.
//! - GramSchmidt: the negative of the displayed matrix.

use crate::error::{Error, Result};
use crate::frames::CrossSection;
use crate::invariants::InvariantReport;
use crate::linalg::Mat5;
use crate::scalar::Field;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaurerCartanData<T> {
    pub section: CrossSection,
    #[serde(serialize_with = "serialize_mat5")]
    pub k: Mat5<T>,
    /// The fifth-order invariant of the section.
    pub tau: T,
}

fn serialize_mat5<T: Serialize, S: serde::Serializer>(m: &Mat5<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.0.serialize(s)
}

fn check<T: Field>(section: CrossSection, measure: T) -> Result<()> {
    let m = measure.lead();
    if !m.is_finite() || m.abs() <= 1e-14 {
        return Err(Error::SectionNotTransverse { section: section.name(), measure: m });
    }
    Ok(())
}

/// τ of the minimal section (equal to the Gram–Schmidt τ).
pub fn tau_minimal<T: Field>(r: &InvariantReport<T>) -> T {
    let (k2, k3, k4) = (r.k2, r.k3, r.k4);
    (k2 * k2 * k4 - k2 * r.k2p * r.k3p + k2 * k3 * r.k2pp - k2 * k3 * k3) / (r.phi * r.phi)
}

/// τ recovered from `κ₄ = φ²τ/κ₂² + (κ₂′κ₃′ − κ₃κ₂″ + κ₃²)/κ₂`.
pub fn tau_gram_schmidt<T: Field>(r: &InvariantReport<T>) -> T {
    let (k2, k3) = (r.k2, r.k3);
    (r.k4 - (r.k2p * r.k3p - k3 * r.k2pp + k3 * k3) / k2) * k2 * k2 / (r.phi * r.phi)
}

/// τ of the generic (κ₁ ≠ 0) section.
pub fn tau_generic<T: Field>(r: &InvariantReport<T>) -> T {
    let (k1, k2, k4) = (r.k1, r.k2, r.k4);
    let (k1p, k1pp, k1ppp, k2p, k2pp) = (r.k1p, r.k1pp, r.k1ppp, r.k2p, r.k2pp);
    let phi = r.phi;
    let phi2 = phi * phi;
    let two = T::from_f64(2.0);
    let k1_2 = k1 * k1;
    let k1_3 = k1_2 * k1;
    let k1_4 = k1_3 * k1;
    k1_4 / phi2 * k4 + k1_3 * k2p / phi2 * k1ppp - (k1pp - k2) * k1_3 / phi2 * k2pp
        + two * k1p * k1_2 / phi2 * r.phi_p
        - two * k1_2 / phi * (two * k1pp - k2)
        - k1_2 / phi2
            * (k2 * k1p * k2p + k2 * k1pp * k1pp - two * k1pp * k2 * k2 + two * k2p * k2p * k1
                - k1pp * k1p * k2p
                + k2 * k2 * k2)
}

fn from_rows<T: Field>(rows: [[T; 5]; 4]) -> Mat5<T> {
    let mut m = Mat5::zeros();
    for (i, r) in rows.iter().enumerate() {
        m.0[i + 1] = *r;
    }
    m
}

/// Frenet matrix `K` of a section from the invariants of a fifth-order jet.
pub fn serret_matrix<T: Field>(section: CrossSection, r: &InvariantReport<T>) -> Result<MaurerCartanData<T>> {
    let z = T::zero();
    let o = T::one();
    let (k1, k2, k3) = (r.k1, r.k2, r.k3);
    let k1p = r.k1p;
    let phi = r.phi;
    let (k, tau) = match section {
        CrossSection::MinimalLagrangian => {
            check(section, k2 * phi)?;
            let t = tau_minimal(r);
            let k = from_rows([
                [o, z, k1 * t, -t, k1p * t / k2],
                [z, o, -k1 * k1p * t / k2, k1p * t / k2, -(k1p * k1p * t + k3) / (k2 * k2)],
                [z, k1, z, z, -o],
                [z, z, k2 + k1 * k1 * t, -k1 * t, k1 * k1p * t / k2],
            ]);
            (k, t)
        }
        CrossSection::Generic => {
            check(section, k1 * k1 * k1 * phi)?;
            let t = tau_generic(r);
            let k = from_rows([
                [o, z, z, -k2 / (k1 * k1), -o],
                [z, z, z, -o, -t],
                [z, k1, z, z, z],
                [z, z, -phi / (k1 * k1 * k1), z, z],
            ]);
            (k, t)
        }
        CrossSection::GramSchmidt => {
            check(section, k2 * k2 * phi)?;
            let t = tau_gram_schmidt(r);
            let q = phi / (k2 * k2);
            let k = from_rows([
                [k1p / k2, z, q, -k3 / (k2 * k2), z],
                [o, z, z, z, -t],
                [-k1, k2, z, z, z],
                [z, z, -k1 * q, -q, z],
            ]);
            (k, t)
        }
    };
    Ok(MaurerCartanData { section, k, tau })
}

/// Frenet matrix `A(κ)` for a Lagrangian curve (κ₁ ≡ 0) in arc length.
pub fn lagrangian_generator<T: Field>(k2: T, k3: T, k4: T, k2p: T, k2pp: T, k3p: T) -> Result<Mat5<T>> {
    let r = InvariantReport {
        k1: T::zero(),
        k2,
        k3,
        k4,
        k1p: T::zero(),
        k1pp: T::zero(),
        k1ppp: T::zero(),
        k2p,
        k2pp,
        k3p,
        phi: k2 * k2,
        phi_from_curvatures: k2 * k2,
        phi_p: T::from_f64(2.0) * k2 * k2p,
    };
    Ok(serret_matrix(CrossSection::MinimalLagrangian, &r)?.k)
}

/// `A(κ)` for constant curvatures with κ₂ = 1.
pub fn constant_generator<T: Field>(k3: T, k4: T) -> Mat5<T> {
    let z = T::zero();
    lagrangian_generator(T::one(), k3, k4, z, z, z).expect("κ₂ = 1 is transverse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{jet, Curve};
    use crate::frames::frame;
    use crate::invariants::curvatures;
    use crate::jet::Jet;
    use crate::scalar::Elementary;
    use crate::symplectic::{algebra_defect, expm, AlgebraElement};

    fn wiggle() -> Curve<f64> {
        Curve::from_fn("wiggle", |t: Jet<f64>| {
            [
                t.sin() + t * t * 0.3,
                (t * 0.7).cosh(),
                (t * 1.3).cos() * 0.5 + t.powi(3) * 0.1,
                t.exp() * 0.2 - t,
            ]
        })
    }

    /// `ρ̃⁻¹ dρ̃/dt` by central differences of the frame (independent oracle).
    fn fd_frenet(c: &Curve<f64>, s: CrossSection, t: f64, h: f64) -> Mat5<f64> {
        let f = |t: f64| frame(s, &jet(c, t, 5).unwrap()).unwrap().to_matrix5();
        let d = (f(t - 2.0 * h) - f(t + 2.0 * h) + (f(t + h) - f(t - h)).scale(8.0)).scale(1.0 / (12.0 * h));
        f(t).inverse().unwrap() * d
    }

    #[test]
    fn matches_finite_difference_oracle_all_sections() {
        let c = wiggle();
        for &t in &[-0.3, 0.25, 0.8] {
            let rep = curvatures(&jet(&c, t, 5).unwrap()).unwrap();
            for s in CrossSection::ALL {
                let k = serret_matrix(s, &rep).unwrap().k;
                let fd = fd_frenet(&c, s, t, 1e-3);
                let err = (k - fd).norm_max() / k.norm_max().max(1.0);
                assert!(err < 1e-7, "{s} at {t}: {err:.3e}\n{k:?}\n{fd:?}");
            }
        }
    }

    #[test]
    fn matrices_lie_in_algebra() {
        let rep = curvatures(&jet(&wiggle(), 0.1, 5).unwrap()).unwrap();
        for s in CrossSection::ALL {
            let k = serret_matrix(s, &rep).unwrap().k;
            assert!(AlgebraElement::from_matrix5(&k).is_ok(), "{s}");
            let mut block = crate::linalg::Mat4::zeros();
            for i in 0..4 {
                for j in 0..4 {
                    block.0[i][j] = k.0[i + 1][j + 1];
                }
            }
            assert!(algebra_defect(&block) < 1e-12);
        }
    }

    #[test]
    fn arc_length_lagrangian_reduces_to_constant_generator() {
        let (k3, k4) = (1.3f64, 0.4f64);
        let a = constant_generator(k3, k4);
        // Lower block [[0,0,κ₃²−κ₄,0],[1,0,0,−κ₃],[0,0,0,−1],[0,1,0,0]], translation e₁.
        let expect = [
            [1.0, 0.0, 0.0, k3 * k3 - k4, 0.0],
            [0.0, 1.0, 0.0, 0.0, -k3],
            [0.0, 0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..5 {
                assert!((a.0[i + 1][j] - expect[i][j]).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn type_iv_generator_is_nilpotent_polynomial() {
        let a = constant_generator(0.0f64, 0.0);
        let s = 1.7f64;
        let g = expm(&a, s);
        // exp(sA) = I + sA + s²A²/2 + s³A³/6 + s⁴A⁴/24 exactly.
        let a2 = a * a;
        let a3 = a2 * a;
        let a4 = a3 * a;
        assert!((a4 * a).norm_max() == 0.0);
        let poly = Mat5::identity() + a.scale(s) + a2.scale(s * s / 2.0) + a3.scale(s.powi(3) / 6.0) + a4.scale(s.powi(4) / 24.0);
        assert!((g - poly).norm_max() < 1e-13);
        // Curve p(s) = (s, s²/2, −s⁴/24, s³/6), a Type IV curve up to congruence.
        let p = [g.0[1][0], g.0[2][0], g.0[3][0], g.0[4][0]];
        assert!((p[0] - s).abs() < 1e-14);
        assert!((p[1] - s * s / 2.0).abs() < 1e-14);
        assert!((p[2] + s.powi(4) / 24.0).abs() < 1e-13);
        assert!((p[3] - s.powi(3) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn tau_formulas_agree() {
        let rep = curvatures(&jet(&wiggle(), 0.5, 5).unwrap()).unwrap();
        let a = tau_minimal(&rep);
        let b = tau_gram_schmidt(&rep);
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn transversality_errors() {
        let mut rep = curvatures(&jet(&wiggle(), 0.5, 5).unwrap()).unwrap();
        rep.k1 = 0.0;
        assert!(serret_matrix(CrossSection::Generic, &rep).is_err());
        rep.k2 = 0.0;
        assert!(serret_matrix(CrossSection::MinimalLagrangian, &rep).is_err());
        assert!(serret_matrix(CrossSection::GramSchmidt, &rep).is_err());
    }
}
