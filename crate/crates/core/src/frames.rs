//! Moving frames for the three cross-sections.
//!
//! Each frame writes the jet columns as `(X⁽¹⁾..X⁽⁴⁾) = E·N`, where `N`
//! holds the normalized invariants of the section and `E` the frame vectors;
//! the origin is `X⁽⁰⁾`. Frames are equivariant: the frame of `g⋆jet` is
//! `g∘frame(jet)`.
//!
//! All functions are generic over [`Field`], so passing a jet whose entries
//! are first-order series yields the frame together with its derivative.

use crate::curve::CurveJet;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Mat4, Vec4};
use crate::scalar::Field;
use crate::symplectic::{lambda, GroupElement, MovingFrame};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Transversality guard relative to the natural scale of the jet.
pub const TRANSVERSALITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossSection {
    /// Requires κ₁ ≠ 0.
    #[serde(rename = "generic")]
    Generic,
    /// Requires κ₂ ≠ 0; specializes to Lagrangian curves.
    #[serde(rename = "minimal")]
    MinimalLagrangian,
    /// Symplectic Gram–Schmidt; requires κ₂ ≠ 0.
    #[serde(rename = "gram-schmidt")]
    GramSchmidt,
}

impl CrossSection {
    pub const ALL: [CrossSection; 3] =
        [CrossSection::Generic, CrossSection::MinimalLagrangian, CrossSection::GramSchmidt];

    pub fn name(&self) -> &'static str {
        match self {
            CrossSection::Generic => "generic",
            CrossSection::MinimalLagrangian => "minimal",
            CrossSection::GramSchmidt => "gram-schmidt",
        }
    }
}

impl fmt::Display for CrossSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CrossSection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(CrossSection::Generic),
            "minimal" | "minimal-lagrangian" => Ok(CrossSection::MinimalLagrangian),
            "gram-schmidt" | "gs" => Ok(CrossSection::GramSchmidt),
            _ => Err(Error::InvalidParameters(format!("unknown cross-section '{s}'"))),
        }
    }
}

/// Fourth-order invariants used to build the frames.
#[derive(Clone, Copy, Debug)]
struct Low<T> {
    k1: T,
    k2: T,
    k3: T,
    k1p: T,
    k1pp: T,
    k2p: T,
    phi: T,
    scale: f64,
}

fn low_invariants<T: Field>(jet: &CurveJet<T>) -> Result<Low<T>> {
    jet.require(4)?;
    let x = |i: usize| jet.x(i);
    let l = |i: usize, j: usize| lambda(&x(i), &x(j));
    let k2 = l(2, 3);
    let norms: Vec<f64> = (1..=4).map(|i| x(i).norm_lead()).collect();
    Ok(Low {
        k1: l(1, 2),
        k2,
        k3: l(3, 4),
        k1p: l(1, 3),
        k1pp: l(1, 4) + k2,
        k2p: l(2, 4),
        phi: Mat4::from_columns(&[x(1), x(2), x(3), x(4)]).det(),
        scale: norms.iter().product(),
    })
}

fn guard(section: CrossSection, measure: f64, scale: f64) -> Result<()> {
    if !measure.is_finite() || measure.abs() <= TRANSVERSALITY_TOL * scale {
        return Err(Error::SectionNotTransverse { section: section.name(), measure });
    }
    Ok(())
}

/// Normalized invariants `N` with `(X⁽¹⁾..X⁽⁴⁾) = E·N` (columns are the
/// invariantized jet columns).
pub fn normalized_invariants<T: Field>(section: CrossSection, jet: &CurveJet<T>) -> Result<Mat4<T>> {
    let v = low_invariants(jet)?;
    let z = T::zero();
    let o = T::one();
    let n = match section {
        CrossSection::MinimalLagrangian => {
            guard(section, (v.k2 * v.phi).lead(), v.scale * jet_pair_scale(jet, 2, 3))?;
            Mat([
                [o, z, z, z],
                [z, o, z, -v.k3 / v.k2],
                [z, v.k1, v.k1p, v.k1pp - v.k2],
                [z, z, v.k2, v.k2p],
            ])
        }
        CrossSection::Generic => {
            let s1 = jet_pair_scale(jet, 1, 2);
            guard(section, (v.k1 * v.k1 * v.k1 * v.phi).lead(), v.scale * s1 * s1 * s1)?;
            let two = T::from_f64(2.0);
            Mat([
                [o, z, -v.k2 / v.k1, -v.k2p / v.k1],
                [z, z, -v.k1, -two * v.k1p],
                [z, v.k1, v.k1p, v.k1pp - v.k2],
                [z, z, z, v.phi / (v.k1 * v.k1)],
            ])
        }
        CrossSection::GramSchmidt => {
            let r = gram_schmidt_matrix(jet)?;
            r.inverse().ok_or(Error::SectionNotTransverse { section: section.name(), measure: 0.0 })?
        }
    };
    Ok(n)
}

fn jet_pair_scale<T: Field>(jet: &CurveJet<T>, i: usize, j: usize) -> f64 {
    jet.x(i).norm_lead() * jet.x(j).norm_lead()
}

/// The Gram–Schmidt matrix `R` with `Q = (X⁽¹⁾..X⁽⁴⁾)·R` symplectic, built
/// from the pairings `Lᵢⱼ = Λ(X⁽ⁱ⁾, X⁽ʲ⁾)`.
pub fn gram_schmidt_matrix<T: Field>(jet: &CurveJet<T>) -> Result<Mat4<T>> {
    let v = low_invariants(jet)?;
    let s23 = jet_pair_scale(jet, 2, 3);
    guard(CrossSection::GramSchmidt, (v.k2 * v.k2 * v.phi).lead(), v.scale * s23 * s23)?;
    let x = |i: usize| jet.x(i);
    let l = |i: usize, j: usize| lambda(&x(i), &x(j));
    let (l12, l13, l23, l24, l34) = (l(1, 2), l(1, 3), l(2, 3), l(2, 4), l(3, 4));
    let phi = v.phi;
    let z = T::zero();
    let o = T::one();
    Ok(Mat([
        [z, o, z, z],
        [o, -l13 / l23, z, -l34 / phi],
        [z, l12 / l23, o / l23, l24 / phi],
        [z, z, z, -l23 / phi],
    ]))
}

fn jet_matrix<T: Field>(jet: &CurveJet<T>) -> Mat4<T> {
    Mat4::from_columns(&[jet.x(1), jet.x(2), jet.x(3), jet.x(4)])
}

/// Frame for the section with κ₂ ≠ 0 that specializes to Lagrangian curves.
pub fn frame_minimal<T: Field>(jet: &CurveJet<T>) -> Result<MovingFrame<T>> {
    frame(CrossSection::MinimalLagrangian, jet)
}

/// Frame for the section with κ₁ ≠ 0.
pub fn frame_generic<T: Field>(jet: &CurveJet<T>) -> Result<MovingFrame<T>> {
    frame(CrossSection::Generic, jet)
}

/// Symplectic Gram–Schmidt frame.
pub fn frame_gram_schmidt<T: Field>(jet: &CurveJet<T>) -> Result<MovingFrame<T>> {
    frame(CrossSection::GramSchmidt, jet)
}

pub fn frame<T: Field>(section: CrossSection, jet: &CurveJet<T>) -> Result<MovingFrame<T>> {
    let x = jet_matrix(jet);
    let e = match section {
        CrossSection::GramSchmidt => x * gram_schmidt_matrix(jet)?,
        _ => {
            let n = normalized_invariants(section, jet)?;
            let ninv = n.inverse().ok_or(Error::SectionNotTransverse {
                section: section.name(),
                measure: 0.0,
            })?;
            x * ninv
        }
    };
    Ok(GroupElement::from_parts_unchecked(jet.x(0), e))
}

/// Frame vectors as an array `[E₁, E₂, E₃, E₄]`.
pub fn basis<T: Field>(f: &MovingFrame<T>) -> [Vec4<T>; 4] {
    [f.e(1), f.e(2), f.e(3), f.e(4)]
}
