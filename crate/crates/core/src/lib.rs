//! Affine symplectic geometry of curves in ℝ⁴.
//!
//! The numerical core is generic over the scalar type through
//! [`scalar::Real`]; plain `f64` aliases are provided below. Truncated
//! Taylor series ([`jet::Jet`]) implement the same traits, which is how
//! exact derivatives flow through frames and invariants.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod closedness;
pub mod curve;
pub mod error;
pub mod frames;
pub mod geodesics;
pub mod invariants;
pub mod io;
pub mod jet;
pub mod lagrangian;
pub mod linalg;
pub mod osculating;
pub mod portrait;
pub mod quad;
pub mod reconstruct;
pub mod sampling;
pub mod scalar;
pub mod serret;
pub mod symplectic;
pub mod tori;

pub use classify::{classify, generate, CaseTag};
pub use error::{Error, Result};
pub use frames::CrossSection;
pub use scalar::{Elementary, Field, Real};
pub use symplectic::lambda;

pub type Vec4 = linalg::Vec4<f64>;
pub type Mat4 = linalg::Mat4<f64>;
pub type Mat5 = linalg::Mat5<f64>;
pub type GroupElement = symplectic::GroupElement<f64>;
pub type MovingFrame = symplectic::MovingFrame<f64>;
pub type AlgebraElement = symplectic::AlgebraElement<f64>;
pub type Jet = jet::Jet<f64>;
pub type Curve = curve::Curve<f64>;
pub type CurveJet = curve::CurveJet<f64>;
pub type SampledCurve = curve::SampledCurve<f64>;
pub type CurvatureProfile = reconstruct::CurvatureProfile<f64>;
pub type ClassCase = classify::ClassCase<f64>;
pub type InvariantReport = invariants::InvariantReport<f64>;
pub type ReconstructionResult = reconstruct::ReconstructionResult<f64>;
