//! Null-curve check for the osculating Lagrangian planes `[γ′∧γ″]`.
//!
//! With a frame satisfying `E₁ = γ′`, `E₂ = γ″`, the tangent of the
//! osculating curve in the Lagrangian Grassmannian is the symmetric block
//! `c` formed by the `E₃, E₄` components of `E₁′, E₂′` in `E⁻¹E′`. The curve
//! is null when `det c = c¹₁c²₂ − (c²₁)² = 0`.

use crate::curve::{grid, jet, Curve};
use crate::error::{Error, Result};
use crate::frames::frame_minimal;
use crate::linalg::{Mat, Mat2};
use crate::scalar::Real;
use serde::Serialize;

/// The block `c = ((c¹₁, c¹₂), (c²₁, c²₂))` at `t`, from the exact derivative
/// of the frame.
pub fn osculating_block<T: Real>(c: &Curve<T>, t: T) -> Result<Mat2<T>> {
    let j = jet(c, t, 5)?;
    let fail = || Error::FrameCompletionFailed { t: t.to_f64_lossless() };
    let f = frame_minimal(&j.to_dual()).map_err(|_| fail())?;
    let e = f.linear.map(|x| x.value());
    let de = f.linear.map(|x| x.derivative(1));
    let m = e.inverse().ok_or_else(fail)? * de;
    Ok(Mat([[m[(2, 0)], m[(2, 1)]], [m[(3, 0)], m[(3, 1)]]]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OsculatingReport {
    /// max |c¹₁c²₂ − (c²₁)²|.
    pub max_null_residual: f64,
    /// min (c¹₁)² + (c²₂)² + (c²₁)²; positive when the osculating curve is
    /// regular.
    pub min_nondegeneracy: f64,
    pub samples: usize,
}

pub fn osculating_null_check<T: Real>(c: &Curve<T>, window: (T, T), samples: usize) -> Result<OsculatingReport> {
    let mut out = OsculatingReport { max_null_residual: 0.0, min_nondegeneracy: f64::INFINITY, samples };
    for t in grid(window.0, window.1, samples) {
        let b = osculating_block(c, t)?;
        let (c11, c21, c22) = (b[(0, 0)], b[(1, 0)], b[(1, 1)]);
        let null = (c11 * c22 - c21 * c21).abs().to_f64_lossless();
        let witness = (c11 * c11 + c22 * c22 + c21 * c21).to_f64_lossless();
        out.max_null_residual = out.max_null_residual.max(null);
        out.min_nondegeneracy = out.min_nondegeneracy.min(witness);
    }
    Ok(out)
}
