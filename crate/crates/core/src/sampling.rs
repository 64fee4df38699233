//! Seeded random inputs for property sweeps and self-checks.

use crate::classify::{CaseTag, ClassCase};
use crate::curve::{Curve, CurveJet};
use crate::jet::Jet;
use crate::linalg::Vector;
use crate::symplectic::{AlgebraElement, GroupElement};
use rand::Rng;

/// Algebra element with coefficients uniform in `[−scale, scale]`.
pub fn random_algebra<R: Rng>(rng: &mut R, scale: f64) -> AlgebraElement<f64> {
    AlgebraElement { coeffs: std::array::from_fn(|_| rng.gen_range(-scale..=scale)) }
}

/// `exp` of a random algebra element: a group element of moderate size.
pub fn random_group<R: Rng>(rng: &mut R) -> GroupElement<f64> {
    random_algebra(rng, 0.4).exp(1.0)
}

/// Jet of order `k` with standard-normal-like columns (uniform in [−1, 1]).
pub fn random_jet<R: Rng>(rng: &mut R, k: usize) -> CurveJet<f64> {
    let t = rng.gen_range(-1.0..1.0);
    let cols = (0..=k).map(|_| Vector(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))).collect();
    CurveJet::new(t, cols)
}

/// A smooth closed-form curve: each coordinate is a short random
/// trigonometric polynomial.
pub fn random_smooth_curve<R: Rng>(rng: &mut R) -> Curve<f64> {
    let coeffs: Vec<[f64; 4]> = (0..4).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect();
    let freqs: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..2.0));
    Curve::from_fn("random trig", move |t: Jet<f64>| {
        std::array::from_fn(|i| {
            let c = coeffs[i];
            let w = freqs[i];
            let (s1, c1) = (t * w).sin_cos();
            let (s2, _) = (t * (w * 1.7 + 0.3)).sin_cos();
            s1 * c[0] + c1 * c[1] + s2 * c[2] + t * t * (0.1 * c[3]) + t * (i as f64 + 1.0)
        })
    })
}

/// Valid random parameters for a case tag.
pub fn random_case<R: Rng>(rng: &mut R, tag: CaseTag) -> ClassCase<f64> {
    let (mu, nu) = match tag {
        CaseTag::I2a | CaseTag::I2b => {
            let mu = rng.gen_range(0.6..2.0);
            (mu, rng.gen_range(0.2..mu - 0.2))
        }
        CaseTag::I1 | CaseTag::I2c => (rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5)),
        CaseTag::IV => (0.0, 0.0),
        _ => (rng.gen_range(0.3..2.0), 0.0),
    };
    ClassCase::new(tag, mu, nu).expect("parameters drawn inside the valid region")
}
