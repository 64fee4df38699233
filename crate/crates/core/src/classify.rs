//! Constant-curvature Lagrangian curves.
//!
//! In arc length with `κ₂ = 1` and constant `κ₃, κ₄` the Frenet matrix is
//! constant, so the curve is an orbit of a one-parameter subgroup. Its shape
//! is decided by the roots of `π(λ) = λ⁴ + κ₃λ² + κ₃² − κ₄`, i.e. by the
//! signs of `p = κ₃² − κ₄`, `q = 4κ₄ − 3κ₃²` and `κ₃`:
//!
//! | tag   | condition                 | κ₃          | κ₄              |
//! |-------|---------------------------|-------------|-----------------|
//! | I.1   | q < 0                     | 2(ν² − μ²)  | κ₃² − (μ²+ν²)²  |
//! | I.2.a | p, q > 0, κ₃ < 0          | −(μ² + ν²)  | μ⁴ + μ²ν² + ν⁴  |
//! | I.2.b | p, q > 0, κ₃ > 0          | μ² + ν²     | μ⁴ + μ²ν² + ν⁴  |
//! | I.2.c | p < 0 < q                 | μ² − ν²     | μ⁴ − μ²ν² + ν⁴  |
//! | II.1  | p = 0, κ₃ < 0             | −μ²         | μ⁴              |
//! | II.2  | p = 0, κ₃ > 0             | μ²          | μ⁴              |
//! | III.1 | q = 0, κ₃ > 0             | 2μ²         | 3μ⁴             |
//! | III.2 | q = 0, κ₃ < 0             | −2μ²        | 3μ⁴             |
//! | IV    | κ₃ = κ₄ = 0               | 0           | 0               |

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{Mat5, Vec4, Vector};
use crate::scalar::{Elementary, Real};
use crate::serret::constant_generator;
use crate::symplectic::AlgebraElement;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    I1,
    I2a,
    I2b,
    I2c,
    II1,
    II2,
    III1,
    III2,
    IV,
}

impl CaseTag {
    pub const ALL: [CaseTag; 9] = [
        CaseTag::I1,
        CaseTag::I2a,
        CaseTag::I2b,
        CaseTag::I2c,
        CaseTag::II1,
        CaseTag::II2,
        CaseTag::III1,
        CaseTag::III2,
        CaseTag::IV,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::I1 => "I.1",
            CaseTag::I2a => "I.2.a",
            CaseTag::I2b => "I.2.b",
            CaseTag::I2c => "I.2.c",
            CaseTag::II1 => "II.1",
            CaseTag::II2 => "II.2",
            CaseTag::III1 => "III.1",
            CaseTag::III2 => "III.2",
            CaseTag::IV => "IV",
        }
    }

    /// Number of free parameters (μ, ν) of the family.
    pub fn parameter_count(&self) -> usize {
        match self {
            CaseTag::I1 | CaseTag::I2a | CaseTag::I2b | CaseTag::I2c => 2,
            CaseTag::II1 | CaseTag::II2 | CaseTag::III1 | CaseTag::III2 => 1,
            CaseTag::IV => 0,
        }
    }

    /// Critical points of symplectic length: κ₄ = κ₃².
    pub fn is_geodesic(&self) -> bool {
        matches!(self, CaseTag::II1 | CaseTag::II2 | CaseTag::IV)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameters(format!("unknown case tag '{s}'")))
    }
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A case tag with its parameters; unused parameters are zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassCase<T> {
    pub tag: CaseTag,
    pub mu: T,
    pub nu: T,
}

impl<T: Real> ClassCase<T> {
    /// Validated constructor: I.2.a and I.2.b need μ > ν > 0, I.1 and I.2.c
    /// need μ, ν > 0, II and III need μ > 0.
    pub fn new(tag: CaseTag, mu: T, nu: T) -> Result<Self> {
        let z = T::zero();
        let finite = mu.is_finite() && nu.is_finite();
        let ok = finite
            && match tag {
                CaseTag::I2a | CaseTag::I2b => mu > nu && nu > z,
                CaseTag::I1 | CaseTag::I2c => mu > z && nu > z,
                CaseTag::II1 | CaseTag::II2 | CaseTag::III1 | CaseTag::III2 => mu > z,
                CaseTag::IV => true,
            };
        if !ok {
            return Err(Error::InvalidParameters(format!("invalid parameters for {tag}: mu = {mu}, nu = {nu}")));
        }
        let (mu, nu) = match tag.parameter_count() {
            2 => (mu, nu),
            1 => (mu, z),
            _ => (z, z),
        };
        Ok(ClassCase { tag, mu, nu })
    }

    /// The constant curvatures `(κ₃, κ₄)` of the family member.
    pub fn curvatures(&self) -> (T, T) {
        let (m2, n2) = (self.mu * self.mu, self.nu * self.nu);
        let two = T::from_f64(2.0);
        let three = T::from_f64(3.0);
        match self.tag {
            CaseTag::I1 => {
                let k3 = two * (n2 - m2);
                let r = m2 + n2;
                (k3, k3 * k3 - r * r)
            }
            CaseTag::I2a => (-(m2 + n2), m2 * m2 + m2 * n2 + n2 * n2),
            CaseTag::I2b => (m2 + n2, m2 * m2 + m2 * n2 + n2 * n2),
            CaseTag::I2c => (m2 - n2, m2 * m2 - m2 * n2 + n2 * n2),
            CaseTag::II1 => (-m2, m2 * m2),
            CaseTag::II2 => (m2, m2 * m2),
            CaseTag::III1 => (two * m2, three * m2 * m2),
            CaseTag::III2 => (-two * m2, three * m2 * m2),
            CaseTag::IV => (T::zero(), T::zero()),
        }
    }

    /// Eigenvalues of the constant Frenet matrix as `(re, im)` pairs: zero
    /// and the four roots of `π`.
    pub fn spectrum(&self) -> Vec<(T, T)> {
        let (m, n, z) = (self.mu, self.nu, T::zero());
        let quad = |a: (T, T), b: (T, T)| vec![(z, z), a, (-a.0, -a.1), b, (-b.0, -b.1)];
        match self.tag {
            CaseTag::I1 => quad((m, n), (m, -n)),
            CaseTag::I2a => quad((m, z), (n, z)),
            CaseTag::I2b => quad((z, m), (z, n)),
            CaseTag::I2c => quad((n, z), (z, m)),
            CaseTag::II1 => quad((m, z), (z, z)),
            CaseTag::II2 => quad((z, m), (z, z)),
            CaseTag::III1 => quad((z, m), (z, m)),
            CaseTag::III2 => quad((m, z), (m, z)),
            CaseTag::IV => vec![(z, z); 5],
        }
    }

    /// The constant Frenet matrix `A(κ₃, κ₄)`.
    pub fn generator(&self) -> Mat5<T> {
        let (k3, k4) = self.curvatures();
        constant_generator(k3, k4)
    }
}

/// Relative tolerance of the boundary comparisons.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Classify constant curvatures; boundary ties go to the more degenerate case.
pub fn classify<T: Real>(k3: T, k4: T) -> ClassCase<T> {
    let z = T::zero();
    let two = T::from_f64(2.0);
    let tol = T::from_f64(BOUNDARY_TOL) * T::one().max(k3 * k3).max(k4.abs());
    let p = k3 * k3 - k4;
    let q = T::from_f64(4.0) * k4 - T::from_f64(3.0) * k3 * k3;
    let case = |tag, mu, nu| ClassCase { tag, mu, nu };
    if k3 * k3 <= tol && k4.abs() <= tol {
        return case(CaseTag::IV, z, z);
    }
    if p.abs() <= tol {
        return if k3 < z { case(CaseTag::II1, (-k3).sqrt(), z) } else { case(CaseTag::II2, k3.sqrt(), z) };
    }
    if q.abs() <= tol {
        return if k3 > z {
            case(CaseTag::III1, (k3 / two).sqrt(), z)
        } else {
            case(CaseTag::III2, (-k3 / two).sqrt(), z)
        };
    }
    if q < z {
        let r = p.sqrt();
        let mu = ((r - k3 / two) / two).sqrt();
        let nu = ((r + k3 / two) / two).sqrt();
        return case(CaseTag::I1, mu, nu);
    }
    let d = q.sqrt();
    if k3 < -d {
        case(CaseTag::I2a, ((-k3 + d) / two).sqrt(), ((-k3 - d) / two).sqrt())
    } else if k3 > d {
        case(CaseTag::I2b, ((k3 + d) / two).sqrt(), ((k3 - d) / two).sqrt())
    } else {
        case(CaseTag::I2c, ((k3 + d) / two).sqrt(), ((d - k3) / two).sqrt())
    }
}

/// Relative distance to the lines μ² = 3ν², ν² = 3μ² where the standard I.1
/// parametrization has vanishing denominators.
pub const I1_SINGULAR_BAND: f64 = 1e-3;

/// Arc-length closed form of a case, with (κ₁, κ₂) = (0, 1).
pub fn generate<T: Real>(case: &ClassCase<T>) -> Result<Curve<T>> {
    let case = ClassCase::new(case.tag, case.mu, case.nu)?;
    let (mu, nu) = (case.mu, case.nu);
    let f = |x: f64| T::from_f64(x);
    let label = format!("{} (mu = {mu}, nu = {nu})", case.tag);
    let curve = match case.tag {
        CaseTag::I1 => {
            let (m2, n2) = (mu * mu, nu * nu);
            let rho = m2 + n2;
            let near = |x: T| (x.abs() / rho).to_f64_lossless() < I1_SINGULAR_BAND;
            if near(m2 - f(3.0) * n2) || near(n2 - f(3.0) * m2) {
                i1_regular(mu, nu, &label)
            } else {
                i1_standard(mu, nu, &label)
            }
        }
        CaseTag::I2a => {
            let r = (mu * mu - nu * nu).sqrt();
            let (an, am) = (T::one() / (r * nu.powf(1.5)), T::one() / (r * mu.powf(1.5)));
            Curve::from_fn(&label, move |s: Jet<T>| {
                let (sn, cn) = (s * nu).sinh_cosh();
                let (sm, cm) = (s * mu).sinh_cosh();
                [sn * an, cm * am, cn * an, sm * am]
            })
        }
        CaseTag::I2b => {
            let r = (mu * mu - nu * nu).sqrt();
            let (an, am) = (T::one() / (r * nu.powf(1.5)), T::one() / (r * mu.powf(1.5)));
            Curve::from_fn(&label, move |s: Jet<T>| {
                let (sn, cn) = (s * nu).sin_cos();
                let (sm, cm) = (s * mu).sin_cos();
                [sn * an, cm * am, cn * an, sm * am]
            })
        }
        CaseTag::I2c => {
            let r = (mu * mu + nu * nu).sqrt();
            let (an, am) = (T::one() / (r * nu.powf(1.5)), T::one() / (r * mu.powf(1.5)));
            Curve::from_fn(&label, move |s: Jet<T>| {
                let (sn, cn) = (s * nu).sinh_cosh();
                let (sm, cm) = (s * mu).sin_cos();
                [-sn * an, cm * am, cn * an, sm * am]
            })
        }
        CaseTag::II1 | CaseTag::II2 => {
            let a = T::one() / mu.powf(2.5);
            let hyperbolic = case.tag == CaseTag::II1;
            let b = (if hyperbolic { T::one() } else { -T::one() }) / (f(2.0) * mu * mu);
            Curve::from_fn(&label, move |s: Jet<T>| {
                let (sm, cm) = if hyperbolic { (s * mu).sinh_cosh() } else { (s * mu).sin_cos() };
                [s, cm * a, s * s * b, sm * a]
            })
        }
        CaseTag::III1 | CaseTag::III2 => {
            let hyperbolic = case.tag == CaseTag::III2;
            let m2 = mu * mu;
            let sign = if hyperbolic { -T::one() } else { T::one() };
            Curve::from_fn(&label, move |s: Jet<T>| {
                let (sm, cm) = if hyperbolic { (s * mu).sinh_cosh() } else { (s * mu).sin_cos() };
                [
                    s * cm * (T::one() / m2),
                    s * sm * (T::one() / mu) + cm * (sign * f(3.0) / m2),
                    -cm * (T::one() / (f(2.0) * m2)),
                    sm * (-sign / (f(2.0) * m2 * mu)),
                ]
            })
        }
        CaseTag::IV => {
            let (r24, r12) = (f(24.0).sqrt(), f(12.0).sqrt());
            Curve::from_fn(&label, move |s: Jet<T>| {
                [s * (T::one() / r24), s.powi(2) * (T::one() / r12), -s.powi(4) * (T::one() / r24), s.powi(3) * (T::one() / r12)]
            })
        }
    };
    Ok(curve)
}

fn i1_standard<T: Real>(mu: T, nu: T, label: &str) -> Curve<T> {
    let f = |x: f64| T::from_f64(x);
    let (m2, n2) = (mu * mu, nu * nu);
    let rho = m2 + n2;
    let a1 = (m2 - f(3.0) * n2) * mu / rho;
    let ss = -f(0.5) / (rho * rho * mu * nu);
    let b2 = f(0.5) * (m2 - f(3.0) * n2) / ((n2 - f(3.0) * m2) * rho * rho * n2);
    let b3 = f(0.5) * (f(3.0) * m2 - n2) / ((m2 - f(3.0) * n2) * rho * rho * m2);
    let a4 = (n2 - f(3.0) * m2) * nu / rho;
    Curve::from_fn(label, move |s: Jet<T>| {
        let (sn, cn) = (s * nu).sin_cos();
        let (sh, ch) = (s * mu).sinh_cosh();
        [cn * sh * a1, sn * sh * ss + cn * ch * b2, sn * sh * ss + cn * ch * b3, sn * ch * a4]
    })
}

/// A congruent I.1 parametrization without the singular denominators.
fn i1_regular<T: Real>(mu: T, nu: T, label: &str) -> Curve<T> {
    let f = |x: f64| T::from_f64(x);
    let (m2, n2) = (mu * mu, nu * nu);
    let rho3 = (m2 + n2).powi(3);
    let a = (f(3.0) * n2 - m2) / (f(2.0) * nu * rho3);
    let b = (n2 - f(3.0) * m2) / (f(2.0) * mu * rho3);
    let c = (m2 - f(3.0) * n2) / (f(2.0) * nu * rho3);
    Curve::from_fn(label, move |s: Jet<T>| {
        let (sn, cn) = (s * nu).sin_cos();
        let (sh, ch) = (s * mu).sinh_cosh();
        let (cs, sc) = (cn * sh, sn * ch);
        [cs * a + sc * b, cn * ch, sn * sh, sc * c + cs * b]
    })
}

/// Infinitesimal generator `X` and base point `p` with `exp(sX)⋆p = γ(s)`.
pub fn one_parameter_generator<T: Real>(case: &ClassCase<T>) -> Result<(AlgebraElement<T>, Vec4<T>)> {
    if case.tag != CaseTag::I2b {
        return Err(Error::UnsupportedCase(format!(
            "one-parameter generator is available for I.2.b only, got {}",
            case.tag
        )));
    }
    let case = ClassCase::new(case.tag, case.mu, case.nu)?;
    let (mu, nu) = (case.mu, case.nu);
    let name = |n: &str| AlgebraElement::by_name(n).expect("basis name");
    let x = name("C22")
        .add(&name("B22").scale(-T::one()))
        .scale(mu)
        .add(&name("B11").add(&name("C11").scale(-T::one())).scale(nu));
    let r = mu * mu - nu * nu;
    let p = Vector([
        T::zero(),
        T::one() / (mu.powi(3) * r).sqrt(),
        T::one() / (nu.powi(3) * r).sqrt(),
        T::zero(),
    ]);
    Ok((x, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::jet;
    use crate::invariants::curvatures;

    fn measured(c: &Curve<f64>, s: f64) -> [f64; 4] {
        curvatures(&jet(c, s, 5).unwrap()).unwrap().curvatures()
    }

    #[test]
    fn paper_examples() {
        let c = classify(2.5, 5.6875);
        assert_eq!(c.tag, CaseTag::I2b);
        assert!((c.mu - 1.5).abs() < 1e-14 && (c.nu - 0.5).abs() < 1e-14);
        assert_eq!(classify(0.0, 0.0).tag, CaseTag::IV);
        let c = classify(1.0, 1.0);
        assert_eq!(c.tag, CaseTag::II2);
        assert!((c.mu - 1.0).abs() < 1e-15);
    }

    #[test]
    fn every_case_has_its_curvatures() {
        let params = [(1.5, 0.5), (1.3, 0.4), (0.9, 0.6)];
        for tag in CaseTag::ALL {
            for &(mu, nu) in &params {
                let case = ClassCase::new(tag, mu, nu).unwrap();
                let (k3, k4) = case.curvatures();
                let c = generate(&case).unwrap();
                for &s in &[0.0, 0.37, 1.2] {
                    let k = measured(&c, s);
                    let scale = 1.0f64.max(k3.abs()).max(k4.abs());
                    assert!(k[0].abs() < 1e-9, "{tag} κ1 {}", k[0]);
                    assert!((k[1] - 1.0).abs() < 1e-9, "{tag} κ2 {}", k[1]);
                    assert!((k[2] - k3).abs() < 1e-9 * scale, "{tag} κ3 {} vs {k3}", k[2]);
                    assert!((k[3] - k4).abs() < 1e-9 * scale, "{tag} κ4 {} vs {k4}", k[3]);
                }
                let back = classify(k3, k4);
                assert_eq!(back.tag, tag);
                assert!((back.mu - case.mu).abs() < 1e-9 && (back.nu - case.nu).abs() < 1e-9, "{tag}");
            }
        }
    }

    #[test]
    fn i1_near_singular_lines_uses_regular_form() {
        for &(mu, nu) in &[(3f64.sqrt(), 1.0), (1.0, 3f64.sqrt()), (3f64.sqrt() * 1.0004, 1.0)] {
            let case = ClassCase::new(CaseTag::I1, mu, nu).unwrap();
            let (k3, k4) = case.curvatures();
            let k = measured(&generate(&case).unwrap(), 0.4);
            assert!(k[0].abs() < 1e-9 && (k[1] - 1.0).abs() < 1e-9);
            assert!((k[2] - k3).abs() < 1e-8 && (k[3] - k4).abs() < 1e-8);
        }
    }

    #[test]
    fn generated_examples_match_displays() {
        let c = generate(&ClassCase::new(CaseTag::II2, 1.0, 0.0).unwrap()).unwrap();
        let p = c.point(0.8).unwrap();
        let expect = [0.8, 0.8f64.cos(), -0.32, 0.8f64.sin()];
        for i in 0..4 {
            assert!((p[i] - expect[i]).abs() < 1e-15);
        }
        let c = generate(&ClassCase::new(CaseTag::IV, 0.0, 0.0).unwrap()).unwrap();
        let p = c.point(2.0).unwrap();
        assert!((p[2] + 16.0 / 24f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(ClassCase::new(CaseTag::I2b, 0.5, 1.5).is_err());
        assert!(ClassCase::new(CaseTag::II1, -1.0, 0.0).is_err());
        assert!(generate(&ClassCase { tag: CaseTag::I2a, mu: 1.0, nu: 1.0 }).is_err());
    }

    #[test]
    fn spectrum_matches_characteristic_polynomial() {
        for tag in CaseTag::ALL {
            let case = ClassCase::new(tag, 1.3, 0.7).unwrap();
            let p = case.generator().characteristic_polynomial();
            for (re, im) in case.spectrum() {
                // Horner in complex arithmetic.
                let (mut a, mut b) = (0.0f64, 0.0f64);
                for c in &p {
                    let (na, nb) = (a * re - b * im + c, a * im + b * re);
                    a = na;
                    b = nb;
                }
                assert!(a.hypot(b) < 1e-8, "{tag} at ({re}, {im}): {a}, {b}");
            }
        }
    }

    #[test]
    fn i2b_is_an_orbit() {
        let case = ClassCase::new(CaseTag::I2b, 1.5, 0.5).unwrap();
        let (x, p) = one_parameter_generator(&case).unwrap();
        let c = generate(&case).unwrap();
        for k in 0..60 {
            let s = k as f64 * 4.0 * std::f64::consts::PI / 59.0;
            let q = x.exp(s).act(&p);
            assert!((q - c.point(s).unwrap()).norm() < 1e-9, "s = {s}");
        }
        assert!(one_parameter_generator(&ClassCase::new(CaseTag::IV, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn i2b_stays_on_torus() {
        let c = generate(&ClassCase::new(CaseTag::I2b, 1.5, 0.5).unwrap()).unwrap();
        let r = |s: f64| {
            let p = c.point(s).unwrap();
            (p[0].hypot(p[2]), p[1].hypot(p[3]))
        };
        let r0 = r(0.0);
        for k in 0..100 {
            let rk = r(k as f64 * 0.13);
            assert!((rk.0 - r0.0).abs() < 1e-12 && (rk.1 - r0.1).abs() < 1e-12);
        }
    }
}
