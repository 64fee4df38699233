//! Randomized invariants of the library, driven by seeded generators.

mod common;

use common::{d1, d2, lambda_ref, rel, taylor_expm};
use lagframe::curve::{jet, Curve as GCurve};
use lagframe::frames::frame;
use lagframe::geodesics::{el_residual, first_variation, make_admissible, Bump, GEODESIC_TOL};
use lagframe::invariants::{curvatures, phi_identity};
use lagframe::lagrangian::{is_lagrangian, symplectic_length};
use lagframe::reconstruct::integrate;
use lagframe::sampling::{random_algebra, random_case, random_group, random_jet, random_smooth_curve};
use lagframe::symplectic::{is_symplectic, symplectic_defect};
use lagframe::tori::{make_profile, molding_surface, Branch, Directrix, ProfileKind};
use lagframe::{classify, generate, lambda, CaseTag, ClassCase, CrossSection, CurvatureProfile, Curve, Elementary, GroupElement, Jet, Vec4};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(r: &mut ChaCha8Rng) -> Vec4 {
    lagframe::linalg::Vector(std::array::from_fn(|_| r.gen_range(-2.0..2.0)))
}

/// `τ ↦ r·g⋆γ(τ + a sin τ)`: a dilated, moved, monotonically
/// reparametrized copy of `c`.
fn transformed(c: &Curve, g: GroupElement, r: f64, a: f64) -> Curve {
    let c = c.clone();
    GCurve::from_fn("transformed", move |tau: Jet| {
        let t = tau + tau.sin() * a;
        let x = c.eval_series(t).expect("closed form");
        std::array::from_fn(|i| {
            let mut acc = Jet::constant(g.translation[i]);
            for (j, xj) in x.iter().enumerate() {
                acc += *xj * g.linear[(i, j)];
            }
            acc * r
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lambda_is_antisymmetric_and_bilinear(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (random_vec(&mut r), random_vec(&mut r), random_vec(&mut r));
        let (a, b) = (r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        prop_assert!((lambda(&x, &y) + lambda(&y, &x)).abs() < 1e-14);
        prop_assert!(lambda(&x, &x).abs() < 1e-14);
        prop_assert!((lambda(&x, &y) - lambda_ref(&x.0, &y.0)).abs() < 1e-14);
        let lhs = lambda(&(x.scale(a) + z.scale(b)), &y);
        let rhs = a * lambda(&x, &y) + b * lambda(&z, &y);
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn expm_is_symplectic_and_matches_taylor(seed in any::<u64>(), size in 0.0f64..50.0) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r, 1.0).to_matrix5();
        let t = size / m.norm_max();
        let g = lagframe::symplectic::expm(&m, t);
        prop_assert!(g[(0, 0)] == 1.0 && (1..5).all(|j| g[(0, j)] == 0.0));
        let linear = lagframe::Mat4::from_columns(&std::array::from_fn(|j| lagframe::linalg::Vector(std::array::from_fn(|i| g[(i + 1, j + 1)]))));
        // The defect scales with ‖A‖², which grows like e^{2‖tm‖}.
        let scale = linear.norm_max().powi(2).max(1.0);
        prop_assert!(symplectic_defect(&linear) <= 1e-10 * scale, "defect {:e} at scale {scale:e}", symplectic_defect(&linear));
        if linear.norm_max() <= 10.0 {
            prop_assert!(is_symplectic(&linear, 1e-10));
        }
        if size <= 5.0 {
            let oracle = taylor_expm(&m, t);
            prop_assert!((g - oracle).norm_max() <= 1e-11 * oracle.norm_max().max(1.0));
        }
    }

    #[test]
    fn expm_is_a_one_parameter_group(seed in any::<u64>(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let mut r = rng(seed);
        let m = random_algebra(&mut r, 1.0).to_matrix5();
        let lhs = lagframe::symplectic::expm(&m, s) * lagframe::symplectic::expm(&m, t);
        let rhs = lagframe::symplectic::expm(&m, s + t);
        prop_assert!((lhs - rhs).norm_max() <= 1e-10 * rhs.norm_max().max(1.0));
    }

    #[test]
    fn curvatures_are_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = random_jet(&mut r, 5);
        let g = random_group(&mut r);
        let a = curvatures(&j).unwrap();
        let b = curvatures(&j.transformed(&g)).unwrap();
        for (x, y) in a.curvatures().iter().zip(b.curvatures()) {
            prop_assert!(rel(*x, y) < 1e-9, "{x} vs {y}");
        }
        prop_assert!(rel(a.phi, b.phi) < 1e-9);
    }

    #[test]
    fn frames_are_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_group(&mut r);
        let tag = CaseTag::ALL[r.gen_range(0..CaseTag::ALL.len())];
        let lag = generate(&random_case(&mut r, tag)).unwrap();
        let general = random_smooth_curve(&mut r);
        let t = r.gen_range(0.0..1.0);
        for section in CrossSection::ALL {
            let c = if section == CrossSection::MinimalLagrangian { &lag } else { &general };
            let j = jet(c, t, 5).unwrap();
            let (Ok(a), Ok(b)) = (frame(section, &j.transformed(&g)), frame(section, &j)) else { continue };
            let scale = b.linear.norm_max().max(1.0) * g.linear.norm_max().max(1.0);
            prop_assert!(a.distance(&g.compose(&b)) < 1e-9 * scale, "{section}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn identity_table_matches_finite_differences(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_smooth_curve(&mut r);
        let t = r.gen_range(-1.0..1.0);
        let k = |i: usize| {
            let c = &c;
            move |s: f64| curvatures(&jet(c, s, 5).unwrap()).unwrap().curvatures()[i]
        };
        let h = 1e-2;
        let j = jet(&c, t, 5).unwrap();
        let l = |a: usize, b: usize| lambda(&j.x(a), &j.x(b));
        let rep = curvatures(&j).unwrap();
        let (k1p, k2p, k3p, k1pp) = (d1(k(0), t, h), d1(k(1), t, h), d1(k(2), t, h), d2(k(0), t, h));
        prop_assert!(rel(l(1, 3), k1p) < 1e-7, "Λ13 {} vs {k1p}", l(1, 3));
        prop_assert!(rel(l(1, 4), k1pp - rep.k2) < 1e-7, "Λ14 {} vs {}", l(1, 4), k1pp - rep.k2);
        prop_assert!(rel(l(2, 4), k2p) < 1e-7, "Λ24 {} vs {k2p}", l(2, 4));
        prop_assert!(rel(l(3, 5), k3p) < 1e-7, "Λ35 {} vs {k3p}", l(3, 5));
        let phi = phi_identity(rep.k1, rep.k2, rep.k3, k1p, k2p, k1pp);
        prop_assert!(rel(rep.phi, phi) < 1e-7, "φ {} vs {phi}", rep.phi);
    }

    #[test]
    fn classification_round_trip(seed in any::<u64>(), which in 0usize..9) {
        let mut r = rng(seed);
        let tag = CaseTag::ALL[which];
        let case = random_case(&mut r, tag);
        let c = generate(&case).unwrap();
        let mut measured = [0.0; 4];
        for s in [0.0, 0.7, 1.9] {
            measured = curvatures(&jet(&c, s, 5).unwrap()).unwrap().curvatures();
            prop_assert!(measured[0].abs() < 1e-7 && (measured[1] - 1.0).abs() < 1e-7, "{tag}: {measured:?}");
        }
        let back = classify(measured[2], measured[3]);
        prop_assert_eq!(back.tag, tag);
        prop_assert!(rel(back.mu, case.mu) < 1e-7 && rel(back.nu, case.nu) < 1e-7, "{back:?} vs {case:?}");
        let exact = case.curvatures();
        let again = classify(exact.0, exact.1);
        prop_assert!(again.tag == tag && rel(again.mu, case.mu) < 1e-12 && rel(again.nu, case.nu) < 1e-12);
    }

    #[test]
    fn geodesic_exactly_on_constant_k1_zero_k2_cases(seed in any::<u64>(), which in 0usize..9) {
        let mut r = rng(seed);
        let tag = CaseTag::ALL[which];
        let c = generate(&random_case(&mut r, tag)).unwrap();
        let rep = el_residual(&c, (0.0, 3.0), 31, GEODESIC_TOL).unwrap();
        let expect = matches!(tag, CaseTag::II1 | CaseTag::II2 | CaseTag::IV);
        prop_assert_eq!(rep.verdict, expect, "{} sup k2 {}", tag, rep.sup_k2);
        prop_assert_eq!(tag.is_geodesic(), expect);
    }

    #[test]
    fn lagrangian_predicate_and_length_are_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_group(&mut r);
        let dilation = r.gen_range(0.5..2.0);
        let a = r.gen_range(0.0..0.5);
        let lag = generate(&random_case(&mut r, CaseTag::I2b)).unwrap();
        let moved = transformed(&lag, g, dilation, a);
        prop_assert!(is_lagrangian(&lag, (0.0, 2.0), 1e-9).unwrap().lagrangian);
        prop_assert!(is_lagrangian(&moved, (0.0, 2.0), 1e-9 * dilation * dilation).unwrap().lagrangian);
        let general = random_smooth_curve(&mut r);
        let check = is_lagrangian(&general, (0.0, 2.0), 1e-9).unwrap();
        let moved = transformed(&general, g, dilation, a);
        prop_assert_eq!(check.lagrangian, is_lagrangian(&moved, (0.0, 2.0), 1e-9).unwrap().lagrangian);

        // The arc element is invariant under the group and reparametrization.
        let same = transformed(&lag, g, 1.0, a);
        let b = 2.0;
        let l0 = symplectic_length(&lag, (0.0, b + a * b.sin()), 1e-12).unwrap();
        let l1 = symplectic_length(&same, (0.0, b), 1e-12).unwrap();
        prop_assert!(rel(l0, l1) < 1e-7, "{l0} vs {l1}");
    }

    #[test]
    fn reconstruction_is_equivariant_in_the_initial_frame(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_group(&mut r);
        let (p, q, w) = (r.gen_range(-0.2..0.2), r.gen_range(0.5..1.5), r.gen_range(0.5..2.0));
        let profile = CurvatureProfile::lagrangian(move |s: Jet| {
            let k3 = (s * w).sin() * p + q;
            [Jet::constant(1.0), k3, k3 * k3 - s.cos() * 0.3]
        });
        let base = integrate(&profile, (0.0, 2.0), 1e-2, &GroupElement::identity()).unwrap();
        let moved = integrate(&profile, (0.0, 2.0), 1e-2, &g).unwrap();
        for (a, b) in base.frames.iter().zip(&moved.frames) {
            prop_assert!(g.compose(a).distance(b) < 1e-9 * g.linear.norm_max().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn first_variation_matches_euler_lagrange(seed in any::<u64>(), geodesic in any::<bool>()) {
        let mut r = rng(seed);
        let case = if geodesic { ClassCase::new(CaseTag::II2, r.gen_range(0.5..1.5), 0.0).unwrap() } else {
            random_case(&mut r, CaseTag::I2b)
        };
        let c = generate(&case).unwrap();
        let mut bump = |amp: f64| {
            let a = r.gen_range(0.0..1.0);
            let w = r.gen_range(1.0..2.0);
            vec![Bump::new(a, a + w, 6, r.gen_range(-amp..amp)).unwrap()]
        };
        let var = make_admissible(bump(0.04), bump(0.04), bump(0.1)).unwrap();
        let fv = first_variation(&c, &var, 1e-4).unwrap();
        prop_assert!((fv.finite_difference - fv.predicted_derivative).abs() < 1e-7, "{fv:?}");
        prop_assert!((fv.el_integral - fv.raw_integral).abs() < 1e-8, "{fv:?}");
        if geodesic {
            prop_assert!(fv.finite_difference.abs() < 1e-7 && fv.el_integral.abs() < 1e-7);
        }
    }

    #[test]
    fn molding_surfaces_are_lagrangian_and_doubly_periodic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1u32..3);
        let m = r.gen_range(n + 1..n + 3);
        let nu = r.gen_range(0.3..0.7);
        let case = ClassCase::new(CaseTag::I2b, nu * m as f64 / n as f64, nu).unwrap();
        let (k3, k4) = case.curvatures();
        let directrix = Directrix::closed(k3, k4, 1e-9).unwrap();
        let z0 = r.gen_range(0.5..1.5);
        let h = r.gen_range(-0.9 * z0 * z0..1.0);
        let profile = make_profile(h, k3, Branch::Positive, ProfileKind::Ellipse { z0 }).unwrap();
        let mesh = molding_surface(&directrix, &profile, 48, 24).unwrap();
        prop_assert!(mesh.max_residual <= 1e-8, "{:e}", mesh.max_residual);
        prop_assert!(mesh.period_defects.0 <= 1e-8 && mesh.period_defects.1 <= 1e-8, "{:?}", mesh.period_defects);
        prop_assert!(mesh.min_singular_value > 0.0);
    }
}
