//! Quick invariant suites run by `lagframe selftest`.

use crate::{emit, Failure, Outcome};
use lagframe::curve::jet;
use lagframe::frames::frame;
use lagframe::geodesics::{el_residual, GEODESIC_TOL};
use lagframe::invariants::curvatures;
use lagframe::osculating::osculating_null_check;
use lagframe::portrait::phase_portraits;
use lagframe::reconstruct::integrate;
use lagframe::sampling::{random_algebra, random_case, random_group, random_jet, random_smooth_curve};
use lagframe::serret::constant_generator;
use lagframe::symplectic::{expm_group, symplectic_defect};
use lagframe::tori::{make_profile, molding_surface, Branch, Directrix, ProfileKind};
use lagframe::{classify, generate, CaseTag, ClassCase, CrossSection, CurvatureProfile, GroupElement, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

pub const DEFAULT_SEED: u64 = 20240601;

struct Suite {
    name: &'static str,
    worst: f64,
    tol: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn group_exponential(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let g = random_algebra(r, 0.5).exp(1.0);
        worst = worst.max(symplectic_defect(&g.linear));
        worst = worst.max(g.compose(&g.inverse()).distance(&GroupElement::identity()));
    }
    Ok(Suite { name: "group exponential", worst, tol: 1e-10 })
}

fn invariance(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let j = random_jet(r, 5);
        let a = curvatures(&j)?;
        for _ in 0..10 {
            let b = curvatures(&j.transformed(&random_group(r)))?;
            for (x, y) in a.curvatures().iter().zip(b.curvatures()) {
                worst = worst.max(rel(*x, y));
            }
            worst = worst.max(rel(a.phi, b.phi));
        }
    }
    Ok(Suite { name: "curvature invariance", worst, tol: 1e-9 })
}

fn equivariance(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let g = random_group(r);
        let general = random_smooth_curve(r);
        let lag = generate(&random_case(r, CaseTag::I2b))?;
        for section in CrossSection::ALL {
            let c = if section == CrossSection::MinimalLagrangian { &lag } else { &general };
            let j = jet(c, 0.3, 5)?;
            let a = frame(section, &j.transformed(&g))?;
            let b = frame(section, &j)?;
            let scale = b.linear.norm_max().max(1.0) * g.linear.norm_max().max(1.0);
            worst = worst.max(a.distance(&g.compose(&b)) / scale);
        }
    }
    Ok(Suite { name: "frame equivariance", worst, tol: 1e-9 })
}

fn classification(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut worst = 0.0f64;
    for tag in CaseTag::ALL {
        for _ in 0..2 {
            let case = random_case(r, tag);
            let (k3, k4) = case.curvatures();
            let c = generate(&case)?;
            for s in [0.0, 0.8] {
                let k = curvatures(&jet(&c, s, 5)?)?.curvatures();
                for (x, y) in k.iter().zip([0.0, 1.0, k3, k4]) {
                    worst = worst.max(rel(*x, y));
                }
            }
            let back = classify(k3, k4);
            if back.tag != tag {
                worst = f64::INFINITY;
            }
            worst = worst.max(rel(back.mu, case.mu)).max(rel(back.nu, case.nu));
        }
    }
    Ok(Suite { name: "classification round trip", worst, tol: 1e-7 })
}

fn reconstruction(_: &mut ChaCha8Rng) -> Result<Suite> {
    let (k3, k4) = (1.0, 1.0);
    let r = integrate(&CurvatureProfile::constant(k3, k4), (0.0, 2.0), 1e-2, &GroupElement::identity())?;
    let a = constant_generator(k3, k4);
    let mut worst = r.drift;
    for (s, f) in r.s.iter().zip(&r.frames) {
        worst = worst.max(f.distance(&expm_group(&a, *s)));
    }
    Ok(Suite { name: "reconstruction", worst, tol: 1e-8 })
}

fn null_and_dpair(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut worst = 0.0f64;
    for tag in CaseTag::ALL {
        let c = generate(&random_case(r, tag))?;
        worst = worst.max(osculating_null_check(&c, (-1.0, 1.0), 21)?.max_null_residual);
        worst = worst.max(phase_portraits(&c, (-1.0, 1.0), 21)?.dpair_residual);
    }
    Ok(Suite { name: "osculating null and d-pair", worst, tol: 1e-8 })
}

fn torus(_: &mut ChaCha8Rng) -> Result<Suite> {
    let (k3, k4) = ClassCase::new(CaseTag::I2b, 1.5, 0.5)?.curvatures();
    let d = Directrix::closed(k3, k4, 1e-9)?;
    let p = make_profile(-1.0, k3, Branch::Positive, ProfileKind::Ellipse { z0: 2f64.sqrt() })?;
    let mesh = molding_surface(&d, &p, 32, 16)?;
    let worst = mesh.max_residual.max(mesh.period_defects.0).max(mesh.period_defects.1);
    Ok(Suite { name: "torus", worst, tol: 1e-8 })
}

fn geodesics(r: &mut ChaCha8Rng) -> Result<Suite> {
    let mut wrong = 0.0;
    for tag in CaseTag::ALL {
        let c = generate(&random_case(r, tag))?;
        let v = el_residual(&c, (0.0, 2.0), 21, GEODESIC_TOL)?.verdict;
        if v != matches!(tag, CaseTag::II1 | CaseTag::II2 | CaseTag::IV) {
            wrong += 1.0;
        }
    }
    Ok(Suite { name: "geodesic verdicts", worst: wrong, tol: 0.5 })
}

type SuiteFn = fn(&mut ChaCha8Rng) -> Result<Suite>;

pub fn run(seed: u64, out: Option<&Path>) -> Outcome {
    let suites: [SuiteFn; 8] =
        [group_exponential, invariance, equivariance, classification, reconstruction, null_and_dpair, torus, geodesics];
    let mut text = format!("seed {seed}\n");
    let mut failed = 0;
    for (i, suite) in suites.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let line = match suite(&mut rng) {
            Ok(s) if s.worst <= s.tol => format!("PASS {}: {:.3e} (tol {:e})", s.name, s.worst, s.tol),
            Ok(s) => {
                failed += 1;
                format!("FAIL {}: {:.3e} (tol {:e})", s.name, s.worst, s.tol)
            }
            Err(e) => {
                failed += 1;
                format!("FAIL suite {i}: {} ({e})", e.code())
            }
        };
        log::info!("{line}");
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str(&format!("{} of {} suites passed\n", suites.len() - failed, suites.len()));
    emit(out, &text)?;
    if failed > 0 {
        return Err(Failure::Domain(lagframe::Error::InvalidInput(format!("{failed} self-test suites failed"))));
    }
    Ok(())
}
