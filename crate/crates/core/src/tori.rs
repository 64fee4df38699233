//! Lagrangian tori swept by a quadric profile along a closed directrix.
//!
//! For a closed constant-curvature directrix `γ` with frame `E` and a closed
//! unit-speed curve `α = (x, y, z)` on the quadric `x² + κ₃y² − z² = h`, the
//! map
//!
//! `f(s, θ) = γ(s) + x E₂(s) + (kz − 1)/k² E₃(s) + y E₄(s)`, `k = √(κ₃² − κ₄)`
//!
//! is a Lagrangian immersion of the torus with period lattice `(ℓ_γ, ℓ_α)`.

use crate::classify::{classify, generate, CaseTag};
use crate::closedness::{closedness, TorusKnotInfo};
use crate::curve::{jet, Curve};
use crate::error::{Error, Result};
use crate::frames::frame_minimal;
use crate::io::number;
use crate::linalg::{Vec4, Vector};
use crate::symplectic::{lambda, MovingFrame};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

/// Sheet of the quadric, by the sign of `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

impl FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "positive" | "plus" => Ok(Branch::Positive),
            "-" | "negative" | "minus" => Ok(Branch::Negative),
            _ => Err(Error::InvalidParameters(format!("unknown branch '{s}'"))),
        }
    }
}

/// Shape of the profile before unit-speed reparametrization, as a closed
/// curve in `ψ ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// The planar section `z = z₀`, an ellipse `x² + κ₃y² = h + z₀²`.
    Ellipse { z0: f64 },
    /// Trigonometric polynomials `x(ψ), y(ψ)` (index = harmonic) lifted to
    /// the sheet by `z = ±√(x² + κ₃y² − h)`.
    Trig { x_cos: Vec<f64>, x_sin: Vec<f64>, y_cos: Vec<f64>, y_sin: Vec<f64> },
}

/// Value and first derivative of a profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

/// Closed unit-speed curve on the quadric `x² + κ₃y² − z² = h`.
#[derive(Clone, Debug)]
pub struct QuadricProfile {
    pub h: f64,
    pub k3: f64,
    pub branch: Branch,
    pub kind: ProfileKind,
    /// Euclidean length `ℓ_α`.
    pub length: f64,
    cumulative: Vec<f64>,
    rule: GaussRuleCache,
}

#[derive(Clone, Debug)]
struct GaussRuleCache {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl GaussRuleCache {
    fn new(n: usize) -> Self {
        let (x, w) = crate::quad::gauss_legendre(n);
        GaussRuleCache { x, w }
    }

    fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let (half, mid) = ((b - a) / 2.0, (a + b) / 2.0);
        self.x.iter().zip(&self.w).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

const PANELS: usize = 512;

fn trig(cos: &[f64], sin: &[f64], psi: f64) -> (f64, f64) {
    let (mut v, mut d) = (0.0, 0.0);
    for (k, c) in cos.iter().enumerate() {
        let (s, co) = (k as f64 * psi).sin_cos();
        v += c * co;
        d -= c * k as f64 * s;
    }
    for (k, c) in sin.iter().enumerate() {
        let (s, co) = (k as f64 * psi).sin_cos();
        v += c * s;
        d += c * k as f64 * co;
    }
    (v, d)
}

impl QuadricProfile {
    /// The profile and its `ψ`-derivative.
    fn raw(&self, psi: f64) -> ProfilePoint {
        let sign = self.branch.sign();
        match &self.kind {
            ProfileKind::Ellipse { z0 } => {
                let a = (self.h + z0 * z0).sqrt();
                let b = a / self.k3.sqrt();
                let (s, c) = psi.sin_cos();
                ProfilePoint { x: a * c, y: b * s, z: *z0, dx: -a * s, dy: b * c, dz: 0.0 }
            }
            ProfileKind::Trig { x_cos, x_sin, y_cos, y_sin } => {
                let (x, dx) = trig(x_cos, x_sin, psi);
                let (y, dy) = trig(y_cos, y_sin, psi);
                let z = sign * (x * x + self.k3 * y * y - self.h).max(0.0).sqrt();
                let dz = (x * dx + self.k3 * y * dy) / z;
                ProfilePoint { x, y, z, dx, dy, dz }
            }
        }
    }

    fn speed(&self, psi: f64) -> f64 {
        let p = self.raw(psi);
        (p.dx * p.dx + p.dy * p.dy + p.dz * p.dz).sqrt()
    }

    fn arc(&self, a: f64, b: f64) -> f64 {
        self.rule.integrate(a, b, |u| self.speed(u))
    }

    /// `ψ` with arc length `θ` from `ψ = 0`, for `θ ∈ [0, ℓ_α]`.
    fn psi_of(&self, theta: f64) -> f64 {
        let dpsi = 2.0 * PI / PANELS as f64;
        let k = match self.cumulative.binary_search_by(|c| c.total_cmp(&theta)) {
            Ok(i) => return i as f64 * dpsi,
            Err(i) => i.clamp(1, PANELS) - 1,
        };
        let (p0, c0) = (k as f64 * dpsi, self.cumulative[k]);
        let span = self.cumulative[k + 1] - c0;
        let mut psi = p0 + dpsi * (theta - c0) / span;
        for _ in 0..30 {
            let step = (c0 + self.arc(p0, psi) - theta) / self.speed(psi);
            psi -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        psi
    }

    /// Unit-speed evaluation at arc length `θ` (periodic with `ℓ_α`).
    pub fn eval(&self, theta: f64) -> ProfilePoint {
        let t = theta.rem_euclid(self.length);
        let p = self.raw(self.psi_of(t));
        let v = (p.dx * p.dx + p.dy * p.dy + p.dz * p.dz).sqrt();
        ProfilePoint { dx: p.dx / v, dy: p.dy / v, dz: p.dz / v, ..p }
    }

    /// `x² + κ₃y² − z² − h` at `θ`.
    pub fn quadric_residual(&self, theta: f64) -> f64 {
        let p = self.eval(theta);
        p.x * p.x + self.k3 * p.y * p.y - p.z * p.z - self.h
    }
}

/// A closed unit-speed profile on the quadric sheet selected by `branch`.
pub fn make_profile(h: f64, k3: f64, branch: Branch, kind: ProfileKind) -> Result<QuadricProfile> {
    if !(k3 > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameters(format!("quadric needs kappa3 > 0 and finite h (kappa3 = {k3}, h = {h})")));
    }
    let sign = branch.sign();
    match &kind {
        ProfileKind::Ellipse { z0 } => {
            if *z0 == 0.0 || z0.signum() != sign {
                return Err(Error::EmptyBranch(format!("height z0 = {z0} is not on the {branch:?} sheet")));
            }
            if !(h + z0 * z0 > 0.0) {
                return Err(Error::EmptyBranch(format!("h + z0^2 = {} leaves no closed section", h + z0 * z0)));
            }
        }
        ProfileKind::Trig { x_cos, x_sin, y_cos, y_sin } => {
            for i in 0..2048 {
                let psi = 2.0 * PI * i as f64 / 2048.0;
                let (x, _) = trig(x_cos, x_sin, psi);
                let (y, _) = trig(y_cos, y_sin, psi);
                let r = x * x + k3 * y * y - h;
                if !(r > 0.0) {
                    return Err(Error::EmptyBranch(format!("profile leaves the {branch:?} sheet near psi = {psi:.6}")));
                }
            }
        }
    }
    let mut p = QuadricProfile {
        h,
        k3,
        branch,
        kind,
        length: 0.0,
        cumulative: Vec::with_capacity(PANELS + 1),
        rule: GaussRuleCache::new(10),
    };
    let dpsi = 2.0 * PI / PANELS as f64;
    let mut acc = 0.0;
    p.cumulative.push(0.0);
    for k in 0..PANELS {
        let a = k as f64 * dpsi;
        if (0..8).any(|i| p.speed(a + dpsi * i as f64 / 8.0) <= 1e-12) {
            return Err(Error::InvalidParameters("profile is not regular".into()));
        }
        acc += p.arc(a, a + dpsi);
        p.cumulative.push(acc);
    }
    p.length = acc;
    Ok(p)
}

/// A closed constant-curvature directrix with its frame.
#[derive(Clone, Debug)]
pub struct Directrix {
    pub k3: f64,
    pub k4: f64,
    pub curve: Curve<f64>,
    pub knot: TorusKnotInfo,
}

impl Directrix {
    /// The closed I.2.b curve with curvatures `(κ₃, κ₄)`.
    pub fn closed(k3: f64, k4: f64, ratio_tol: f64) -> Result<Self> {
        if !(k3 > 0.0 && k3 * k3 - k4 > 0.0) {
            return Err(Error::CurvatureWindowViolated);
        }
        let knot = closedness(k3, k4, ratio_tol).ok_or(Error::NotClosed)?;
        if !knot.verified {
            return Err(Error::NotClosed);
        }
        let case = classify(k3, k4);
        debug_assert_eq!(case.tag, CaseTag::I2b);
        Ok(Directrix { k3, k4, curve: generate(&case)?, knot })
    }

    pub fn period(&self) -> f64 {
        self.knot.period
    }

    pub fn frame(&self, s: f64) -> Result<MovingFrame<f64>> {
        frame_minimal(&jet(&self.curve, s, 4)?)
    }
}

/// Vertex and tangent vectors of the molding surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub f: Vec4<f64>,
    pub ds: Vec4<f64>,
    pub dtheta: Vec4<f64>,
}

fn combo(e: &MovingFrame<f64>, c: [f64; 4]) -> Vec4<f64> {
    (1..=4).fold(Vector::zeros(), |acc, i| acc + e.e(i).scale(c[i - 1]))
}

/// `f`, `∂_s f = kz E₁ − κ₃y E₂ − y E₃ + x E₄` and `∂_θ f = ẋE₂ + (ż/k)E₃ + ẏE₄`.
pub fn surface_point(k3: f64, k: f64, e: &MovingFrame<f64>, p: &ProfilePoint) -> SurfacePoint {
    let f = e.origin() + combo(e, [0.0, p.x, (k * p.z - 1.0) / (k * k), p.y]);
    let ds = combo(e, [k * p.z, -k3 * p.y, -p.y, p.x]);
    let dtheta = combo(e, [0.0, p.dx, p.dz / k, p.dy]);
    SurfacePoint { f, ds, dtheta }
}

#[derive(Clone, Debug)]
pub struct TorusMesh {
    pub n_s: usize,
    pub n_theta: usize,
    pub s: Vec<f64>,
    pub theta: Vec<f64>,
    /// Row-major: vertex `(i, j)` is at `i * n_theta + j`.
    pub vertices: Vec<Vec4<f64>>,
    /// `Λ(∂_s f, ∂_θ f)` per vertex.
    pub residual: Vec<f64>,
    /// `(ℓ_γ, ℓ_α)`.
    pub periods: (f64, f64),
    pub max_residual: f64,
    /// max ‖f(s + ℓ_γ, θ) − f(s, θ)‖ and max ‖f(s, θ + ℓ_α) − f(s, θ)‖.
    pub period_defects: (f64, f64),
    /// min over the grid of the smallest singular value of `(∂_s f, ∂_θ f)`.
    pub min_singular_value: f64,
}

fn smallest_singular_value(a: &Vec4<f64>, b: &Vec4<f64>) -> f64 {
    let (p, q, r) = (a.dot(a), a.dot(b), b.dot(b));
    let tr = p + r;
    let det = p * r - q * q;
    let disc = ((tr * tr / 4.0) - det).max(0.0).sqrt();
    (tr / 2.0 - disc).max(0.0).sqrt()
}

/// Evaluate the molding surface on an `n_s × n_theta` periodic grid.
pub fn molding_surface(directrix: &Directrix, profile: &QuadricProfile, n_s: usize, n_theta: usize) -> Result<TorusMesh> {
    let (k3, k4) = (directrix.k3, directrix.k4);
    if !(k3 > 0.0 && k3 * k3 - k4 > 0.0) {
        return Err(Error::CurvatureWindowViolated);
    }
    if (profile.k3 - k3).abs() > 1e-12 * k3.abs().max(1.0) {
        return Err(Error::InvalidParameters(format!("profile quadric uses kappa3 = {}, directrix {k3}", profile.k3)));
    }
    if n_s < 1 || n_theta < 1 {
        return Err(Error::InvalidParameters("grid must be at least 1x1".into()));
    }
    let k = (k3 * k3 - k4).sqrt();
    let (lg, la) = (directrix.period(), profile.length);
    let s: Vec<f64> = (0..n_s).map(|i| lg * i as f64 / n_s as f64).collect();
    let theta: Vec<f64> = (0..n_theta).map(|j| la * j as f64 / n_theta as f64).collect();
    let frames = s.par_iter().map(|&u| directrix.frame(u)).collect::<Result<Vec<_>>>()?;
    let frames_shift = s.par_iter().map(|&u| directrix.frame(u + lg)).collect::<Result<Vec<_>>>()?;
    let prof: Vec<ProfilePoint> = theta.par_iter().map(|&t| profile.eval(t)).collect();
    let prof_shift: Vec<ProfilePoint> = theta.par_iter().map(|&t| profile.raw(profile.psi_of(t) + 2.0 * PI)).collect();
    if let Some(p) = prof.iter().find(|p| p.z == 0.0) {
        return Err(Error::EmptyBranch(format!("profile reaches z = 0 at x = {}, y = {}", p.x, p.y)));
    }
    struct Row {
        vertices: Vec<Vec4<f64>>,
        residual: Vec<f64>,
        defects: (f64, f64),
        min_sv: f64,
    }
    let rows: Vec<Row> = (0..n_s)
        .into_par_iter()
        .map(|i| {
            let mut row = Row { vertices: Vec::with_capacity(n_theta), residual: Vec::with_capacity(n_theta), defects: (0.0, 0.0), min_sv: f64::INFINITY };
            for j in 0..n_theta {
                let sp = surface_point(k3, k, &frames[i], &prof[j]);
                let shifted_s = surface_point(k3, k, &frames_shift[i], &prof[j]);
                let shifted_t = surface_point(k3, k, &frames[i], &prof_shift[j]);
                row.defects.0 = row.defects.0.max((shifted_s.f - sp.f).norm());
                row.defects.1 = row.defects.1.max((shifted_t.f - sp.f).norm());
                row.min_sv = row.min_sv.min(smallest_singular_value(&sp.ds, &sp.dtheta));
                row.residual.push(lambda(&sp.ds, &sp.dtheta));
                row.vertices.push(sp.f);
            }
            row
        })
        .collect();
    let mut mesh = TorusMesh {
        n_s,
        n_theta,
        s,
        theta,
        vertices: Vec::with_capacity(n_s * n_theta),
        residual: Vec::with_capacity(n_s * n_theta),
        periods: (lg, la),
        max_residual: 0.0,
        period_defects: (0.0, 0.0),
        min_singular_value: f64::INFINITY,
    };
    for r in rows {
        mesh.max_residual = r.residual.iter().fold(mesh.max_residual, |m, x| m.max(x.abs()));
        mesh.period_defects.0 = mesh.period_defects.0.max(r.defects.0);
        mesh.period_defects.1 = mesh.period_defects.1.max(r.defects.1);
        mesh.min_singular_value = mesh.min_singular_value.min(r.min_sv);
        mesh.vertices.extend(r.vertices);
        mesh.residual.extend(r.residual);
    }
    Ok(mesh)
}

/// ℝ⁴ → ℝ³ projection used for OBJ output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// Drop coordinate `x_k` (1-based).
    Drop(usize),
    /// `(x₁, x₃, √(x₂² + x₄²))`: the first phase portrait plus the radius of
    /// the second.
    Portraits,
}

impl Projection {
    pub fn apply(&self, v: &Vec4<f64>) -> [f64; 3] {
        match *self {
            Projection::Drop(k) => {
                let mut out = [0.0; 3];
                let mut n = 0;
                for i in 0..4 {
                    if i + 1 != k {
                        out[n] = v[i];
                        n += 1;
                    }
                }
                out
            }
            Projection::Portraits => [v[0], v[2], v[1].hypot(v[3])],
        }
    }
}

impl FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "portraits" => Ok(Projection::Portraits),
            "drop1" => Ok(Projection::Drop(1)),
            "drop2" => Ok(Projection::Drop(2)),
            "drop3" => Ok(Projection::Drop(3)),
            "drop4" => Ok(Projection::Drop(4)),
            _ => Err(Error::InvalidParameters(format!("unknown projection '{s}'"))),
        }
    }
}

/// OBJ text: one `v` line per vertex and one quad per grid cell, wrapped
/// periodically, with 1-based indices and a consistent winding.
pub fn mesh_obj(mesh: &TorusMesh, projection: Projection) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# lagrangian torus {} x {}", mesh.n_s, mesh.n_theta);
    for v in &mesh.vertices {
        let p = projection.apply(v);
        let _ = writeln!(out, "v {} {} {}", number(p[0]), number(p[1]), number(p[2]));
    }
    let (n, m) = (mesh.n_s, mesh.n_theta);
    let idx = |i: usize, j: usize| (i % n) * m + (j % m) + 1;
    for i in 0..n {
        for j in 0..m {
            let _ = writeln!(out, "f {} {} {} {}", idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
        }
    }
    out
}

pub const MESH_CSV_HEADER: &str = "s,theta,x1,x2,x3,x4,residual";

/// CSV rows `(s, θ, x₁..x₄, residual)` in vertex order.
pub fn mesh_csv(mesh: &TorusMesh) -> String {
    let mut out = String::with_capacity(mesh.vertices.len() * 180);
    out.push_str(MESH_CSV_HEADER);
    out.push('\n');
    for i in 0..mesh.n_s {
        for j in 0..mesh.n_theta {
            let k = i * mesh.n_theta + j;
            let v = mesh.vertices[k];
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                number(mesh.s[i]),
                number(mesh.theta[j]),
                number(v[0]),
                number(v[1]),
                number(v[2]),
                number(v[3]),
                number(mesh.residual[k])
            );
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Csv,
}

/// Write the mesh. OBJ output also writes the full ℝ⁴ CSV next to it (same
/// stem, `.csv`); returns the paths written.
pub fn export_mesh(mesh: &TorusMesh, format: MeshFormat, path: &Path, projection: Projection) -> Result<Vec<std::path::PathBuf>> {
    let write = |p: &Path, text: &str| -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
        f.write_all(text.as_bytes())?;
        f.flush()?;
        Ok(())
    };
    match format {
        MeshFormat::Csv => {
            write(path, &mesh_csv(mesh))?;
            Ok(vec![path.to_path_buf()])
        }
        MeshFormat::Obj => {
            write(path, &mesh_obj(mesh, projection))?;
            let sidecar = path.with_extension("csv");
            write(&sidecar, &mesh_csv(mesh))?;
            Ok(vec![path.to_path_buf(), sidecar])
        }
    }
}

/// Parse CSV written by [`mesh_csv`] into `(s, θ, vertex, residual)` rows.
/// `(s, θ, vertex, residual)` of one mesh CSV row.
pub type MeshRow = (f64, f64, Vec4<f64>, f64);

pub fn read_mesh_csv(text: &str) -> Result<Vec<MeshRow>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if n == 0 {
            if line.trim() != MESH_CSV_HEADER {
                return Err(Error::Parse { line: 1, column: 1, message: "unexpected mesh CSV header".into() });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut vals = [0.0; 7];
        let mut count = 0;
        let mut column = 1;
        for (k, field) in line.split(',').enumerate() {
            if k >= 7 {
                return Err(Error::Parse { line: n + 1, column, message: "too many fields".into() });
            }
            vals[k] = field.trim().parse().map_err(|e| Error::Parse { line: n + 1, column, message: format!("{e}") })?;
            column += field.len() + 1;
            count += 1;
        }
        if count != 7 {
            return Err(Error::Parse { line: n + 1, column, message: format!("expected 7 fields, found {count}") });
        }
        rows.push((vals[0], vals[1], Vector([vals[2], vals[3], vals[4], vals[5]]), vals[6]));
    }
    Ok(rows)
}
