//! `lagframe` command-line front end.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod selftest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::JobConfig;
use lagframe::closedness::closedness;
use lagframe::curve::{grid, jet, sample};
use lagframe::frames::frame;
use lagframe::geodesics::{el_residual, first_variation_with, Variation, FIRST_VARIATION_NODES, GEODESIC_TOL};
use lagframe::invariants::curvatures;
use lagframe::io::{csv_table, from_json, load_curve, load_profile, read_text, to_json, write_text, CurveFile, FrameFile};
use lagframe::portrait::phase_portraits;
use lagframe::reconstruct::{integrate_with, ReconstructOptions, DEFAULT_STEP};
use lagframe::serret::serret_matrix;
use lagframe::symplectic::symplectic_defect;
use lagframe::tori::{export_mesh, make_profile, molding_surface, Branch, Directrix, MeshFormat, ProfileKind, Projection};
use lagframe::{classify, generate, CaseTag, ClassCase, CrossSection, Curve, Error, GroupElement};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "lagframe",
    version,
    about = "Affine symplectic geometry of curves in R^4",
    after_help = "Set LF_LOG=info or LF_LOG=debug for diagnostics on stderr."
)]
struct Cli {
    /// JSON job configuration supplying defaults for seed, tolerances and steps.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curvatures and derivative invariants of a curve (JSON at --t, CSV on a grid).
    Invariants(InvariantsArgs),
    /// Moving frame of a cross-section at a parameter (JSON).
    Frame(FrameArgs),
    /// Maurer-Cartan matrix of a cross-section at a parameter (JSON).
    SerretMatrix(FrameArgs),
    /// Integrate the Frenet system of a curvature profile (CSV).
    Reconstruct(ReconstructArgs),
    /// Classify constant curvatures (JSON).
    Classify(CurvatureArgs),
    /// Sample a classified normal form (CSV or curve JSON).
    Generate(GenerateArgs),
    /// Torus-knot data of a constant-curvature curve (JSON).
    Closedness(CurvatureArgs),
    /// Lagrangian torus mesh over a closed directrix (OBJ or CSV files).
    Torus(TorusArgs),
    /// Phase portraits of a curve (CSV).
    Portrait(PortraitArgs),
    /// Euler-Lagrange verdict for a curve (JSON).
    GeodesicCheck(GeodesicArgs),
    /// First variation of the symplectic length along a variation field (JSON).
    FirstVariation(FirstVariationArgs),
    /// Run the built-in invariant suites.
    Selftest,
}

#[derive(Args, Debug)]
struct InvariantsArgs {
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
    /// Single parameter value; emits a JSON report.
    #[arg(long, conflicts_with_all = ["t0", "t1"])]
    t: Option<f64>,
    #[arg(long, requires = "t1")]
    t0: Option<f64>,
    #[arg(long, requires = "t0")]
    t1: Option<f64>,
    #[arg(long, default_value_t = 101)]
    samples: usize,
}

#[derive(Args, Debug)]
struct FrameArgs {
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
    #[arg(long)]
    t: f64,
    /// generic, minimal or gram-schmidt.
    #[arg(long, default_value = "minimal")]
    section: CrossSection,
}

#[derive(Args, Debug)]
struct ReconstructArgs {
    #[arg(long, value_name = "FILE")]
    profile: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    s0: f64,
    #[arg(long)]
    s1: f64,
    #[arg(long)]
    h: Option<f64>,
    /// Initial frame file; the identity frame when omitted.
    #[arg(long, value_name = "FILE")]
    init: Option<PathBuf>,
    #[arg(long, default_value = "minimal")]
    section: CrossSection,
    /// Step-doubling tolerance; enables adaptive refinement.
    #[arg(long)]
    adaptive: Option<f64>,
    /// Also write every frame as JSON to this file.
    #[arg(long, value_name = "FILE")]
    frames: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[arg(long, allow_negative_numbers = true)]
    k3: f64,
    #[arg(long, allow_negative_numbers = true)]
    k4: f64,
    /// Tolerance on |mu/nu - m/n| for the closedness test.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CurveFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    case: CaseTag,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
    format: CurveFormat,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MeshKind {
    Obj,
    Csv,
}

#[derive(Args, Debug)]
struct TorusArgs {
    #[arg(long)]
    k3: f64,
    #[arg(long, allow_negative_numbers = true)]
    k4: f64,
    /// Level of the quadric x^2 + k3 y^2 - z^2 = h.
    #[arg(long, allow_negative_numbers = true)]
    h: f64,
    /// Height of the planar profile section.
    #[arg(long, allow_negative_numbers = true)]
    z0: f64,
    /// Grid size as NxM (directrix x profile).
    #[arg(long, default_value = "128x64")]
    grid: String,
    /// portraits or drop1..drop4.
    #[arg(long, default_value = "portraits")]
    projection: Projection,
    /// Quadric sheet: + or -.
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    branch: Branch,
    #[arg(long, value_enum, default_value_t = MeshKind::Obj)]
    format: MeshKind,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct PortraitArgs {
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct GeodesicArgs {
    #[arg(long, requires = "k4", conflicts_with = "curve")]
    k3: Option<f64>,
    #[arg(long, requires = "k3", allow_negative_numbers = true)]
    k4: Option<f64>,
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    t1: f64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct FirstVariationArgs {
    #[arg(long, value_name = "FILE")]
    curve: PathBuf,
    #[arg(long, value_name = "FILE")]
    var: PathBuf,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
}

/// Failure of a subcommand, with its exit status.
enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LF_LOG")).format_timestamp(None).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprint!("{}", to_json(&ErrorReport { error: "UsageError", message }));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprint!("{}", to_json(&ErrorReport { error: e.code(), message: e.to_string() }));
            ExitCode::from(if matches!(e, Error::Parse { .. }) { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Invariants(a) => invariants(a, out),
        Command::Frame(a) => frame_cmd(a, out),
        Command::SerretMatrix(a) => serret_cmd(a, out),
        Command::Reconstruct(a) => reconstruct(a, &cfg, out),
        Command::Classify(a) => classify_cmd(a, &cfg, out),
        Command::Generate(a) => generate_cmd(a, &cfg, out),
        Command::Closedness(a) => closedness_cmd(a, &cfg, out),
        Command::Torus(a) => torus(a, &cfg, out),
        Command::Portrait(a) => portrait(a, &cfg, out),
        Command::GeodesicCheck(a) => geodesic_check(a, &cfg, out),
        Command::FirstVariation(a) => first_variation_cmd(a, &cfg, out),
        Command::Selftest => selftest::run(cfg.seed.unwrap_or(selftest::DEFAULT_SEED), out),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => write_text(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{name} must be positive (got {v})")))
    }
}

#[derive(Serialize)]
struct InvariantsJson {
    t: f64,
    #[serde(flatten)]
    report: lagframe::InvariantReport,
}

fn invariants(a: InvariantsArgs, out: Option<&Path>) -> Outcome {
    let c = load_curve(&a.curve)?;
    match (a.t, a.t0, a.t1) {
        (Some(t), _, _) => {
            let report = curvatures(&jet(&c, t, 5)?)?;
            emit(out, &to_json(&InvariantsJson { t, report }))
        }
        (None, Some(t0), Some(t1)) => {
            if a.samples < 2 {
                return Err(Failure::Usage("--samples must be at least 2".into()));
            }
            let mut rows = Vec::with_capacity(a.samples);
            for t in grid(t0, t1, a.samples) {
                let r = curvatures(&jet(&c, t, 5)?)?;
                rows.push(vec![t, r.k1, r.k2, r.k3, r.k4, r.phi]);
            }
            emit(out, &csv_table(&["t", "k1", "k2", "k3", "k4", "phi"], rows))
        }
        _ => Err(Failure::Usage("give --t or both --t0 and --t1".into())),
    }
}

#[derive(Serialize)]
struct FrameJson {
    section: CrossSection,
    t: f64,
    #[serde(flatten)]
    frame: FrameFile,
}

fn frame_cmd(a: FrameArgs, out: Option<&Path>) -> Outcome {
    let c = load_curve(&a.curve)?;
    let f = frame(a.section, &jet(&c, a.t, 4)?)?;
    emit(out, &to_json(&FrameJson { section: a.section, t: a.t, frame: FrameFile::from_frame(&f) }))
}

#[derive(Serialize)]
struct SerretJson {
    t: f64,
    #[serde(flatten)]
    data: lagframe::serret::MaurerCartanData<f64>,
}

fn serret_cmd(a: FrameArgs, out: Option<&Path>) -> Outcome {
    let c = load_curve(&a.curve)?;
    let report = curvatures(&jet(&c, a.t, 6)?)?;
    let data = serret_matrix(a.section, &report)?;
    emit(out, &to_json(&SerretJson { t: a.t, data }))
}

fn reconstruct(a: ReconstructArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let profile = load_profile(&a.profile)?;
    let h = positive("h", a.h.or(cfg.step).unwrap_or(DEFAULT_STEP))?;
    let init = match &a.init {
        Some(path) => from_json::<FrameFile>(&read_text(path)?)?.to_frame()?,
        None => GroupElement::identity(),
    };
    if let Some(tol) = a.adaptive {
        positive("adaptive", tol)?;
    }
    let opts = ReconstructOptions { section: a.section, adaptive_tol: a.adaptive, ..ReconstructOptions::default() };
    let r = integrate_with(&profile, (a.s0, a.s1), h, &init, &opts)?;
    log::info!("integrated {} steps, drift {:e}", r.s.len() - 1, r.drift);
    let rows = r.s.iter().zip(&r.frames).map(|(s, f)| {
        let p = f.origin();
        vec![*s, p[0], p[1], p[2], p[3], symplectic_defect(&f.linear)]
    });
    if let Some(path) = &a.frames {
        let dump: Vec<FrameFile> = r.frames.iter().map(FrameFile::from_frame).collect();
        write_text(path, &to_json(&dump))?;
    }
    emit(out, &csv_table(&["s", "x1", "x2", "x3", "x4", "drift"], rows))
}

#[derive(Serialize)]
struct ClassifyJson {
    case: CaseTag,
    mu: f64,
    nu: f64,
    k3: f64,
    k4: f64,
    closed: bool,
    m: Option<u64>,
    n: Option<u64>,
    length: Option<f64>,
    period: Option<f64>,
    geodesic: bool,
}

fn closed_tol(tol: Option<f64>, cfg: &JobConfig) -> Result<f64, Failure> {
    positive("tol", tol.or(cfg.tol).unwrap_or(1e-9))
}

fn classify_cmd(a: CurvatureArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    if !a.k3.is_finite() || !a.k4.is_finite() {
        return Err(Error::InvalidParameters("curvatures must be finite".into()).into());
    }
    let case = classify(a.k3, a.k4);
    let knot = closedness(a.k3, a.k4, closed_tol(a.tol, cfg)?).filter(|k| k.verified);
    let report = ClassifyJson {
        case: case.tag,
        mu: case.mu,
        nu: case.nu,
        k3: a.k3,
        k4: a.k4,
        closed: knot.is_some(),
        m: knot.map(|k| k.m),
        n: knot.map(|k| k.n),
        length: knot.map(|k| k.length),
        period: knot.map(|k| k.period),
        geodesic: case.tag.is_geodesic(),
    };
    emit(out, &to_json(&report))
}

fn generate_cmd(a: GenerateArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let n = a.samples.or(cfg.samples).unwrap_or(101);
    if n < 2 || !(a.t1 > a.t0) {
        return Err(Failure::Usage("need --samples >= 2 and --t1 > --t0".into()));
    }
    let c = generate(&ClassCase::new(a.case, a.mu, a.nu)?)?;
    match a.format {
        CurveFormat::Csv => {
            let mut rows = Vec::with_capacity(n);
            for t in grid(a.t0, a.t1, n) {
                let p = c.point(t)?;
                rows.push(vec![t, p[0], p[1], p[2], p[3]]);
            }
            emit(out, &csv_table(&["t", "x1", "x2", "x3", "x4"], rows))
        }
        CurveFormat::Json => {
            let s = sample(&c, a.t0, a.t1, n)?;
            emit(out, &to_json(&CurveFile::from_sampled(&s)))
        }
    }
}

#[derive(Serialize)]
struct ClosednessJson {
    closed: bool,
    #[serde(flatten)]
    knot: Option<lagframe::closedness::TorusKnotInfo>,
}

fn closedness_cmd(a: CurvatureArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let knot = closedness(a.k3, a.k4, closed_tol(a.tol, cfg)?);
    emit(out, &to_json(&ClosednessJson { closed: knot.is_some_and(|k| k.verified), knot }))
}

fn parse_grid(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--grid expects NxM with N, M >= 3 (got '{s}')"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = a.trim().parse().map_err(|_| bad())?;
    let m: usize = b.trim().parse().map_err(|_| bad())?;
    if n < 3 || m < 3 {
        return Err(bad());
    }
    Ok((n, m))
}

#[derive(Serialize)]
struct TorusJson {
    files: Vec<PathBuf>,
    n_s: usize,
    n_theta: usize,
    periods: (f64, f64),
    max_residual: f64,
    period_defects: (f64, f64),
    min_singular_value: f64,
    m: u64,
    n: u64,
}

fn torus(a: TorusArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let Some(path) = out else {
        return Err(Failure::Usage("torus needs --out FILE".into()));
    };
    let (n_s, n_theta) = parse_grid(&a.grid)?;
    let directrix = Directrix::closed(a.k3, a.k4, closed_tol(a.tol, cfg)?)?;
    let profile = make_profile(a.h, a.k3, a.branch, ProfileKind::Ellipse { z0: a.z0 })?;
    let mesh = molding_surface(&directrix, &profile, n_s, n_theta)?;
    let format = match a.format {
        MeshKind::Obj => MeshFormat::Obj,
        MeshKind::Csv => MeshFormat::Csv,
    };
    let files = export_mesh(&mesh, format, path, a.projection)?;
    let summary = TorusJson {
        files,
        n_s,
        n_theta,
        periods: mesh.periods,
        max_residual: mesh.max_residual,
        period_defects: mesh.period_defects,
        min_singular_value: mesh.min_singular_value,
        m: directrix.knot.m,
        n: directrix.knot.n,
    };
    print!("{}", to_json(&summary));
    Ok(())
}

fn portrait(a: PortraitArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let c = load_curve(&a.curve)?;
    let n = a.samples.or(cfg.samples).unwrap_or(201);
    if n < 2 || !(a.t1 > a.t0) {
        return Err(Failure::Usage("need --samples >= 2 and --t1 > --t0".into()));
    }
    let p = phase_portraits(&c, (a.t0, a.t1), n)?;
    log::info!("d-pair residual {:e}", p.dpair_residual);
    let rows = p.t.iter().zip(p.a.iter().zip(&p.b)).map(|(t, (a, b))| vec![*t, a[0], a[1], b[0], b[1]]);
    emit(out, &csv_table(&["t", "a_x", "a_y", "b_x", "b_y"], rows))
}

#[derive(Serialize)]
struct GeodesicJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<ClassCase>,
    verdict: bool,
    sup_k1p: f64,
    sup_k2: f64,
    tol: f64,
    samples: usize,
}

fn geodesic_check(a: GeodesicArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let (curve, case): (Curve, _) = match (a.k3, a.k4, &a.curve) {
        (Some(k3), Some(k4), None) => {
            let case = classify(k3, k4);
            (generate(&case)?, Some(case))
        }
        (None, None, Some(path)) => (load_curve(path)?, None),
        _ => return Err(Failure::Usage("give --k3 and --k4, or --curve".into())),
    };
    let tol = positive("tol", a.tol.or(cfg.tol).unwrap_or(GEODESIC_TOL))?;
    let samples = a.samples.or(cfg.samples).unwrap_or(101);
    let r = el_residual(&curve, (a.t0, a.t1), samples, tol)?;
    emit(
        out,
        &to_json(&GeodesicJson { case, verdict: r.verdict, sup_k1p: r.sup_k1p, sup_k2: r.sup_k2, tol: r.tol, samples }),
    )
}

fn first_variation_cmd(a: FirstVariationArgs, cfg: &JobConfig, out: Option<&Path>) -> Outcome {
    let c = load_curve(&a.curve)?;
    let var: Variation = from_json(&read_text(&a.var)?)?;
    let eps = positive("epsilon", a.epsilon.or(cfg.epsilon).unwrap_or(1e-4))?;
    let nodes = a.nodes.unwrap_or(FIRST_VARIATION_NODES);
    let fv = first_variation_with(&c, &var, eps, nodes)?;
    emit(out, &to_json(&fv))
}
