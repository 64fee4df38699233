//! File formats: JSON inputs with strict keys, CSV and JSON outputs with
//! every number written to 17 significant digits.

use crate::classify::{generate, CaseTag, ClassCase};
use crate::curve::{Curve, SampledCurve};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{Mat4, Vector};
use crate::reconstruct::CurvatureProfile;
use crate::scalar::Elementary;
use crate::symplectic::MovingFrame;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::io;
use std::path::Path;

/// Scientific notation with 17 significant digits; round-trips every `f64`.
/// Non-finite values are written as `NaN`, `inf` or `-inf`.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV line of numbers.
pub fn csv_row(values: &[f64]) -> String {
    let mut out = values.iter().map(|&v| number(v)).collect::<Vec<_>>().join(",");
    out.push('\n');
    out
}

/// A CSV table with a header line.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&csv_row(&r));
    }
    out
}

/// Parse a CSV table written by [`csv_table`], checking the header.
pub fn parse_csv_table(text: &str, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines();
    let head = lines.next().unwrap_or("");
    if head.trim() != header.join(",") {
        return Err(Error::Parse { line: 1, column: 1, message: format!("expected header '{}'", header.join(",")) });
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(header.len());
        let mut column = 1;
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|e| Error::Parse { line: n + 2, column, message: format!("{e}: '{field}'") })?;
            row.push(v);
            column += field.len() + 1;
        }
        if row.len() != header.len() {
            return Err(Error::Parse {
                line: n + 2,
                column: 1,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `serde_json` formatter: pretty layout, floats with 17 significant digits,
/// non-finite floats as `null`.
struct Digits17<'a>(serde_json::ser::PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident $(, $arg:ident : $ty:ty)*);* $(;)?) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl serde_json::ser::Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(number(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward! {
        begin_array;
        end_array;
        begin_array_value, first: bool;
        end_array_value;
        begin_object;
        end_object;
        begin_object_key, first: bool;
        begin_object_value;
        end_object_value;
    }
}

/// Pretty JSON with 17-digit numbers and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(serde_json::ser::PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

/// Parse JSON, mapping syntax and schema errors to [`Error::Parse`] with the
/// reported position.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    Ok(std::fs::write(path, text)?)
}

/// Curve input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveFile {
    /// Uniform samples `γ(t0 + i·h)`.
    Samples {
        t0: f64,
        h: f64,
        points: Vec<[f64; 4]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        accuracy: Option<usize>,
    },
    /// The normal form of a classified constant-curvature curve.
    Classified {
        case: String,
        #[serde(default)]
        mu: f64,
        #[serde(default)]
        nu: f64,
    },
}

impl CurveFile {
    pub fn to_curve(&self) -> Result<Curve<f64>> {
        match self {
            CurveFile::Samples { t0, h, points, accuracy } => {
                let pts = points.iter().map(|p| Vector(*p)).collect();
                let mut s = SampledCurve::new(*t0, *h, pts)?;
                if let Some(a) = accuracy {
                    s = s.with_accuracy(*a)?;
                }
                Ok(Curve::sampled(s))
            }
            CurveFile::Classified { case, mu, nu } => {
                let tag: CaseTag = case.parse()?;
                generate(&ClassCase::new(tag, *mu, *nu)?)
            }
        }
    }

    pub fn from_sampled(s: &SampledCurve<f64>) -> Self {
        CurveFile::Samples {
            t0: s.t0,
            h: s.h,
            points: s.points.iter().map(|p| p.0).collect(),
            accuracy: Some(s.accuracy),
        }
    }
}

pub fn load_curve_file(path: &Path) -> Result<CurveFile> {
    from_json(&read_text(path)?)
}

pub fn load_curve(path: &Path) -> Result<Curve<f64>> {
    load_curve_file(path)?.to_curve()
}

/// `mean + Σ amp·sin(freq·s + phase)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigSeries {
    #[serde(default)]
    pub mean: f64,
    #[serde(default)]
    pub terms: Vec<TrigTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub amp: f64,
    pub freq: f64,
    #[serde(default)]
    pub phase: f64,
}

impl TrigSeries {
    pub fn eval(&self, s: Jet<f64>) -> Jet<f64> {
        self.terms
            .iter()
            .fold(Jet::constant(self.mean).truncate(s.len()), |acc, t| acc + (s * t.freq + t.phase).sin() * t.amp)
    }
}

/// Curvature profile input file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileFile {
    /// Arc-length Lagrangian profile with constant `κ₃, κ₄`.
    Constant { k3: f64, k4: f64 },
    /// Lagrangian profile (`κ₁ = 0`) with trigonometric `κ₂, κ₃, κ₄`.
    Trig { k2: TrigSeries, k3: TrigSeries, k4: TrigSeries },
    /// Uniform samples of `(κ₁, κ₂, κ₃, κ₄)` from `s0` with spacing `h`.
    Tabulated { s0: f64, h: f64, values: Vec<[f64; 4]> },
}

impl ProfileFile {
    pub fn to_profile(&self) -> Result<CurvatureProfile<f64>> {
        match self {
            ProfileFile::Constant { k3, k4 } => Ok(CurvatureProfile::constant(*k3, *k4)),
            ProfileFile::Trig { k2, k3, k4 } => {
                let (a, b, c) = (k2.clone(), k3.clone(), k4.clone());
                Ok(CurvatureProfile::lagrangian(move |s| [a.eval(s), b.eval(s), c.eval(s)]))
            }
            ProfileFile::Tabulated { s0, h, values } => {
                let pts = values.iter().map(|p| Vector(*p)).collect();
                Ok(CurvatureProfile::Tabulated(SampledCurve::new(*s0, *h, pts)?))
            }
        }
    }
}

pub fn load_profile(path: &Path) -> Result<CurvatureProfile<f64>> {
    from_json::<ProfileFile>(&read_text(path)?)?.to_profile()
}

/// Initial frame file: origin and the four basis columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub origin: [f64; 4],
    pub columns: [[f64; 4]; 4],
}

impl FrameFile {
    pub fn from_frame(f: &MovingFrame<f64>) -> Self {
        FrameFile { origin: f.origin().0, columns: [0, 1, 2, 3].map(|j| f.linear.column(j).0) }
    }

    /// The frame, rejected when the basis is not symplectic.
    pub fn to_frame(&self) -> Result<MovingFrame<f64>> {
        let linear = Mat4::from_columns(&self.columns.map(Vector));
        MovingFrame::new(Vector(self.origin), linear)
    }
}
