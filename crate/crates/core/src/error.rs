use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("linear part is not symplectic (defect {defect:.3e})")]
    NotSymplectic { defect: f64 },
    #[error("parameter {t} is outside the sampled window")]
    OutOfRange { t: f64 },
    #[error("jet order {requested} exceeds the maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },
    #[error("curve is not Lagrangian (residual {residual:.3e})")]
    NotLagrangian { residual: f64 },
    #[error("Λ(γ″,γ‴) is not positive at t = {t}")]
    OrientationViolation { t: f64 },
    #[error("plane curve has an inflection at t = {t}")]
    InflectionPoint { t: f64 },
    #[error("second-order frame cannot be completed at t = {t}")]
    FrameCompletionFailed { t: f64 },
    #[error("cross-section {section} is not transverse (measure {measure:.3e})")]
    SectionNotTransverse { section: &'static str, measure: f64 },
    #[error("curvature profile is singular at s = {s} (κ₂ vanishes)")]
    ProfileSingularity { s: f64 },
    #[error("step at s = {s} rejected (error estimate {estimate:.3e})")]
    StepRejected { s: f64, estimate: f64 },
    #[error("curve is not linearly full")]
    NotFull,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("operation not supported for case {0}")]
    UnsupportedCase(String),
    #[error("no closed profile curve exists on the requested branch: {0}")]
    EmptyBranch(String),
    #[error("directrix is not closed")]
    NotClosed,
    #[error("curvatures outside the torus window (need κ₃ > 0 and κ₃² − κ₄ > 0)")]
    CurvatureWindowViolated,
    #[error("curve is not parametrized by symplectic arc length (defect {defect:.3e})")]
    NotArcLength { defect: f64 },
    #[error("variation is not admissible (defect {defect:.3e})")]
    VariationNotAdmissible { defect: f64 },
    #[error("perturbed curve violates the Lagrangian constraint (residual {residual:.3e})")]
    LagrangianViolated { residual: f64 },
    #[error("variation is not smooth enough: {0}")]
    SmoothnessInsufficient(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSymplectic { .. } => "NotSymplectic",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::OrderTooHigh { .. } => "OrderTooHigh",
            Error::NotLagrangian { .. } => "NotLagrangian",
            Error::OrientationViolation { .. } => "OrientationViolation",
            Error::InflectionPoint { .. } => "InflectionPoint",
            Error::FrameCompletionFailed { .. } => "FrameCompletionFailed",
            Error::SectionNotTransverse { .. } => "SectionNotTransverse",
            Error::ProfileSingularity { .. } => "ProfileSingularity",
            Error::StepRejected { .. } => "StepRejected",
            Error::NotFull => "NotFull",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::EmptyBranch(_) => "EmptyBranch",
            Error::NotClosed => "NotClosed",
            Error::CurvatureWindowViolated => "CurvatureWindowViolated",
            Error::NotArcLength { .. } => "NotArcLength",
            Error::VariationNotAdmissible { .. } => "VariationNotAdmissible",
            Error::LagrangianViolated { .. } => "LagrangianViolated",
            Error::SmoothnessInsufficient(_) => "SmoothnessInsufficient",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse { .. } => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
