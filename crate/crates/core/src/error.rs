use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no causal type")]
    ZeroVector,
    #[error("curve is not spacelike at parameter t = {t}")]
    NotSpacelike { t: f64 },
    #[error("curvature vector degenerates (inflection point) at s = {s}")]
    InflectionPoint { s: f64 },
    #[error("osculating plane is not spacelike at s = {s}")]
    NotStrongSpacelike { s: f64 },
    #[error("longitude increase {turns} turns is not an integer")]
    NonIntegerWinding { turns: f64 },
    #[error("point is off the de Sitter sphere: <p,p> - 1 = {residual:e}")]
    NotOnDeSitter { residual: f64 },
    #[error("point is not on the upper hyperboloid")]
    NotInH2,
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("radius too small: cosh R = {cosh_r} but the curve needs more than {needed}")]
    RadiusTooSmall { cosh_r: f64, needed: f64 },
    #[error("index {found} where index {expected} is required")]
    WrongIndex { expected: u32, found: u32 },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("sample slot {slot} stayed degenerate after {redraws} redraws")]
    DegenerateDomain { slot: usize, redraws: usize },
    #[error("invalid curve data: {0}")]
    InvalidCurve(String),
}
