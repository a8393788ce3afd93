//! Closed C² curves in Lorentz 3-space and their Frenet apparatus.
//!
//! A [`ClosedCurve`] is any periodic parametrization able to report position
//! and the first three derivatives. Arc length is handled by
//! [`ArcLengthCurve`], which re-expresses the same jets with respect to `s`.
//! Strong spacelike curves (spacelike with spacelike osculating plane and no
//! inflection point) carry a Frenet frame `T, N, B` with `B` timelike and
//!
//! ```text
//! T' = k N,   N' = -k T + τ B,   B' = τ N.
//! ```

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arclength::ArcTable;
use crate::error::{Error, Result};
use crate::lorentz::{LorentzTransform, LorentzVector};
use crate::quadrature::Quadrature;
use crate::spline::PeriodicSpline;

/// Default arc-length table resolution.
pub const DEFAULT_ARC_SAMPLES: usize = 4096;
/// Normalized inflection / certification threshold.
pub const STRONG_TOL: f64 = 1e-10;

/// Position and first three derivatives at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub pos: LorentzVector,
    pub d1: LorentzVector,
    pub d2: LorentzVector,
    pub d3: LorentzVector,
}

/// A periodic parametrized curve.
pub trait CurveParam: Send + Sync {
    fn period(&self) -> f64;
    fn jet(&self, t: f64) -> Jet;
    /// Parameters in `[0, period)` where the third derivative may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Clone)]
pub struct ClosedCurve {
    param: Arc<dyn CurveParam>,
    label: String,
}

impl fmt::Debug for ClosedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedCurve")
            .field("label", &self.label)
            .field("period", &self.period())
            .finish()
    }
}

impl ClosedCurve {
    pub fn new(param: impl CurveParam + 'static, label: impl Into<String>) -> Self {
        Self {
            param: Arc::new(param),
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn period(&self) -> f64 {
        self.param.period()
    }

    pub fn jet(&self, t: f64) -> Jet {
        self.param.jet(t)
    }

    pub fn position(&self, t: f64) -> LorentzVector {
        self.param.jet(t).pos
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.param.breakpoints()
    }

    /// Image under a Lorentz transform.
    pub fn transformed(&self, m: &LorentzTransform) -> Self {
        Self {
            param: Arc::new(Transformed {
                inner: self.param.clone(),
                m: *m,
            }),
            label: format!("{} (transformed)", self.label),
        }
    }

    /// Same image traversed backwards: `t -> period - t`.
    pub fn reversed(&self) -> Self {
        Self {
            param: Arc::new(Reversed {
                inner: self.param.clone(),
            }),
            label: self.label.clone(),
        }
    }

    /// Lorentz speed `sqrt<γ', γ'>`; NaN where timelike.
    pub fn speed(&self, t: f64) -> f64 {
        self.jet(t).d1.norm_sq().sqrt()
    }

    /// `k ds/dt`, i.e. the integrand of total curvature in the curve's own parameter.
    fn curvature_density(&self, t: f64) -> f64 {
        let j = self.jet(t);
        let vv = j.d1.norm_sq();
        let gram = vv * j.d2.norm_sq() - j.d1.inner(&j.d2).powi(2);
        gram.max(0.0).sqrt() / vv
    }

    /// Longitude speed of the tangent direction.
    fn tangent_longitude_rate(&self, t: f64) -> f64 {
        let j = self.jet(t);
        (j.d1.x1 * j.d2.x2 - j.d1.x2 * j.d2.x1) / (j.d1.x1 * j.d1.x1 + j.d1.x2 * j.d1.x2)
    }

    fn sample_params(&self, n: usize) -> Vec<f64> {
        let p = self.period();
        let mut ts: Vec<f64> = (0..n).map(|i| p * i as f64 / n as f64).collect();
        ts.extend(self.breakpoints());
        ts
    }
}

struct Transformed {
    inner: Arc<dyn CurveParam>,
    m: LorentzTransform,
}

impl CurveParam for Transformed {
    fn period(&self) -> f64 {
        self.inner.period()
    }
    fn jet(&self, t: f64) -> Jet {
        let j = self.inner.jet(t);
        Jet {
            pos: self.m.apply(&j.pos),
            d1: self.m.apply(&j.d1),
            d2: self.m.apply(&j.d2),
            d3: self.m.apply(&j.d3),
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints()
    }
}

struct Reversed {
    inner: Arc<dyn CurveParam>,
}

impl CurveParam for Reversed {
    fn period(&self) -> f64 {
        self.inner.period()
    }
    fn jet(&self, t: f64) -> Jet {
        let j = self.inner.jet(self.inner.period() - t);
        Jet {
            pos: j.pos,
            d1: -j.d1,
            d2: j.d2,
            d3: -j.d3,
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        let p = self.inner.period();
        self.inner
            .breakpoints()
            .into_iter()
            .map(|b| if b == 0.0 { 0.0 } else { p - b })
            .collect()
    }
}

/// Truncated Fourier series per coordinate. Each coordinate lists
/// `(cos, sin)` coefficient pairs for harmonics `0, 1, 2, ...`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierCurve {
    pub period: f64,
    pub coeffs: [Vec<(f64, f64)>; 3],
}

impl FourierCurve {
    pub fn new(period: f64, coeffs: [Vec<(f64, f64)>; 3]) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidCurve(format!("bad period {period}")));
        }
        if coeffs.iter().any(|c| c.is_empty()) {
            return Err(Error::InvalidCurve(
                "Fourier coefficient lists must be non-empty".into(),
            ));
        }
        if coeffs.iter().flatten().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidCurve("non-finite Fourier coefficient".into()));
        }
        Ok(Self { period, coeffs })
    }

    fn coordinate(&self, c: &[(f64, f64)], t: f64) -> [f64; 4] {
        let w = TAU / self.period;
        let mut out = [0.0; 4];
        out[0] = c[0].0;
        for (k, &(a, b)) in c.iter().enumerate().skip(1) {
            let kw = k as f64 * w;
            let (s, co) = (kw * t).sin_cos();
            out[0] += a * co + b * s;
            out[1] += kw * (-a * s + b * co);
            out[2] += kw * kw * (-a * co - b * s);
            out[3] += kw * kw * kw * (a * s - b * co);
        }
        out
    }
}

impl CurveParam for FourierCurve {
    fn period(&self) -> f64 {
        self.period
    }
    fn jet(&self, t: f64) -> Jet {
        let [x, y, z] = [
            self.coordinate(&self.coeffs[0], t),
            self.coordinate(&self.coeffs[1], t),
            self.coordinate(&self.coeffs[2], t),
        ];
        Jet {
            pos: LorentzVector::new(x[0], y[0], z[0]),
            d1: LorentzVector::new(x[1], y[1], z[1]),
            d2: LorentzVector::new(x[2], y[2], z[2]),
            d3: LorentzVector::new(x[3], y[3], z[3]),
        }
    }
}

/// Periodic cubic spline through sampled points.
#[derive(Debug, Clone)]
pub struct SplineCurve {
    coords: [PeriodicSpline; 3],
    origin: f64,
}

impl SplineCurve {
    /// Requires at least 8 samples.
    pub fn new(params: &[f64], points: &[LorentzVector], period: f64) -> Result<Self> {
        if params.len() < 8 || points.len() != params.len() {
            return Err(Error::InvalidCurve(
                "spline curves need at least 8 sample points".into(),
            ));
        }
        let col = |f: fn(&LorentzVector) -> f64| points.iter().map(f).collect::<Vec<_>>();
        Ok(Self {
            coords: [
                PeriodicSpline::new(params, &col(|p| p.x1), period)?,
                PeriodicSpline::new(params, &col(|p| p.x2), period)?,
                PeriodicSpline::new(params, &col(|p| p.x3), period)?,
            ],
            origin: params[0],
        })
    }
}

impl CurveParam for SplineCurve {
    fn period(&self) -> f64 {
        self.coords[0].period()
    }
    fn jet(&self, t: f64) -> Jet {
        let [x, y, z] = [
            self.coords[0].eval(t + self.origin),
            self.coords[1].eval(t + self.origin),
            self.coords[2].eval(t + self.origin),
        ];
        Jet {
            pos: LorentzVector::new(x[0], y[0], z[0]),
            d1: LorentzVector::new(x[1], y[1], z[1]),
            d2: LorentzVector::new(x[2], y[2], z[2]),
            d3: LorentzVector::new(x[3], y[3], z[3]),
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.coords[0].knots().iter().map(|k| k - self.origin).collect()
    }
}

/// A closed curve together with its arc-length table.
#[derive(Debug, Clone)]
pub struct ArcLengthCurve {
    curve: ClosedCurve,
    table: ArcTable,
}

/// Returns the curve with arc length as its parameter.
pub fn reparametrize_arclength(curve: &ClosedCurve, n_samples: usize) -> Result<ArcLengthCurve> {
    for t in curve.sample_params(n_samples.max(8)) {
        let vv = curve.jet(t).d1.norm_sq();
        if !(vv > 0.0) {
            return Err(Error::NotSpacelike { t });
        }
    }
    let speed = |t: f64| curve.speed(t);
    let table = ArcTable::build(&speed, curve.period(), n_samples.max(8), &curve.breakpoints());
    Ok(ArcLengthCurve {
        curve: curve.clone(),
        table,
    })
}

impl ArcLengthCurve {
    pub fn length(&self) -> f64 {
        self.table.length()
    }

    pub fn curve(&self) -> &ClosedCurve {
        &self.curve
    }

    pub fn t_of_s(&self, s: f64) -> f64 {
        self.table.t_of_s(&|t| self.curve.speed(t), s)
    }

    pub fn s_of_t(&self, t: f64) -> f64 {
        self.table.s_of_t(&|t| self.curve.speed(t), t)
    }

    /// Derivatives with respect to arc length at `s`.
    pub fn jet_s(&self, s: f64) -> Jet {
        let j = self.curve.jet(self.t_of_s(s));
        let v = j.d1.norm_sq().sqrt();
        let vt = j.d1.inner(&j.d2) / v;
        let vtt = (j.d2.norm_sq() + j.d1.inner(&j.d3) - vt * vt) / v;
        let t1 = 1.0 / v;
        let t2 = -vt / (v * v * v);
        let t3 = -vtt / v.powi(4) + 3.0 * vt * vt / v.powi(5);
        Jet {
            pos: j.pos,
            d1: j.d1 * t1,
            d2: j.d2 * (t1 * t1) + j.d1 * t2,
            d3: j.d3 * (t1 * t1 * t1) + j.d2 * (3.0 * t1 * t2) + j.d1 * t3,
        }
    }

    /// The same curve as a [`ClosedCurve`] in the arc-length parameter.
    pub fn to_closed_curve(&self) -> ClosedCurve {
        ClosedCurve {
            param: Arc::new(self.clone()),
            label: format!("{} (arc length)", self.curve.label),
        }
    }
}

impl CurveParam for ArcLengthCurve {
    fn period(&self) -> f64 {
        self.length()
    }
    fn jet(&self, s: f64) -> Jet {
        self.jet_s(s)
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.curve.breakpoints().into_iter().map(|b| self.s_of_t(b)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetData {
    pub t: LorentzVector,
    pub n: LorentzVector,
    pub b: LorentzVector,
    pub curvature: f64,
    pub torsion: f64,
}

/// Frenet frame at arc length `s`. `B` is chosen future-directed.
pub fn frenet_apparatus(curve: &ArcLengthCurve, s: f64) -> Result<FrenetData> {
    let j = curve.jet_s(s);
    let kk = j.d2.norm_sq();
    let scale = curve.length().powi(2);
    if kk * scale < -STRONG_TOL {
        return Err(Error::NotStrongSpacelike { s });
    }
    if kk * scale <= STRONG_TOL {
        return Err(Error::InflectionPoint { s });
    }
    let k = kk.sqrt();
    let t = j.d1;
    let n = j.d2 / k;
    let mut b = t.cross(&n);
    if b.x3 < 0.0 {
        b = -b;
    }
    let torsion = -j.d3.inner(&b) / k;
    Ok(FrenetData {
        t,
        n,
        b,
        curvature: k,
        torsion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongSpacelikeReport {
    pub verdict: bool,
    /// Minimum of `<γ',γ'> / |γ'|²` (scale free).
    pub min_tangent_margin: f64,
    /// Minimum of `<γ_ss, γ_ss> L²`; positive iff the osculating plane is spacelike.
    pub min_plane_margin: f64,
    /// Minimum of `k L`.
    pub min_curvature: f64,
    /// Parameter of the sample with the smallest margin.
    pub worst_t: f64,
}

/// Samples the three strong-spacelike conditions at `n_samples` parameters.
pub fn certify_strong_spacelike(curve: &ClosedCurve, n_samples: usize, tol: f64) -> StrongSpacelikeReport {
    let ts = curve.sample_params(n_samples.max(8));
    let p = curve.period();
    // Lorentz length of |v| as a scale; equals L when the curve is spacelike.
    let scale_len: f64 = (0..n_samples.max(8))
        .map(|i| {
            curve
                .jet(p * i as f64 / n_samples.max(8) as f64)
                .d1
                .norm_sq()
                .abs()
                .sqrt()
        })
        .sum::<f64>()
        * p
        / n_samples.max(8) as f64;
    let l2 = scale_len * scale_len;

    let mut report = StrongSpacelikeReport {
        verdict: false,
        min_tangent_margin: f64::INFINITY,
        min_plane_margin: f64::INFINITY,
        min_curvature: f64::INFINITY,
        worst_t: 0.0,
    };
    let mut worst = f64::INFINITY;
    for t in ts {
        let j = curve.jet(t);
        let vv = j.d1.norm_sq();
        let tangent = vv / j.d1.euclid_norm_sq();
        let gram = vv * j.d2.norm_sq() - j.d1.inner(&j.d2).powi(2);
        let (plane, curv) = if vv > 0.0 {
            let kk = gram / vv.powi(3);
            (kk * l2, if kk > 0.0 { kk.sqrt() * scale_len } else { 0.0 })
        } else {
            (gram * l2 / j.d1.euclid_norm_sq().powi(3), 0.0)
        };
        report.min_tangent_margin = report.min_tangent_margin.min(tangent);
        report.min_plane_margin = report.min_plane_margin.min(plane);
        report.min_curvature = report.min_curvature.min(curv);
        let local = tangent.min(plane).min(curv);
        if local < worst {
            worst = local;
            report.worst_t = t;
        }
    }
    report.verdict = report.min_tangent_margin > tol && report.min_plane_margin > tol && report.min_curvature > tol;
    report
}

/// Checks the strong spacelike conditions on a grid, returning the matching error.
pub(crate) fn require_strong_spacelike(curve: &ClosedCurve, n_samples: usize) -> Result<()> {
    let rep = certify_strong_spacelike(curve, n_samples, STRONG_TOL);
    if rep.verdict {
        return Ok(());
    }
    if rep.min_tangent_margin <= STRONG_TOL {
        Err(Error::NotSpacelike { t: rep.worst_t })
    } else if rep.min_plane_margin < -STRONG_TOL {
        Err(Error::NotStrongSpacelike { s: rep.worst_t })
    } else {
        Err(Error::InflectionPoint { s: rep.worst_t })
    }
}

/// Signed number of turns of the tangent longitude over one period.
pub fn tangent_turns(curve: &ClosedCurve) -> f64 {
    let q = Quadrature::default();
    q.integrate(
        |t| curve.tangent_longitude_rate(t),
        0.0,
        curve.period(),
        &curve.breakpoints(),
    )
    .value
        / TAU
}

/// Index: the winding number of the tangent indicatrix, taken positive.
pub fn winding_index(curve: &ClosedCurve) -> Result<u32> {
    let turns = tangent_turns(curve);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::NonIntegerWinding { turns });
    }
    Ok(rounded.abs() as u32)
}

/// Total curvature `∫ k ds`.
pub fn total_curvature(curve: &ClosedCurve) -> Result<f64> {
    require_strong_spacelike(curve, 2048)?;
    let q = Quadrature::new(1e-14, 1e-13);
    Ok(q.integrate(
        |t| curve.curvature_density(t),
        0.0,
        curve.period(),
        &curve.breakpoints(),
    )
    .value)
}

/// Arc length `∫ sqrt<γ',γ'> dt`.
pub fn curve_length(curve: &ClosedCurve) -> Result<f64> {
    Ok(reparametrize_arclength(curve, DEFAULT_ARC_SAMPLES)?.length())
}
