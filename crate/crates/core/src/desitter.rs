//! Curves on the de Sitter sphere `<X,X> = 1`.
//!
//! Points are written in latitude/longitude form
//! `(cosh φ cos θ, cosh φ sin θ, sinh φ)`. A spacelike closed curve is stored
//! through any periodic parametrization `t -> (θ(t), φ(t))` with a continuous
//! longitude lift; arc length comes from an [`ArcTable`]. Along the curve the
//! adapted frame is
//!
//! ```text
//! e1 = (cosh φ cos θ, cosh φ sin θ, sinh φ)
//! e2 = (-sin θ, cos θ, 0)
//! e3 = (sinh φ cos θ, sinh φ sin θ, cosh φ)
//! ```
//!
//! and the angle `τ` is defined by `cosh τ = cosh φ θ'`, `sinh τ = φ'`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::arclength::ArcTable;
use crate::curve::{require_strong_spacelike, tangent_turns, ClosedCurve};
use crate::error::{Error, Result};
use crate::lorentz::LorentzVector;

/// Default scan density for zero counting.
pub const DEFAULT_SCAN: usize = 4096;
/// Largest scan density reached by adaptive doubling.
const MAX_SCAN: usize = 1 << 18;
/// Stand-in for an unbounded Lemma threshold.
pub const THRESHOLD_CAP: f64 = 1e6;

/// Longitude, latitude and their derivatives in some curve parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatLong {
    pub theta: f64,
    pub phi: f64,
    pub dtheta: f64,
    pub dphi: f64,
}

impl LatLong {
    pub fn point(&self) -> LorentzVector {
        let (s, c) = self.theta.sin_cos();
        LorentzVector::new(self.phi.cosh() * c, self.phi.cosh() * s, self.phi.sinh())
    }

    /// Squared Lorentz speed `cosh²φ θ'² - φ'²`.
    pub fn speed_sq(&self) -> f64 {
        (self.phi.cosh() * self.dtheta).powi(2) - self.dphi * self.dphi
    }
}

/// A periodic `(θ, φ)` parametrization. `theta` must be a continuous lift on
/// `[0, period]`.
pub trait SphericalParam: Send + Sync {
    fn period(&self) -> f64;
    fn eval(&self, t: f64) -> LatLong;
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Samples of `e1` and `de1/dt` on a uniform parameter grid.
struct ScanGrid {
    ts: Vec<f64>,
    e1: Vec<LorentzVector>,
    de1: Vec<LorentzVector>,
}

#[derive(Clone)]
pub struct SphericalCurve {
    param: Arc<dyn SphericalParam>,
    table: ArcTable,
    index: u32,
    label: String,
    scans: Arc<Mutex<HashMap<usize, Arc<ScanGrid>>>>,
}

impl fmt::Debug for SphericalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphericalCurve")
            .field("label", &self.label)
            .field("length", &self.length())
            .field("index", &self.index)
            .finish()
    }
}

/// One sample of the adapted frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptedFrame {
    pub e1: LorentzVector,
    pub e2: LorentzVector,
    pub e3: LorentzVector,
    pub tau: f64,
}

/// Arc-length quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcPoint {
    pub s: f64,
    pub theta: f64,
    pub phi: f64,
    /// dθ/ds
    pub theta_s: f64,
    /// dφ/ds
    pub phi_s: f64,
}

impl ArcPoint {
    pub fn tau(&self) -> f64 {
        self.phi_s.asinh()
    }
}

pub(crate) fn frame_vectors(theta: f64, phi: f64) -> [LorentzVector; 3] {
    let (s, c) = theta.sin_cos();
    let (sh, ch) = (phi.sinh(), phi.cosh());
    [
        LorentzVector::new(ch * c, ch * s, sh),
        LorentzVector::new(-s, c, 0.0),
        LorentzVector::new(sh * c, sh * s, ch),
    ]
}

impl SphericalCurve {
    /// Validates spacelikeness, monotone longitude and closure on a grid of
    /// `n_samples` points and builds the arc-length table.
    pub fn new(param: impl SphericalParam + 'static, n_samples: usize, label: impl Into<String>) -> Result<Self> {
        Self::from_arc(Arc::new(param), n_samples, label.into())
    }

    fn from_arc(param: Arc<dyn SphericalParam>, n_samples: usize, label: String) -> Result<Self> {
        let p = param.period();
        let n = n_samples.max(16);
        let mut ts: Vec<f64> = (0..n).map(|i| p * i as f64 / n as f64).collect();
        ts.extend(param.breakpoints());
        for &t in &ts {
            let ll = param.eval(t);
            if !(ll.speed_sq() > 0.0) {
                return Err(Error::NotSpacelike { t });
            }
            if !(ll.dtheta > 0.0) {
                return Err(Error::BadParameter(format!("longitude not increasing at t = {t}")));
            }
        }
        let turns = (param.eval(p).theta - param.eval(0.0).theta) / TAU;
        let rounded = turns.round();
        if (turns - rounded).abs() > 1e-6 || rounded < 1.0 {
            return Err(Error::NonIntegerWinding { turns });
        }
        let speed = |t: f64| param.eval(t).speed_sq().sqrt();
        let table = ArcTable::build(&speed, p, n, &param.breakpoints());
        Ok(Self {
            param,
            table,
            index: rounded as u32,
            label,
            scans: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn length(&self) -> f64 {
        self.table.length()
    }

    pub fn period(&self) -> f64 {
        self.param.period()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.param.breakpoints()
    }

    /// Longitude increase over one period, `2Iπ`.
    pub fn delta_theta(&self) -> f64 {
        TAU * self.index as f64
    }

    /// Evaluation in the curve parameter, extended periodically.
    pub fn eval_t(&self, t: f64) -> LatLong {
        let p = self.period();
        let laps = (t / p).floor();
        let mut ll = self.param.eval(t - laps * p);
        ll.theta += laps * self.delta_theta();
        ll
    }

    pub fn speed_t(&self, t: f64) -> f64 {
        self.eval_t(t).speed_sq().sqrt()
    }

    pub fn t_of_s(&self, s: f64) -> f64 {
        self.table.t_of_s(&|t| self.speed_t(t), s)
    }

    pub fn s_of_t(&self, t: f64) -> f64 {
        self.table.s_of_t(&|t| self.speed_t(t), t)
    }

    fn arc_point_t(&self, t: f64, s: f64) -> ArcPoint {
        let ll = self.eval_t(t);
        let v = ll.speed_sq().sqrt();
        ArcPoint {
            s,
            theta: ll.theta,
            phi: ll.phi,
            theta_s: ll.dtheta / v,
            phi_s: ll.dphi / v,
        }
    }

    /// Point data at arc length `s`.
    pub fn at(&self, s: f64) -> ArcPoint {
        self.arc_point_t(self.t_of_s(s), s)
    }

    /// Point data at curve parameter `t`.
    pub fn at_param(&self, t: f64) -> ArcPoint {
        self.arc_point_t(t, f64::NAN)
    }

    pub fn point(&self, s: f64) -> LorentzVector {
        let a = self.at(s);
        frame_vectors(a.theta, a.phi)[0]
    }

    /// `max |cosh²φ θ'² - φ'² - 1|` over `n` arc-length samples.
    pub fn arclength_residual(&self, n: usize) -> f64 {
        (0..n)
            .map(|i| {
                let a = self.at(self.length() * i as f64 / n as f64);
                ((a.phi.cosh() * a.theta_s).powi(2) - a.phi_s.powi(2) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Uniform parameter grid plus breakpoints, sorted.
    pub fn sample_params(&self, n: usize) -> Vec<f64> {
        let p = self.period();
        let mut ts: Vec<f64> = (0..n).map(|i| p * i as f64 / n as f64).collect();
        ts.extend(self.breakpoints());
        ts.sort_by(f64::total_cmp);
        ts
    }

    fn scan_grid(&self, n: usize) -> Arc<ScanGrid> {
        let mut cache = self.scans.lock().expect("scan cache poisoned");
        cache
            .entry(n)
            .or_insert_with(|| {
                let p = self.period();
                let ts: Vec<f64> = (0..n).map(|i| p * i as f64 / n as f64).collect();
                let (e1, de1) = ts
                    .iter()
                    .map(|&t| {
                        let ll = self.eval_t(t);
                        let [e1, e2, e3] = frame_vectors(ll.theta, ll.phi);
                        (e1, e2 * (ll.phi.cosh() * ll.dtheta) + e3 * ll.dphi)
                    })
                    .unzip();
                Arc::new(ScanGrid { ts, e1, de1 })
            })
            .clone()
    }

    fn g_and_dg(&self, y: &LorentzVector, t: f64) -> (f64, f64) {
        let ll = self.eval_t(t);
        let [e1, e2, e3] = frame_vectors(ll.theta, ll.phi);
        let de1 = e2 * (ll.phi.cosh() * ll.dtheta) + e3 * ll.dphi;
        (e1.inner(y), de1.inner(y))
    }

    /// Image of the curve under a Lorentz-orthochronous map that keeps the
    /// longitude increasing is not expressible in closed form, so transformed
    /// curves are resampled through this wrapper.
    pub fn transformed(&self, m: &crate::lorentz::LorentzTransform) -> Result<Self> {
        let param = TransformedSpherical::new(self.clone(), *m);
        Self::from_arc(Arc::new(param), DEFAULT_SCAN, format!("{} (transformed)", self.label))
    }
}

/// Adapted frame at arc length `s`.
pub fn adapted_frame(curve: &SphericalCurve, s: f64) -> AdaptedFrame {
    let a = curve.at(s);
    let [e1, e2, e3] = frame_vectors(a.theta, a.phi);
    AdaptedFrame {
        e1,
        e2,
        e3,
        tau: a.tau(),
    }
}

/// Arc-length derivatives of the adapted frame:
///
/// ```text
/// e1' = cosh τ e2 + sinh τ e3
/// e2' = -cosh φ θ' e1 + sinh φ θ' e3
/// e3' = sinh τ e1 + sinh φ θ' e2
/// ```
pub fn frame_derivatives(a: &ArcPoint) -> [LorentzVector; 3] {
    let [e1, e2, e3] = frame_vectors(a.theta, a.phi);
    let (ch, sh) = (a.phi.cosh(), a.phi.sinh());
    [
        e2 * (ch * a.theta_s) + e3 * a.phi_s,
        e1 * (-ch * a.theta_s) + e3 * (sh * a.theta_s),
        e1 * a.phi_s + e2 * (sh * a.theta_s),
    ]
}

/// Latitude and longitude of a point on the de Sitter sphere; the longitude is
/// the principal value in `[0, 2π)`.
pub fn to_latlong(p: &LorentzVector) -> Result<(f64, f64)> {
    let residual = p.norm_sq() - 1.0;
    if residual.abs() > 1e-8 || !p.is_finite() {
        return Err(Error::NotOnDeSitter { residual });
    }
    let phi = p.x3.asinh();
    let theta = p.x2.atan2(p.x1).rem_euclid(TAU);
    Ok((phi, theta))
}

/// Tangent indicatrix parametrized by the curve parameter of `curve`.
struct IndicatrixParam {
    curve: ClosedCurve,
    lift: Vec<f64>,
}

impl IndicatrixParam {
    fn new(curve: ClosedCurve, n: usize) -> Self {
        let p = curve.period();
        let mut lift = Vec::with_capacity(n + 1);
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let d = curve.jet(p * i as f64 / n as f64).d1;
            let raw = d.x2.atan2(d.x1);
            let v = match prev {
                None => raw,
                Some(q) => raw + TAU * ((q - raw) / TAU).round(),
            };
            lift.push(v);
            prev = Some(v);
        }
        Self { curve, lift }
    }
}

impl SphericalParam for IndicatrixParam {
    fn period(&self) -> f64 {
        self.curve.period()
    }

    fn eval(&self, t: f64) -> LatLong {
        let j = self.curve.jet(t);
        let vv = j.d1.norm_sq();
        let v = vv.sqrt();
        let tangent = j.d1 / v;
        let dtangent = (j.d2 - j.d1 * (j.d1.inner(&j.d2) / vv)) / v;
        let phi = tangent.x3.asinh();
        let raw = j.d1.x2.atan2(j.d1.x1);
        let n = self.lift.len() - 1;
        let x = (t / self.period()).clamp(0.0, 1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let reference = self.lift[i] + (self.lift[i + 1] - self.lift[i]) * (x - i as f64);
        let theta = raw + TAU * ((reference - raw) / TAU).round();
        let horiz = j.d1.x1 * j.d1.x1 + j.d1.x2 * j.d1.x2;
        LatLong {
            theta,
            phi,
            dtheta: (j.d1.x1 * j.d2.x2 - j.d1.x2 * j.d2.x1) / horiz,
            dphi: dtangent.x3 / phi.cosh(),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.curve.breakpoints()
    }
}

/// Tangent indicatrix of a strong spacelike closed curve, oriented so that
/// its longitude increases.
pub fn tangent_indicatrix(curve: &ClosedCurve) -> Result<SphericalCurve> {
    require_strong_spacelike(curve, 2048)?;
    let oriented = if tangent_turns(curve) < 0.0 {
        curve.reversed()
    } else {
        curve.clone()
    };
    let param = IndicatrixParam::new(oriented, 8192);
    SphericalCurve::new(param, DEFAULT_SCAN, format!("indicatrix of {}", curve.label()))
}

struct TransformedSpherical {
    base: SphericalCurve,
    m: crate::lorentz::LorentzTransform,
    lift: Vec<f64>,
}

impl TransformedSpherical {
    fn new(base: SphericalCurve, m: crate::lorentz::LorentzTransform) -> Self {
        let n = 8192;
        let p = base.period();
        let mut lift = Vec::with_capacity(n + 1);
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let q = m.apply(&base.eval_t(p * i as f64 / n as f64).point());
            let raw = q.x2.atan2(q.x1);
            let v = match prev {
                None => raw,
                Some(pv) => raw + TAU * ((pv - raw) / TAU).round(),
            };
            lift.push(v);
            prev = Some(v);
        }
        Self { base, m, lift }
    }
}

impl SphericalParam for TransformedSpherical {
    fn period(&self) -> f64 {
        self.base.period()
    }
    fn eval(&self, t: f64) -> LatLong {
        let ll = self.base.eval_t(t);
        let [e1, e2, e3] = frame_vectors(ll.theta, ll.phi);
        let q = self.m.apply(&e1);
        let dq = self.m.apply(&(e2 * (ll.phi.cosh() * ll.dtheta) + e3 * ll.dphi));
        let phi = q.x3.asinh();
        let raw = q.x2.atan2(q.x1);
        let n = self.lift.len() - 1;
        let x = (t / self.period()).clamp(0.0, 1.0) * n as f64;
        let i = (x.floor() as usize).min(n - 1);
        let reference = self.lift[i] + (self.lift[i + 1] - self.lift[i]) * (x - i as f64);
        let horiz = q.x1 * q.x1 + q.x2 * q.x2;
        LatLong {
            theta: raw + TAU * ((reference - raw) / TAU).round(),
            phi,
            dtheta: (q.x1 * dq.x2 - q.x2 * dq.x1) / horiz,
            dphi: dq.x3 / phi.cosh(),
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.base.breakpoints()
    }
}

/// The closed geodesic `Y⊥ ∩ S²₁` as `c(u) = cos u E1 + sin u E2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geodesic {
    pub pole: LorentzVector,
    pub e1: LorentzVector,
    pub e2: LorentzVector,
}

impl Geodesic {
    pub fn point(&self, u: f64) -> LorentzVector {
        let (s, c) = u.sin_cos();
        self.e1 * c + self.e2 * s
    }

    pub fn tangent(&self, u: f64) -> LorentzVector {
        let (s, c) = u.sin_cos();
        self.e2 * c - self.e1 * s
    }
}

fn det3(a: &LorentzVector, b: &LorentzVector, c: &LorentzVector) -> f64 {
    a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - a.x2 * (b.x1 * c.x3 - b.x3 * c.x1) + a.x3 * (b.x1 * c.x2 - b.x2 * c.x1)
}

/// Geodesic with pole `y`; `E1` is the normalized projection of `(1,0,0)`
/// onto `Y⊥` and `(E1, E2, Y)` is positively oriented.
pub fn geodesic_from_pole(y: &LorentzVector) -> Result<Geodesic> {
    if (y.norm_sq() + 1.0).abs() > 1e-10 || y.x3 <= 0.0 || !y.is_finite() {
        return Err(Error::NotInH2);
    }
    let x = LorentzVector::new(1.0, 0.0, 0.0);
    let proj = x + *y * x.inner(y);
    let e1 = proj / proj.norm_sq().sqrt();
    let mut e2 = y.cross(&e1);
    e2 = e2 / e2.norm_sq().sqrt();
    if det3(&e1, &e2, y) < 0.0 {
        e2 = -e2;
    }
    Ok(Geodesic { pole: *y, e1, e2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionResult {
    pub count: usize,
    /// Arc-length positions of the intersections (empty in count-only mode).
    pub locations: Vec<f64>,
    pub degenerate: bool,
    /// Smallest `|d<e1, Y>/ds|` over the roots.
    pub min_transversality: f64,
    /// Scan density that produced the result.
    pub scan: usize,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let positive_a = fa >= 0.0;
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (f(m) >= 0.0) == positive_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn scan_once(curve: &SphericalCurve, y: &LorentzVector, n: usize, tol: f64, refine: bool) -> IntersectionResult {
    let grid = curve.scan_grid(n);
    let p = curve.period();
    let h = p / n as f64;
    let band = tol * y.euclid_norm_sq().sqrt();
    let g = |i: usize| grid.e1[if i == n { 0 } else { i }].inner(y);
    let dg = |i: usize| grid.de1[if i == n { 0 } else { i }].inner(y);

    let mut result = IntersectionResult {
        count: 0,
        locations: Vec::new(),
        degenerate: false,
        min_transversality: f64::INFINITY,
        scan: n,
    };

    let gf = |t: f64| curve.g_and_dg(y, t).0;
    let dgf = |t: f64| curve.g_and_dg(y, t).1;
    let mut roots_t = Vec::new();
    let mut all_small = true;
    let (mut ga, mut dga) = (g(0), dg(0));
    for i in 0..n {
        let (gb, dgb) = (g(i + 1), dg(i + 1));
        all_small &= ga.abs() <= band;
        let (a, b) = (grid.ts[i], if i + 1 == n { p } else { grid.ts[i + 1] });
        let sign_change = (ga >= 0.0) != (gb >= 0.0);
        let extremum = (dga >= 0.0) != (dgb >= 0.0);
        // an extremum can only reach zero (or the tangency band) if the
        // endpoint values are small on the scale of the slope across the cell
        let reachable = ga.abs().min(gb.abs()) <= band + h * (2.0 * dga.abs().max(dgb.abs()) + (dgb - dga).abs());
        let mut hidden = false;
        if extremum && reachable {
            let te = bisect(dgf, a, b, dga);
            let ge = gf(te);
            if ge.abs() <= band {
                result.degenerate = true;
            }
            if !sign_change && (ge >= 0.0) != (ga >= 0.0) {
                // two roots hidden inside one scan cell
                hidden = true;
                result.count += 2;
                if refine {
                    roots_t.push(bisect(gf, a, te, ga));
                    roots_t.push(bisect(gf, te, b, ge));
                }
            }
        }
        if sign_change && !hidden {
            result.count += 1;
            if refine {
                roots_t.push(bisect(gf, a, b, ga));
            }
        }
        ga = gb;
        dga = dgb;
    }
    if all_small {
        result.degenerate = true;
        result.count = 0;
        result.min_transversality = 0.0;
        return result;
    }
    if refine {
        for t in roots_t {
            let (_, d) = curve.g_and_dg(y, t);
            let margin = (d / curve.speed_t(t)).abs();
            result.min_transversality = result.min_transversality.min(margin);
            result.locations.push(curve.s_of_t(t));
        }
    }
    result
}

fn count_adaptive(
    curve: &SphericalCurve,
    y: &LorentzVector,
    n_scan: usize,
    tol: f64,
    refine: bool,
) -> Result<IntersectionResult> {
    if y.euclid_norm_sq() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut n = n_scan.max(16);
    let mut previous = scan_once(curve, y, n, tol, false);
    loop {
        if previous.degenerate || n >= MAX_SCAN {
            break;
        }
        let next = scan_once(curve, y, 2 * n, tol, false);
        n *= 2;
        let stable = next.count == previous.count && !next.degenerate;
        previous = next;
        if stable {
            break;
        }
    }
    if refine {
        Ok(scan_once(curve, y, n, tol, true))
    } else {
        Ok(previous)
    }
}

/// Counts the zeros of `<e1(s), Y>` over one period, with locations and
/// transversality margins. `Y` may have any causal type.
pub fn intersection_count(
    curve: &SphericalCurve,
    y: &LorentzVector,
    n_scan: usize,
    tol: f64,
) -> Result<IntersectionResult> {
    count_adaptive(curve, y, n_scan, tol, true)
}

/// Same count as [`intersection_count`] without root refinement.
pub fn intersection_number(
    curve: &SphericalCurve,
    y: &LorentzVector,
    n_scan: usize,
    tol: f64,
) -> Result<IntersectionResult> {
    count_adaptive(curve, y, n_scan, tol, false)
}

/// Pointwise bound `cosh φ / sqrt(sinh²φ + tanh²τ)` below which the zero
/// count of `<e1, (cos β, sin β, a)>` stays `2I`.
pub fn lemma_bound_at(a: &ArcPoint) -> f64 {
    let tanh_tau = a.phi_s / (a.phi.cosh() * a.theta_s);
    let denom = (a.phi.sinh().powi(2) + tanh_tau * tanh_tau).sqrt();
    if denom == 0.0 {
        f64::INFINITY
    } else {
        a.phi.cosh() / denom
    }
}

/// Threshold `a* > 1` such that every `Y = (cos β, sin β, a)` with
/// `1 < |a| < a*` meets the curve exactly `2I` times. Half of the grid margin
/// is kept in reserve.
pub fn lemma_threshold(curve: &SphericalCurve) -> f64 {
    let bound = curve
        .sample_params(8192)
        .into_iter()
        .map(|t| lemma_bound_at(&curve.at_param(t)))
        .fold(f64::INFINITY, f64::min);
    if !bound.is_finite() || bound > THRESHOLD_CAP {
        return THRESHOLD_CAP;
    }
    1.0 + 0.5 * (bound - 1.0)
}

/// `f_a(s) = θ(s) - arcsin(a tanh φ(s))` and its derivative.
pub fn lemma_monotone_function(a_point: &ArcPoint, a: f64) -> (f64, f64) {
    let th = a_point.phi.tanh();
    let f = a_point.theta - (a * th).asin();
    let ch = a_point.phi.cosh();
    let df = a_point.theta_s - a * a_point.phi_s / (ch * (ch * ch - (a * a_point.phi.sinh()).powi(2)).sqrt());
    (f, df)
}

/// Wrap an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}
