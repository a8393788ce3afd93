//! Numerical checks of the Crofton identities over the hyperbolic plane of
//! poles and of the total-curvature theorems built on them.
//!
//! For a closed spacelike curve `Γ` of index `I` on the de Sitter sphere and a
//! disk `ℍ²_R` large enough to contain every pole whose geodesic meets `Γ`
//! at a point of latitude `φ` with `τ` inside the admissible range,
//!
//! ```text
//! ∫_{ℍ²_R} n(Y⊥) dY = 2 cosh R · 2Iπ - 2 L(Γ)
//! L(Γ) - 2Iπ = -½ ∫_{ℍ²} (n(Y⊥) - 2I) dY
//! ```
//!
//! Left-hand sides are evaluated either by quadrature over the pole patch
//! `(s, ψ)` or by Monte Carlo over area-uniform samples of the disk.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{total_curvature, winding_index, ClosedCurve};
use crate::desitter::{intersection_number, lemma_threshold, tangent_indicatrix, SphericalCurve};
use crate::error::{Error, Result};
use crate::hyperbolic::{choose_radius, h2_area, psi_bounds, radius_requirements, DiskSampler};
use crate::lorentz::LorentzVector;
use crate::quadrature::{gauss_kronrod_21, pairwise_sum, Quadrature};

/// Band (relative to `|Y|`) inside which a geodesic counts as tangent.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Initial scan density for the many counts of a Monte Carlo run; the
/// adaptive doubling and extremum refinement keep the counts exact.
pub const MC_SCAN: usize = 256;
/// Redraws allowed per Monte Carlo slot before giving up.
pub const MAX_REDRAWS: usize = 10;
/// Absolute slack on total-curvature inequalities.
pub const TC_TOL: f64 = 1e-9;
/// Agreement required between the numeric and closed-form inner integrals.
pub const INNER_TOL: f64 = 1e-8;
/// Relative tolerance of the quadrature form of the localized identity.
pub const QUADRATURE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    MonteCarlo,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub curve: String,
    pub method: Method,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub stderr: Option<f64>,
    pub degenerate_samples: usize,
    pub flags: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
    /// Seconds; kept out of the serialized record so that reruns compare equal.
    #[serde(skip)]
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn new(identity: &str, curve: &str, method: Method, lhs: f64, rhs: f64) -> Self {
        let abs_residual = (lhs - rhs).abs();
        let rel_residual = if rhs != 0.0 {
            abs_residual / rhs.abs()
        } else {
            abs_residual
        };
        Self {
            identity: identity.to_string(),
            curve: curve.to_string(),
            method,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            tolerance: 0.0,
            passed: false,
            n_samples: None,
            seed: None,
            stderr: None,
            degenerate_samples: 0,
            flags: Vec::new(),
            metrics: BTreeMap::new(),
            wall_time: 0.0,
        }
    }

    fn metric(mut self, key: &str, value: f64) -> Self {
        self.metrics.insert(key.to_string(), value);
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed().as_secs_f64();
        self
    }
}

/// Returns `cosh R` after checking `cosh R >= max cosh φ` and
/// `cosh R >= max cosh²φ θ'` along the curve.
pub fn check_radius(curve: &SphericalCurve, radius: f64) -> Result<f64> {
    if !(radius >= 0.0) {
        return Err(Error::NegativeRadius(radius));
    }
    let cosh_r = radius.cosh();
    let (m1, m2) = radius_requirements(curve, 8192);
    let needed = m1.max(m2);
    if cosh_r < needed {
        return Err(Error::RadiusTooSmall { cosh_r, needed });
    }
    Ok(cosh_r)
}

/// `2 cosh R · 2Iπ - 2 L`.
pub fn localized_rhs(curve: &SphericalCurve, radius: f64) -> Result<f64> {
    let cosh_r = check_radius(curve, radius)?;
    Ok(2.0 * cosh_r * curve.delta_theta() - 2.0 * curve.length())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureLhs {
    pub value: f64,
    /// Largest `|numeric inner integral - (2 cosh R θ' - 2)|` over the nodes.
    pub max_inner_defect: f64,
    pub nodes: usize,
}

/// `∫ sinh|τ - ψ| dψ` over `|ψ| <= ψ*` by adaptive quadrature.
pub fn inner_integral_numeric(tau: f64, psi_max: f64) -> f64 {
    let q = Quadrature::new(1e-14, 1e-14);
    let bp: Vec<f64> = if tau.abs() < psi_max { vec![tau] } else { Vec::new() };
    q.integrate(|psi| (tau - psi).abs().sinh(), -psi_max, psi_max, &bp)
        .value
}

/// Pole-patch quadrature of the localized left-hand side with `n_s` outer
/// Gauss-Kronrod panels in arc length.
pub fn localized_lhs_quadrature(curve: &SphericalCurve, radius: f64, n_s: usize) -> Result<QuadratureLhs> {
    let cosh_r = check_radius(curve, radius)?;
    let len = curve.length();
    let mut cuts: Vec<f64> = curve
        .breakpoints()
        .into_iter()
        .map(|t| curve.s_of_t(t).rem_euclid(len))
        .filter(|&s| s > 0.0 && s < len)
        .collect();
    cuts.push(0.0);
    cuts.push(len);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let n_s = n_s.max(cuts.len());
    let mut panels = Vec::with_capacity(n_s);
    for w in cuts.windows(2) {
        let m = ((n_s as f64 * (w[1] - w[0]) / len).ceil() as usize).max(1);
        let h = (w[1] - w[0]) / m as f64;
        panels.extend((0..m).map(|i| (w[0] + i as f64 * h, w[0] + (i + 1) as f64 * h)));
    }
    let pieces: Vec<(f64, f64, usize)> = panels
        .par_iter()
        .map(|&(a, b)| {
            let defect = std::cell::Cell::new(0.0f64);
            let count = std::cell::Cell::new(0usize);
            let f = |s: f64| {
                let p = curve.at(s);
                let closed = 2.0 * cosh_r * p.theta_s - 2.0;
                let (_, psi_max) = psi_bounds(cosh_r, p.phi).expect("radius checked");
                let numeric = inner_integral_numeric(p.tau(), psi_max);
                defect.set(defect.get().max((numeric - closed).abs()));
                count.set(count.get() + 1);
                closed
            };
            let (v, _) = gauss_kronrod_21(&f, a, b);
            (v, defect.get(), count.get())
        })
        .collect();
    let values: Vec<f64> = pieces.iter().map(|p| p.0).collect();
    Ok(QuadratureLhs {
        value: pairwise_sum(&values),
        max_inner_defect: pieces.iter().map(|p| p.1).fold(0.0, f64::max),
        nodes: pieces.iter().map(|p| p.2).sum(),
    })
}

/// Monte Carlo estimate of a disk integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
    pub radius: f64,
    /// Total redraws caused by tangent geodesics.
    pub degenerate: usize,
    pub min_count: usize,
    pub max_count: usize,
}

/// `area(ℍ²_R) · mean f(n(Y⊥))` over `n` area-uniform poles. Slot `i` draws
/// from its own stream, so results do not depend on the thread count.
fn mc_integral<F>(curve: &SphericalCurve, radius: f64, n: usize, seed: u64, f: F) -> Result<McEstimate>
where
    F: Fn(usize) -> f64 + Sync,
{
    if n < 2 {
        return Err(Error::BadParameter("Monte Carlo needs at least 2 samples".into()));
    }
    let sampler = DiskSampler::new(radius, seed)?;
    let area = h2_area(radius)?;
    let draws: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .map(|slot| {
            let mut rng = sampler.rng(slot);
            for redraws in 0..=MAX_REDRAWS {
                let y = sampler.draw(&mut rng).vector();
                let r = intersection_number(curve, &y, MC_SCAN, DEGENERATE_TOL)?;
                if !r.degenerate {
                    return Ok((r.count, redraws));
                }
            }
            Err(Error::DegenerateDomain {
                slot,
                redraws: MAX_REDRAWS,
            })
        })
        .collect::<Result<_>>()?;
    let vals: Vec<f64> = draws.iter().map(|d| f(d.0)).collect();
    let mean = pairwise_sum(&vals) / n as f64;
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).powi(2)).collect();
    let var = pairwise_sum(&dev) / (n - 1) as f64;
    Ok(McEstimate {
        estimate: area * mean,
        stderr: area * (var / n as f64).sqrt(),
        n,
        seed,
        radius,
        degenerate: draws.iter().map(|d| d.1).sum(),
        min_count: draws.iter().map(|d| d.0).min().unwrap_or(0),
        max_count: draws.iter().map(|d| d.0).max().unwrap_or(0),
    })
}

/// Monte Carlo estimate of `∫_{ℍ²_R} n(Y⊥) dY`.
pub fn localized_lhs_mc(curve: &SphericalCurve, radius: f64, n: usize, seed: u64) -> Result<McEstimate> {
    check_radius(curve, radius)?;
    mc_integral(curve, radius, n, seed, |c| c as f64)
}

/// Monte Carlo estimate of `∫_{ℍ²_R} (n(Y⊥) - 2I) dY`.
pub fn excess_integral_mc(curve: &SphericalCurve, radius: f64, n: usize, seed: u64) -> Result<McEstimate> {
    check_radius(curve, radius)?;
    let two_i = 2.0 * curve.index() as f64;
    mc_integral(curve, radius, n, seed, |c| c as f64 - two_i)
}

/// Localized identity by quadrature over the pole patch.
pub fn verify_localized_quadrature(curve: &SphericalCurve, radius: f64, n_s: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let rhs = localized_rhs(curve, radius)?;
    let q = localized_lhs_quadrature(curve, radius, n_s)?;
    let mut rep = VerificationReport::new("crofton-local", curve.label(), Method::Quadrature, q.value, rhs)
        .metric("radius", radius)
        .metric("max_inner_defect", q.max_inner_defect)
        .metric("length", curve.length())
        .metric("index", curve.index() as f64);
    rep.tolerance = QUADRATURE_REL_TOL;
    rep.n_samples = Some(q.nodes);
    rep.passed = rep.rel_residual < QUADRATURE_REL_TOL && q.max_inner_defect < INNER_TOL;
    if q.max_inner_defect >= INNER_TOL {
        rep.flags.push("inner integral disagrees with closed form".into());
    }
    Ok(rep.timed(start))
}

/// Localized identity by Monte Carlo: passes within 3 standard errors and 1%.
pub fn verify_localized_mc(curve: &SphericalCurve, radius: f64, n: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let rhs = localized_rhs(curve, radius)?;
    let mc = localized_lhs_mc(curve, radius, n, seed)?;
    let mut rep = VerificationReport::new("crofton-local", curve.label(), Method::MonteCarlo, mc.estimate, rhs)
        .metric("radius", radius)
        .metric("min_count", mc.min_count as f64)
        .metric("max_count", mc.max_count as f64);
    rep.tolerance = 0.01;
    rep.n_samples = Some(n);
    rep.seed = Some(seed);
    rep.stderr = Some(mc.stderr);
    rep.degenerate_samples = mc.degenerate;
    rep.passed = rep.abs_residual <= 3.0 * mc.stderr + 1e-12 * rhs.abs() && rep.rel_residual < 0.01;
    if mc.stderr > 0.0 {
        rep.metrics.insert("sigmas".into(), rep.abs_residual / mc.stderr);
    }
    Ok(rep.timed(start))
}

/// Global identity `L - 2Iπ = -½ ∫(n - 2I) dY` on the disk of radius `radius`.
pub fn global_residual_at(curve: &SphericalCurve, radius: f64, n: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mc = excess_integral_mc(curve, radius, n, seed)?;
    let two_i_pi = curve.delta_theta();
    let lhs = curve.length() - two_i_pi;
    let rhs = -0.5 * mc.estimate;
    let sigma = 0.5 * mc.stderr;
    let mut rep = VerificationReport::new("crofton-global", curve.label(), Method::MonteCarlo, lhs, rhs)
        .metric("radius", radius)
        .metric("excess_integral", mc.estimate)
        .metric("excess_integral_expected", -2.0 * curve.length() + 2.0 * two_i_pi)
        .metric("length", curve.length())
        .metric("index", curve.index() as f64);
    let tol = (3.0 * sigma).max(1e-2);
    rep.tolerance = tol;
    rep.n_samples = Some(n);
    rep.seed = Some(seed);
    rep.stderr = Some(sigma);
    rep.degenerate_samples = mc.degenerate;
    rep.passed = rep.abs_residual < tol;
    Ok(rep.timed(start))
}

/// Global identity on the disk chosen by [`choose_radius`] with safety 2.
pub fn global_residual(curve: &SphericalCurve, n: usize, seed: u64) -> Result<VerificationReport> {
    global_residual_at(curve, choose_radius(curve, 2.0)?, n, seed)
}

/// Certified index and total curvature of a closed curve, or the error that
/// blocks them.
fn index_and_tc(curve: &ClosedCurve, expected: u32) -> Result<f64> {
    let tc = total_curvature(curve)?;
    let found = winding_index(curve)?;
    if found != expected {
        return Err(Error::WrongIndex { expected, found });
    }
    Ok(tc)
}

/// Largest `|<p, Y>|` over indicatrix samples `p`, where `Y` is the unit
/// normal of the plane through the origin spanned by two samples. Zero iff the
/// indicatrix is a closed geodesic, i.e. the curve is planar.
fn plane_defect(ind: &SphericalCurve) -> f64 {
    let pts: Vec<LorentzVector> = ind
        .sample_params(8192)
        .into_iter()
        .map(|t| ind.eval_t(t).point())
        .collect();
    let a = pts[0];
    let y = pts
        .iter()
        .map(|b| a.cross(b))
        .max_by(|u, v| u.euclid_norm_sq().total_cmp(&v.euclid_norm_sq()))
        .expect("samples");
    let y = y / y.euclid_norm_sq().sqrt();
    pts.iter().map(|p| p.inner(&y).abs()).fold(0.0, f64::max)
}

/// Total curvature of an index-1 curve against `2π`.
pub fn verify_fenchel(curve: &ClosedCurve) -> Result<VerificationReport> {
    let start = Instant::now();
    let tc = index_and_tc(curve, 1)?;
    let ind = tangent_indicatrix(curve)?;
    let plane_defect = plane_defect(&ind);
    let mut rep = VerificationReport::new("fenchel", curve.label(), Method::Quadrature, tc, TAU)
        .metric("total_curvature", tc)
        .metric("indicatrix_plane_defect", plane_defect);
    rep.tolerance = TC_TOL;
    rep.passed = tc <= TAU + TC_TOL;
    if plane_defect < 1e-7 {
        rep.flags.push("equality: convex plane curve".into());
    } else if tc < TAU - TC_TOL {
        rep.flags.push("strict inequality".into());
    }
    Ok(rep.timed(start))
}

/// A pole whose geodesic meets the indicatrix exactly twice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleWitness {
    pub pole: LorentzVector,
    pub sample: usize,
}

/// Poles of the disk of radius `radius` whose geodesic meets `ind` exactly
/// twice, among `n` area-uniform samples.
pub fn search_count_two_poles(ind: &SphericalCurve, radius: f64, n: usize, seed: u64) -> Result<Vec<PoleWitness>> {
    let sampler = DiskSampler::new(radius, seed)?;
    let hits: Vec<Option<PoleWitness>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = sampler.draw(&mut sampler.rng(i)).vector();
            let r = intersection_number(ind, &y, MC_SCAN, DEGENERATE_TOL)?;
            Ok((!r.degenerate && r.count == 2).then_some(PoleWitness { pole: y, sample: i }))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Total curvature of an index-2 curve against `4π`, plus a search for poles
/// with two intersections, each of which would certify the curve unknotted.
/// With `knotted` set the check passes iff `TC < 4π` and no such pole turns
/// up; otherwise the figures are reported and the check passes.
pub fn verify_fary_milnor(curve: &ClosedCurve, knotted: bool, n_poles: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let tc = index_and_tc(curve, 2)?;
    let ind = tangent_indicatrix(curve)?;
    let radius = choose_radius(&ind, 2.0)?;
    let witnesses = search_count_two_poles(&ind, radius, n_poles, seed)?;
    let mut rep = VerificationReport::new("fary-milnor", curve.label(), Method::Quadrature, tc, 2.0 * TAU)
        .metric("total_curvature", tc)
        .metric("count_two_poles", witnesses.len() as f64)
        .metric("search_radius", radius);
    rep.tolerance = TC_TOL;
    rep.n_samples = Some(n_poles);
    rep.seed = Some(seed);
    if let Some(w) = witnesses.first() {
        rep = rep
            .metric("witness_x1", w.pole.x1)
            .metric("witness_x2", w.pole.x2)
            .metric("witness_x3", w.pole.x3);
        rep.flags.push("count-2 pole found: unknotted".into());
    }
    if knotted {
        rep.flags.push("knotted (caller supplied)".into());
        rep.passed = tc < 2.0 * TAU && witnesses.is_empty();
    } else {
        rep.passed = true;
    }
    Ok(rep.timed(start))
}

/// Poles `(cos β, sin β, a)`: `n_each` with `|a| <= 1` and `n_each` with
/// `1 < |a| < a*`. Every one must meet the curve exactly `2I` times.
pub fn verify_lemma_2i(curve: &SphericalCurve, n_each: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let a_star = lemma_threshold(curve);
    let sampler = DiskSampler::new(1.0, seed)?;
    let expected = 2 * curve.index() as usize;
    let results: Vec<(bool, bool)> = (0..2 * n_each)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampler.rng(i);
            let beta = rng.gen::<f64>() * TAU;
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let a = if i < n_each {
                // include the lightlike endpoints
                match i % 50 {
                    0 => sign,
                    _ => rng.gen_range(-1.0..=1.0),
                }
            } else {
                sign * (1.0 + (a_star - 1.0) * rng.gen_range(f64::EPSILON..1.0))
            };
            let y = LorentzVector::new(beta.cos(), beta.sin(), a);
            let r = intersection_number(curve, &y, MC_SCAN, DEGENERATE_TOL)?;
            Ok((r.count == expected, r.degenerate))
        })
        .collect::<Result<_>>()?;
    let exceptions = results.iter().filter(|r| !r.0).count();
    let degenerate = results.iter().filter(|r| r.1).count();
    let mut rep = VerificationReport::new("lemma-2i", curve.label(), Method::ClosedForm, exceptions as f64, 0.0)
        .metric("threshold", a_star)
        .metric("index", curve.index() as f64);
    rep.n_samples = Some(2 * n_each);
    rep.seed = Some(seed);
    rep.degenerate_samples = degenerate;
    rep.passed = exceptions == 0;
    Ok(rep.timed(start))
}

/// `L(Γ) - 2Iπ` should be negative whenever every pole meets `Γ` at least
/// `2I` times; exposed for reports.
pub fn length_defect(curve: &SphericalCurve) -> f64 {
    curve.length() - curve.delta_theta()
}
