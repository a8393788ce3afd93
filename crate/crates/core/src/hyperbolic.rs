//! The hyperbolic plane as the upper sheet `<X,X> = -1, x3 > 0`, read as the
//! space of poles of oriented closed geodesics on the de Sitter sphere.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::desitter::SphericalCurve;
use crate::error::{Error, Result};
use crate::lorentz::LorentzVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicPoint(LorentzVector);

impl HyperbolicPoint {
    pub fn new(v: LorentzVector) -> Result<Self> {
        if !v.is_finite() || v.x3 < 1.0 - 1e-12 || (v.norm_sq() + 1.0).abs() > 1e-10 * v.x3 * v.x3 {
            return Err(Error::NotInH2);
        }
        Ok(Self(v))
    }

    /// `(sinh r cos θ, sinh r sin θ, cosh r)`
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self(LorentzVector::new(r.sinh() * c, r.sinh() * s, r.cosh()))
    }

    pub fn vector(&self) -> LorentzVector {
        self.0
    }

    /// Hyperbolic distance to `(0, 0, 1)`.
    pub fn radius(&self) -> f64 {
        self.0.x3.acosh()
    }
}

/// The closed geodesic disk `1 <= x3 <= cosh R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskRegion {
    radius: f64,
}

impl DiskRegion {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::BadParameter(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, p: &HyperbolicPoint) -> bool {
        p.0.x3 <= self.radius.cosh()
    }

    pub fn area(&self) -> f64 {
        TAU * (self.radius.cosh() - 1.0)
    }
}

/// Area `2π(cosh R - 1)` of the disk of radius `R`.
pub fn h2_area(radius: f64) -> Result<f64> {
    if radius < 0.0 || radius.is_nan() {
        return Err(Error::NegativeRadius(radius));
    }
    Ok(TAU * (radius.cosh() - 1.0))
}

/// Area-uniform sampler on a disk. Slot `i` owns ChaCha stream `i` of the
/// seed, so draws do not depend on evaluation order.
#[derive(Debug, Clone, Copy)]
pub struct DiskSampler {
    cosh_r: f64,
    seed: u64,
}

impl DiskSampler {
    pub fn new(radius: f64, seed: u64) -> Result<Self> {
        DiskRegion::new(radius)?;
        Ok(Self {
            cosh_r: radius.cosh(),
            seed,
        })
    }

    pub fn rng(&self, slot: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(slot as u64);
        rng
    }

    pub fn draw(&self, rng: &mut ChaCha8Rng) -> HyperbolicPoint {
        let theta = rng.gen::<f64>() * TAU;
        let u = rng.gen::<f64>();
        let x3 = 1.0 + u * (self.cosh_r - 1.0);
        let rho = ((x3 - 1.0) * (x3 + 1.0)).sqrt();
        let (s, c) = theta.sin_cos();
        HyperbolicPoint(LorentzVector::new(rho * c, rho * s, x3))
    }
}

/// `n` i.i.d. area-uniform points of the disk of radius `R`.
pub fn sample_disk(radius: f64, n: usize, seed: u64) -> Result<Vec<HyperbolicPoint>> {
    let sampler = DiskSampler::new(radius, seed)?;
    Ok((0..n)
        .into_par_iter()
        .map(|i| sampler.draw(&mut sampler.rng(i)))
        .collect())
}

/// Grid maxima of `cosh φ` and `cosh²φ θ'` along the curve.
pub fn radius_requirements(curve: &SphericalCurve, n: usize) -> (f64, f64) {
    curve
        .sample_params(n)
        .into_iter()
        .map(|t| {
            let a = curve.at_param(t);
            let ch = a.phi.cosh();
            (ch, ch * ch * a.theta_s)
        })
        .fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |(m1, m2), (a, b)| {
            (m1.max(a), m2.max(b))
        })
}

const RADIUS_FLOOR: f64 = 1e-6;

/// Radius with `cosh R = safety · max(max cosh φ, max cosh²φ θ')`, kept
/// away from zero so the disk is never empty.
pub fn choose_radius(curve: &SphericalCurve, safety: f64) -> Result<f64> {
    if !(safety >= 1.0) {
        return Err(Error::BadParameter(format!("safety factor must be >= 1, got {safety}")));
    }
    let (m1, m2) = radius_requirements(curve, 8192);
    Ok((safety * m1.max(m2)).acosh().max(RADIUS_FLOOR))
}

/// Pulled-back area density `sinh|τ - ψ|` of the pole patch.
pub fn pole_patch_area_element(tau: f64, psi: f64) -> f64 {
    (tau - psi).abs().sinh()
}

/// Pole patch `Y(s, ψ) = sinh ψ e2(s) + cosh ψ e3(s)`.
pub fn pole_patch(theta: f64, phi: f64, psi: f64) -> LorentzVector {
    let [_, e2, e3] = crate::desitter::frame_vectors(theta, phi);
    e2 * psi.sinh() + e3 * psi.cosh()
}

/// The `ψ` range `[-ψ*, ψ*]` with `cosh ψ* = cosh R / cosh φ` of poles in the
/// disk whose geodesic passes through a point of latitude `φ`.
pub fn psi_bounds(cosh_r: f64, phi: f64) -> Option<(f64, f64)> {
    let c = cosh_r / phi.cosh();
    if c < 1.0 {
        None
    } else {
        let p = c.acosh();
        Some((-p, p))
    }
}
