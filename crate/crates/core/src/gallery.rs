//! Builtin curve families.
//!
//! Space curves: `circle`, `ellipse`, `clam_shell`, `trefoil_spacelike`,
//! `wobble_space`. Curves on the de Sitter sphere: `equator`, `wobble`,
//! `quad_perturb`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{certify_strong_spacelike, ClosedCurve, CurveParam, FourierCurve, Jet, STRONG_TOL};
use crate::desitter::{LatLong, SphericalCurve, SphericalParam, DEFAULT_SCAN};
use crate::error::{Error, Result};
use crate::lorentz::LorentzVector;

/// Radial offset of the trefoil diagram `(c + cos 3t)(cos 2t, sin 2t)`.
/// Values above 13/4 make the planar projection locally convex.
pub const TREFOIL_OFFSET: f64 = 4.0;
/// Largest certified height amplitude for [`trefoil_spacelike`].
pub const TREFOIL_EPS_MAX: f64 = 0.85;

fn fourier(coeffs: [Vec<(f64, f64)>; 3], label: String) -> ClosedCurve {
    ClosedCurve::new(
        FourierCurve::new(TAU, coeffs).expect("builtin coefficients are valid"),
        label,
    )
}

/// `(r cos t, r sin t, 0)`
pub fn circle(radius: f64) -> Result<ClosedCurve> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::BadParameter(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    Ok(fourier(
        [
            vec![(0.0, 0.0), (radius, 0.0)],
            vec![(0.0, 0.0), (0.0, radius)],
            vec![(0.0, 0.0)],
        ],
        format!("circle(r={radius})"),
    ))
}

/// `(a cos t, b sin t, 0)`
pub fn ellipse(a: f64, b: f64) -> Result<ClosedCurve> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::BadParameter(format!(
            "ellipse axes must be positive, got {a}, {b}"
        )));
    }
    Ok(fourier(
        [vec![(0.0, 0.0), (a, 0.0)], vec![(0.0, 0.0), (0.0, b)], vec![(0.0, 0.0)]],
        format!("ellipse(a={a},b={b})"),
    ))
}

/// `(a cos t, b sin t, α sin(k t + phase))`: an index-1 space curve whose
/// indicatrix wobbles about the equator. Amplitudes that break the strong
/// spacelike conditions are rejected.
pub fn wobble_space(a: f64, b: f64, alpha: f64, k: u32, phase: f64) -> Result<ClosedCurve> {
    if k == 0 {
        return Err(Error::BadParameter("wobble frequency must be positive".into()));
    }
    ellipse(a, b)?;
    let mut x3 = vec![(0.0, 0.0); k as usize + 1];
    x3[k as usize] = (alpha * phase.sin(), alpha * phase.cos());
    let curve = fourier(
        [vec![(0.0, 0.0), (a, 0.0)], vec![(0.0, 0.0), (0.0, b)], x3],
        format!("wobble_space(a={a},b={b},alpha={alpha},k={k},phase={phase})"),
    );
    let rep = certify_strong_spacelike(&curve, 8192, STRONG_TOL);
    if !rep.verdict {
        return Err(Error::NotStrongSpacelike { s: rep.worst_t });
    }
    Ok(curve)
}

fn check_unit_open(name: &str, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::BadParameter(format!(
            "{name}: epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// Height profile of the clam shell: `(h, h', h'', h''')` at `θ ∈ [0, 4π]`.
pub fn clam_shell_profile(epsilon: f64, theta: f64) -> [f64; 4] {
    let e = epsilon;
    let th = theta.rem_euclid(2.0 * TAU);
    let (s, c) = th.sin_cos();
    if th <= FRAC_PI_2 {
        [e * th, e, 0.0, 0.0]
    } else if th <= 1.5 * PI {
        [FRAC_PI_2 * e - e * c, e * s, e * c, -e * s]
    } else if th <= 2.5 * PI {
        [-e * (th - TAU), -e, 0.0, 0.0]
    } else if th <= 3.5 * PI {
        [-FRAC_PI_2 * e + e * c, -e * s, -e * c, e * s]
    } else {
        [e * (th - 2.0 * TAU), e, 0.0, 0.0]
    }
}

#[derive(Debug, Clone, Copy)]
struct ClamShell {
    epsilon: f64,
}

impl CurveParam for ClamShell {
    fn period(&self) -> f64 {
        2.0 * TAU
    }
    fn jet(&self, t: f64) -> Jet {
        let [h, h1, h2, h3] = clam_shell_profile(self.epsilon, t);
        let (s, c) = t.sin_cos();
        Jet {
            pos: LorentzVector::new(c, s, h),
            d1: LorentzVector::new(-s, c, h1),
            d2: LorentzVector::new(-c, -s, h2),
            d3: LorentzVector::new(s, -c, h3),
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        vec![FRAC_PI_2, 1.5 * PI, 2.5 * PI, 3.5 * PI]
    }
}

/// The index-2 clam shell `(cos θ, sin θ, h(θ))`, `θ ∈ [0, 4π]`.
pub fn clam_shell(epsilon: f64) -> Result<ClosedCurve> {
    check_unit_open("clam_shell", epsilon)?;
    Ok(ClosedCurve::new(
        ClamShell { epsilon },
        format!("clam_shell(epsilon={epsilon})"),
    ))
}

/// Lower bound `2π / sqrt(1 - ε²)` for the clam shell's total curvature.
pub fn clam_shell_bound(epsilon: f64) -> Result<f64> {
    check_unit_open("clam_shell_bound", epsilon)?;
    Ok(TAU / (1.0 - epsilon * epsilon).sqrt())
}

/// Trefoil diagram `(c + cos 3t)(cos 2t, sin 2t)` lifted by `ε sin 3t`.
/// Heights above [`TREFOIL_EPS_MAX`] are outside the certified range and
/// report the sample where the certifier's margin is smallest.
pub fn trefoil_spacelike(epsilon: f64) -> Result<ClosedCurve> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::BadParameter(format!(
            "trefoil_spacelike: epsilon must be positive, got {epsilon}"
        )));
    }
    let curve = trefoil_unchecked(epsilon);
    if epsilon > TREFOIL_EPS_MAX {
        let rep = certify_strong_spacelike(&curve, 8192, STRONG_TOL);
        return Err(Error::NotStrongSpacelike { s: rep.worst_t });
    }
    Ok(curve)
}

/// The trefoil family without the certified range check.
pub fn trefoil_unchecked(epsilon: f64) -> ClosedCurve {
    let c = TREFOIL_OFFSET;
    // (c + cos 3t) cos 2t = c cos 2t + (cos t + cos 5t)/2
    // (c + cos 3t) sin 2t = c sin 2t + (sin 5t - sin t)/2
    let mut x1 = vec![(0.0, 0.0); 6];
    x1[1] = (0.5, 0.0);
    x1[2] = (c, 0.0);
    x1[5] = (0.5, 0.0);
    let mut x2 = vec![(0.0, 0.0); 6];
    x2[1] = (0.0, -0.5);
    x2[2] = (0.0, c);
    x2[5] = (0.0, 0.5);
    let mut x3 = vec![(0.0, 0.0); 4];
    x3[3] = (0.0, epsilon);
    fourier([x1, x2, x3], format!("trefoil_spacelike(epsilon={epsilon})"))
}

#[derive(Debug, Clone, Copy)]
struct Wobble {
    alpha: f64,
    k: f64,
    turns: u32,
}

impl SphericalParam for Wobble {
    fn period(&self) -> f64 {
        TAU * self.turns as f64
    }
    fn eval(&self, t: f64) -> LatLong {
        let (s, c) = (self.k * t).sin_cos();
        LatLong {
            theta: t,
            phi: self.alpha * s,
            dtheta: 1.0,
            dphi: self.alpha * self.k * c,
        }
    }
}

/// `θ = t, φ = α sin(k t)` for `t ∈ [0, 2Iπ]`.
pub fn wobble(alpha: f64, k: u32, index: u32) -> Result<SphericalCurve> {
    if index == 0 {
        return Err(Error::BadParameter("wobble index must be at least 1".into()));
    }
    if !alpha.is_finite() {
        return Err(Error::BadParameter(format!("wobble amplitude {alpha}")));
    }
    let param = Wobble {
        alpha,
        k: k as f64,
        turns: index,
    };
    // admissibility: cosh²(α sin kt) > α²k² cos²(kt)
    let n = 8192 * index as usize;
    let worst = (0..n)
        .map(|i| {
            let t = param.period() * i as f64 / n as f64;
            (param.eval(t).speed_sq(), t)
        })
        .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a });
    if worst.0 <= 0.0 {
        return Err(Error::NotSpacelike { t: worst.1 });
    }
    SphericalCurve::new(param, DEFAULT_SCAN, format!("wobble(alpha={alpha},k={k},I={index})"))
}

/// The equator traversed `index` times.
pub fn equator(index: u32) -> Result<SphericalCurve> {
    Ok(wobble(0.0, 1, index)?.with_label(format!("equator(I={index})")))
}

#[derive(Debug, Clone, Copy)]
struct QuadPerturb {
    q: f64,
}

impl QuadPerturb {
    /// Gudermannian latitude `g(t) = -½ asin(q cos 2t)` and its derivative.
    fn gd(&self, t: f64) -> (f64, f64) {
        let (s2, c2) = (2.0 * t).sin_cos();
        let g = -0.5 * (self.q * c2).asin();
        let dg = self.q * s2 / (1.0 - self.q * self.q * c2 * c2).sqrt();
        (g, dg)
    }
}

impl SphericalParam for QuadPerturb {
    fn period(&self) -> f64 {
        TAU
    }
    fn eval(&self, t: f64) -> LatLong {
        let (g, dg) = self.gd(t);
        LatLong {
            theta: t,
            phi: g.tan().asinh(),
            dtheta: 1.0,
            dphi: dg / g.cos(),
        }
    }
}

/// Index-1 curves approaching the quadrilateral of four lightlike segments
/// through `(θ, φ) = (kπ/2, ±asinh 1)` as `ε -> 0`. The Gudermannian of the
/// latitude is a smoothed triangle wave of slope at most `1 - ε/2`.
pub fn quad_perturb(epsilon: f64) -> Result<SphericalCurve> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::BadParameter(format!(
            "quad_perturb: epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    SphericalCurve::new(
        QuadPerturb { q: 1.0 - 0.5 * epsilon },
        DEFAULT_SCAN,
        format!("quad_perturb(epsilon={epsilon})"),
    )
}

/// A builtin family addressed by name with named real parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// Output of [`FamilySpec::build`].
#[derive(Debug, Clone)]
pub enum GalleryCurve {
    Space(ClosedCurve),
    Spherical(SphericalCurve),
}

pub const FAMILY_NAMES: [&str; 8] = [
    "circle",
    "ellipse",
    "wobble_space",
    "clam_shell",
    "trefoil_spacelike",
    "equator",
    "wobble",
    "quad_perturb",
];

impl FamilySpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match (self.params.get(key), default) {
            (Some(v), _) => Ok(*v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::BadParameter(format!("{}: missing parameter `{key}`", self.name))),
        }
    }

    fn get_uint(&self, key: &str, default: Option<f64>) -> Result<u32> {
        let v = self.get(key, default)?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(Error::BadParameter(format!(
                "{}: `{key}` must be a non-negative integer",
                self.name
            )));
        }
        Ok(v as u32)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadParameter(format!("{}: unknown parameter `{k}`", self.name))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<GalleryCurve> {
        use GalleryCurve::*;
        Ok(match self.name.as_str() {
            "circle" => {
                self.check_keys(&["radius", "r"])?;
                let r = self.get("radius", self.params.get("r").copied().or(Some(1.0)))?;
                Space(circle(r)?)
            }
            "ellipse" => {
                self.check_keys(&["a", "b"])?;
                Space(ellipse(self.get("a", Some(2.0))?, self.get("b", Some(1.0))?)?)
            }
            "wobble_space" => {
                self.check_keys(&["a", "b", "alpha", "k", "phase"])?;
                Space(wobble_space(
                    self.get("a", Some(1.0))?,
                    self.get("b", Some(1.0))?,
                    self.get("alpha", None)?,
                    self.get_uint("k", Some(2.0))?,
                    self.get("phase", Some(0.0))?,
                )?)
            }
            "clam_shell" => {
                self.check_keys(&["epsilon"])?;
                Space(clam_shell(self.get("epsilon", None)?)?)
            }
            "trefoil_spacelike" | "trefoil" => {
                self.check_keys(&["epsilon"])?;
                Space(trefoil_spacelike(self.get("epsilon", Some(0.05))?)?)
            }
            "equator" => {
                self.check_keys(&["I"])?;
                Spherical(equator(self.get_uint("I", Some(1.0))?)?)
            }
            "wobble" => {
                self.check_keys(&["alpha", "k", "I"])?;
                Spherical(wobble(
                    self.get("alpha", None)?,
                    self.get_uint("k", None)?,
                    self.get_uint("I", Some(1.0))?,
                )?)
            }
            "quad_perturb" => {
                self.check_keys(&["epsilon"])?;
                Spherical(quad_perturb(self.get("epsilon", None)?)?)
            }
            other => {
                return Err(Error::BadParameter(format!(
                    "unknown family `{other}` (known: {})",
                    FAMILY_NAMES.join(", ")
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clam_shell_junctions_are_c2() {
        let e = 0.5;
        for &j in &[FRAC_PI_2, 1.5 * PI, 2.5 * PI, 3.5 * PI] {
            let d = 1e-13;
            let l = clam_shell_profile(e, j - d);
            let r = clam_shell_profile(e, j + d);
            for k in 0..3 {
                assert!(
                    (l[k] - r[k]).abs() < 1e-12,
                    "junction {j} derivative {k}: {} vs {}",
                    l[k],
                    r[k]
                );
            }
        }
        // closes up
        let a = clam_shell_profile(e, 0.0);
        let b = clam_shell_profile(e, 2.0 * TAU - 1e-14);
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }

    #[test]
    fn clam_shell_profile_bound() {
        for &e in &[0.1, 0.5, 0.9] {
            for i in 0..4000 {
                let th = 2.0 * TAU * i as f64 / 4000.0;
                let [_, h1, h2, _] = clam_shell_profile(e, th);
                assert!(h1 * h1 + h2 * h2 <= e * e + 1e-12);
            }
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert!((clam_shell_bound(0.8).unwrap() - 10.471_975_511_965_976).abs() < 1e-12);
        assert!((clam_shell_bound(0.6).unwrap() - 7.853_981_633_974_483).abs() < 1e-12);
        assert!((clam_shell_bound(1e-9).unwrap() - TAU).abs() < 1e-12);
        assert!(clam_shell_bound(1.0).is_err());
        assert!(clam_shell(0.0).is_err());
    }

    #[test]
    fn inadmissible_wobble() {
        assert!(matches!(wobble(2.0, 3, 1), Err(Error::NotSpacelike { .. })));
        assert!(wobble(0.2, 3, 1).is_ok());
    }

    #[test]
    fn family_spec_errors() {
        assert!(FamilySpec::new("nope").build().is_err());
        assert!(FamilySpec::new("clam_shell").build().is_err());
        assert!(FamilySpec::new("clam_shell").with("epsilon", 1.5).build().is_err());
        assert!(FamilySpec::new("wobble")
            .with("alpha", 0.2)
            .with("k", 2.5)
            .build()
            .is_err());
        assert!(FamilySpec::new("circle").with("bogus", 1.0).build().is_err());
    }
}
