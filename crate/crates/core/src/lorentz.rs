//! Linear algebra of the Lorentz space with signature (+, +, -).
//!
//! Vectors carry no type-level causal information; [`LorentzVector::causal_type`]
//! classifies them against a relative tolerance so that the answer does not
//! depend on the overall scale of the input.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative band for causal classification.
pub const CAUSAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    Spacelike,
    Lightlike,
    Timelike,
}

impl LorentzVector {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// `x1 y1 + x2 y2 - x3 y3`
    #[inline]
    pub fn inner(&self, other: &Self) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    #[inline]
    pub fn euclid_norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    /// Lorentz cross product, characterised by `<a x b, c> = det(a, b, c)`.
    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.x2 * other.x3 - self.x3 * other.x2,
            self.x3 * other.x1 - self.x1 * other.x3,
            -(self.x1 * other.x2 - self.x2 * other.x1),
        )
    }

    pub fn causal_type(&self, tol: f64) -> Result<CausalClass> {
        let scale = self.euclid_norm_sq();
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        let q = self.norm_sq();
        Ok(if q > tol * scale {
            CausalClass::Spacelike
        } else if q < -tol * scale {
            CausalClass::Timelike
        } else {
            CausalClass::Lightlike
        })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl From<[f64; 3]> for LorentzVector {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for LorentzVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for LorentzVector {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for LorentzVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Neg for LorentzVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<f64> for LorentzVector {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Mul<LorentzVector> for f64 {
    type Output = LorentzVector;
    fn mul(self, v: LorentzVector) -> LorentzVector {
        v * self
    }
}

impl Div<f64> for LorentzVector {
    type Output = Self;
    fn div(self, k: f64) -> Self {
        Self::new(self.x1 / k, self.x2 / k, self.x3 / k)
    }
}

pub fn minkowski_inner(x: &LorentzVector, y: &LorentzVector) -> f64 {
    x.inner(y)
}

pub fn causal_type(x: &LorentzVector, tol: f64) -> Result<CausalClass> {
    x.causal_type(tol)
}

/// Causal class of the plane orthogonal to `normal`.
pub fn plane_causal_type(normal: &LorentzVector, tol: f64) -> Result<CausalClass> {
    Ok(match normal.causal_type(tol)? {
        CausalClass::Timelike => CausalClass::Spacelike,
        CausalClass::Spacelike => CausalClass::Timelike,
        CausalClass::Lightlike => CausalClass::Lightlike,
    })
}

/// An element of the orthochronous Lorentz group acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzTransform {
    pub m: [[f64; 3]; 3],
}

impl LorentzTransform {
    pub const IDENTITY: Self = Self {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rotation by `angle` about the x3 axis.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Boost about the x1 axis, mixing x2 and x3.
    pub fn boost(rapidity: f64) -> Self {
        let (sh, ch) = (rapidity.sinh(), rapidity.cosh());
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]],
        }
    }

    /// `rotation(pre) ∘ boost(rapidity) ∘ rotation(post)`; every orthochronous
    /// proper transform has this form.
    pub fn from_params(pre: f64, rapidity: f64, post: f64) -> Self {
        Self::rotation(pre)
            .compose(&Self::boost(rapidity))
            .compose(&Self::rotation(post))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { m }
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        let a = v.to_array();
        let row = |i: usize| self.m[i][0] * a[0] + self.m[i][1] * a[1] + self.m[i][2] * a[2];
        LorentzVector::new(row(0), row(1), row(2))
    }

    /// Largest entry of `|M^T η M - η|`.
    pub fn metric_defect(&self) -> f64 {
        let eta = [1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| self.m[k][i] * eta[k] * self.m[k][j]).sum();
                let target = if i == j { eta[i] } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn is_orthochronous(&self) -> bool {
        self.m[2][2] > 0.0
    }
}

/// Random orthochronous transform: two rotation angles uniform on `[0, 2π)`
/// around a boost with rapidity uniform on `[-2, 2]`.
pub fn random_orthochronous_transform(seed: u64) -> LorentzTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pre = rng.gen_range(0.0..std::f64::consts::TAU);
    let rapidity = rng.gen_range(-2.0..=2.0);
    let post = rng.gen_range(0.0..std::f64::consts::TAU);
    LorentzTransform::from_params(pre, rapidity, post)
}
