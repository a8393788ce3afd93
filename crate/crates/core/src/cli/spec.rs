//! Curve specification documents.
//!
//! ```json
//! {"type": "builtin", "name": "wobble", "params": {"alpha": 0.2, "k": 3, "I": 1}}
//! {"type": "fourier", "period": 6.283185307179586,
//!  "coeffs": {"x1": [[0, 0], [1, 0]], "x2": [[0, 0], [0, 1]], "x3": [[0, 0]]}}
//! {"type": "spline", "points": [[t, x1, x2, x3], ...], "period": 6.283185307179586}
//! ```
//!
//! Fourier coefficient lists are indexed by harmonic; entry `k` is the pair
//! `(a_k, b_k)` of `a_k cos(2πkt/P) + b_k sin(2πkt/P)`. A spline without
//! `period` must repeat its first point at the end.
//!
//! On the command line `builtin:NAME?key=value,key=value` is accepted as
//! shorthand for a builtin document.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::curve::{ClosedCurve, FourierCurve, SplineCurve};
use crate::error::{Error, Result};
use crate::gallery::{FamilySpec, GalleryCurve};
use crate::lorentz::LorentzVector;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
    Fourier {
        period: f64,
        coeffs: FourierCoeffs,
        #[serde(default)]
        label: Option<String>,
    },
    Spline {
        points: Vec<[f64; 4]>,
        #[serde(default)]
        period: Option<f64>,
        #[serde(default)]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierCoeffs {
    pub x1: Vec<(f64, f64)>,
    pub x2: Vec<(f64, f64)>,
    pub x3: Vec<(f64, f64)>,
}

impl CurveSpec {
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidCurve(format!("curve spec: {e}")))
    }

    /// `builtin:NAME?k=v,...`
    pub fn parse_builtin(arg: &str) -> Result<Self> {
        let rest = arg
            .strip_prefix("builtin:")
            .ok_or_else(|| Error::InvalidCurve(format!("not a builtin reference: {arg}")))?;
        let (name, query) = match rest.split_once('?') {
            Some((n, q)) => (n, q),
            None => (rest, ""),
        };
        if name.is_empty() {
            return Err(Error::InvalidCurve("builtin reference without a name".into()));
        }
        Ok(CurveSpec::Builtin {
            name: name.to_string(),
            params: parse_params(query)?,
        })
    }

    /// A `builtin:` reference or the path of a JSON document.
    pub fn load(arg: &str) -> Result<Self> {
        if arg.starts_with("builtin:") {
            return Self::parse_builtin(arg);
        }
        let text = std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Error::InvalidCurve(format!("cannot read {arg}: {e}")))?;
        Self::parse_json(&text)
    }

    pub fn build(&self) -> Result<GalleryCurve> {
        match self {
            CurveSpec::Builtin { name, params } => FamilySpec {
                name: name.clone(),
                params: params.clone(),
            }
            .build(),
            CurveSpec::Fourier { period, coeffs, label } => {
                let c = FourierCurve::new(*period, [coeffs.x1.clone(), coeffs.x2.clone(), coeffs.x3.clone()])?;
                Ok(GalleryCurve::Space(ClosedCurve::new(
                    c,
                    label.clone().unwrap_or_else(|| "fourier".into()),
                )))
            }
            CurveSpec::Spline { points, period, label } => {
                let mut pts = points.clone();
                let period = match period {
                    Some(p) => *p,
                    None => {
                        let (first, last) = match (pts.first(), pts.last()) {
                            (Some(f), Some(l)) if pts.len() >= 2 => (*f, *l),
                            _ => return Err(Error::InvalidCurve("spline needs at least 8 points".into())),
                        };
                        let gap = (1..4).map(|i| (first[i] - last[i]).abs()).fold(0.0, f64::max);
                        if gap > 1e-9 {
                            return Err(Error::InvalidCurve(
                                "spline without `period` must repeat its first point at the end".into(),
                            ));
                        }
                        pts.pop();
                        last[0] - first[0]
                    }
                };
                let ts: Vec<f64> = pts.iter().map(|p| p[0]).collect();
                let xs: Vec<LorentzVector> = pts.iter().map(|p| LorentzVector::new(p[1], p[2], p[3])).collect();
                let c = SplineCurve::new(&ts, &xs, period)?;
                Ok(GalleryCurve::Space(ClosedCurve::new(
                    c,
                    label.clone().unwrap_or_else(|| "spline".into()),
                )))
            }
        }
    }
}

/// `key=value,key=value`
pub fn parse_params(query: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in query.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidCurve(format!("parameter `{item}` is not key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidCurve(format!("parameter `{k}` has non-numeric value `{v}`")))?;
        if !v.is_finite() {
            return Err(Error::InvalidCurve(format!("parameter `{k}` is not finite")));
        }
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_shorthand() {
        let s = CurveSpec::parse_builtin("builtin:wobble?alpha=0.2,k=3,I=1").unwrap();
        match &s {
            CurveSpec::Builtin { name, params } => {
                assert_eq!(name, "wobble");
                assert_eq!(params["alpha"], 0.2);
                assert_eq!(params["I"], 1.0);
            }
            _ => panic!(),
        }
        assert!(matches!(s.build().unwrap(), GalleryCurve::Spherical(_)));
        assert!(CurveSpec::parse_builtin("builtin:circle").unwrap().build().is_ok());
        assert!(CurveSpec::parse_builtin("builtin:circle?r").is_err());
        assert!(CurveSpec::parse_builtin("builtin:circle?r=x").is_err());
    }

    #[test]
    fn json_documents() {
        let f = r#"{"type":"fourier","period":6.283185307179586,
            "coeffs":{"x1":[[0,0],[1,0]],"x2":[[0,0],[0,1]],"x3":[[0,0]]}}"#;
        assert!(matches!(
            CurveSpec::parse_json(f).unwrap().build().unwrap(),
            GalleryCurve::Space(_)
        ));
        let bad = r#"{"type":"fourier","period":6.28,"coeffs":{"x1":[],"x2":[[0,0]],"x3":[[0,0]]}}"#;
        assert!(CurveSpec::parse_json(bad).unwrap().build().is_err());
        assert!(CurveSpec::parse_json(r#"{"type":"polygon"}"#).is_err());
        assert!(CurveSpec::parse_json("{not json").is_err());

        let n = 12;
        let pts: Vec<String> = (0..=n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                format!("[{t},{},{},0]", t.cos(), t.sin())
            })
            .collect();
        let doc = format!(r#"{{"type":"spline","points":[{}]}}"#, pts.join(","));
        assert!(CurveSpec::parse_json(&doc).unwrap().build().is_ok());
        let few = r#"{"type":"spline","points":[[0,1,0,0],[1,0,1,0],[2,-1,0,0],[3,1,0,0]]}"#;
        assert!(CurveSpec::parse_json(few).unwrap().build().is_err());
    }
}
