//! Periodic cubic interpolating splines (C² everywhere, including across the
//! period seam).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    /// `n + 1` knots; the last is `knots[0] + period`.
    knots: Vec<f64>,
    /// `n + 1` values; the last repeats the first.
    values: Vec<f64>,
    /// Second derivatives at the knots, same layout as `values`.
    moments: Vec<f64>,
}

impl PeriodicSpline {
    /// `knots` strictly increasing over one period (`n >= 3` distinct samples),
    /// `period > knots[n-1] - knots[0]`.
    pub fn new(knots: &[f64], values: &[f64], period: f64) -> Result<Self> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(Error::InvalidCurve("periodic spline needs at least 3 samples".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidCurve("spline knots must be strictly increasing".into()));
        }
        if period <= knots[n - 1] - knots[0] {
            return Err(Error::InvalidCurve("period shorter than the knot span".into()));
        }
        let mut t = knots.to_vec();
        t.push(knots[0] + period);
        let mut y = values.to_vec();
        y.push(values[0]);
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();

        // cyclic tridiagonal system for the moments M_0..M_{n-1}
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let hp = h[(i + n - 1) % n];
            let hn = h[i];
            sub[i] = hp;
            diag[i] = 2.0 * (hp + hn);
            sup[i] = hn;
            let yp = y[(i + n - 1) % n];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / hn - (y[i] - yp) / hp);
        }
        let mut moments = solve_cyclic(&sub, &diag, &sup, &rhs);
        moments.push(moments[0]);
        Ok(Self {
            knots: t,
            values: y,
            moments,
        })
    }

    pub fn period(&self) -> f64 {
        self.knots[self.knots.len() - 1] - self.knots[0]
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots[..self.knots.len() - 1]
    }

    /// Value and first three derivatives at `t` (wrapped into the period).
    pub fn eval(&self, t: f64) -> [f64; 4] {
        let p = self.period();
        let t0 = self.knots[0];
        let local = t0 + (t - t0).rem_euclid(p);
        let i = self
            .knots
            .partition_point(|&k| k <= local)
            .saturating_sub(1)
            .min(self.knots.len() - 2);
        let h = self.knots[i + 1] - self.knots[i];
        let a = self.knots[i + 1] - local;
        let b = local - self.knots[i];
        let (m0, m1) = (self.moments[i], self.moments[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let v = m0 * a.powi(3) / (6.0 * h)
            + m1 * b.powi(3) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0) + (y1 / h - m1 * h / 6.0);
        let d2 = (m0 * a + m1 * b) / h;
        let d3 = (m1 - m0) / h;
        [v, d1, d2, d3]
    }
}

/// Solves a cyclic tridiagonal system via Sherman-Morrison.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let alpha = sup[n - 1]; // A[n-1][0]
    let beta = sub[0]; // A[0][n-1]
    let gamma = -diag[0];
    let mut b = diag.to_vec();
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &b, sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &b, sup, &u);
    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn reproduces_sine_with_continuity() {
        let n = 64;
        let t: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let y: Vec<f64> = t.iter().map(|x| x.sin()).collect();
        let s = PeriodicSpline::new(&t, &y, TAU).unwrap();
        for k in 0..200 {
            let x = -1.0 + 9.0 * k as f64 / 200.0;
            let [v, d1, d2, _] = s.eval(x);
            assert!((v - x.sin()).abs() < 1e-5);
            assert!((d1 - x.cos()).abs() < 1e-3);
            assert!((d2 + x.sin()).abs() < 2e-2);
        }
        // interpolation at knots
        for (ti, yi) in t.iter().zip(&y) {
            assert!((s.eval(*ti)[0] - yi).abs() < 1e-14);
        }
        // C2 across the seam
        let e = 1e-9;
        let left = s.eval(TAU - e);
        let right = s.eval(e);
        assert!((left[1] - right[1]).abs() < 1e-7);
        assert!((left[2] - right[2]).abs() < 1e-7);
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(PeriodicSpline::new(&[0.0, 1.0], &[0.0, 1.0], 3.0).is_err());
        assert!(PeriodicSpline::new(&[0.0, 2.0, 1.0], &[0.0, 1.0, 2.0], 3.0).is_err());
        assert!(PeriodicSpline::new(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 2.0).is_err());
    }
}
