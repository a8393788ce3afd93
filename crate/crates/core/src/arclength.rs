//! Cumulative arc-length tables for periodic parametrizations.
//!
//! The table stores `s` at panel boundaries only; values in between are
//! recomputed with a Gauss rule on the partial panel, and the inverse map
//! `s -> t` is solved by safeguarded Newton iteration, so the table itself
//! contributes no interpolation error.

use crate::quadrature::{gauss_kronrod_21, pairwise_sum};

#[derive(Debug, Clone)]
pub struct ArcTable {
    period: f64,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ArcTable {
    /// Builds the table for `speed` on `[0, period]` with roughly `n_panels`
    /// equal panels, refined so every breakpoint is a panel boundary.
    pub fn build<F: Fn(f64) -> f64>(speed: &F, period: f64, n_panels: usize, breakpoints: &[f64]) -> Self {
        let n = n_panels.max(1);
        let mut knots: Vec<f64> = (0..=n).map(|i| period * i as f64 / n as f64).collect();
        knots.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < period));
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * period);
        *knots.last_mut().expect("non-empty") = period;

        let pieces: Vec<f64> = knots
            .windows(2)
            .map(|w| gauss_kronrod_21(speed, w[0], w[1]).0)
            .collect();
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for (i, p) in pieces.iter().enumerate() {
            acc += p;
            // re-anchor every 64 panels to limit drift of the running sum
            if (i + 1) % 64 == 0 {
                acc = pairwise_sum(&pieces[..=i]);
            }
            cumulative.push(acc);
        }
        *cumulative.last_mut().expect("non-empty") = pairwise_sum(&pieces);
        Self {
            period,
            knots,
            cumulative,
        }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn panel_of_t(&self, t: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    fn panel_of_s(&self, s: f64) -> usize {
        let i = self.cumulative.partition_point(|&c| c <= s);
        i.saturating_sub(1).min(self.knots.len() - 2)
    }

    /// Arc length from parameter 0 to `t`; extends periodically.
    pub fn s_of_t<F: Fn(f64) -> f64>(&self, speed: &F, t: f64) -> f64 {
        let laps = (t / self.period).floor();
        let local = t - laps * self.period;
        laps * self.length() + self.s_within(speed, local)
    }

    fn s_within<F: Fn(f64) -> f64>(&self, speed: &F, t: f64) -> f64 {
        let i = self.panel_of_t(t);
        let a = self.knots[i];
        if t == a {
            return self.cumulative[i];
        }
        self.cumulative[i] + gauss_kronrod_21(speed, a, t).0
    }

    /// Parameter at arc length `s`; extends periodically.
    pub fn t_of_s<F: Fn(f64) -> f64>(&self, speed: &F, s: f64) -> f64 {
        let total = self.length();
        let laps = (s / total).floor();
        let local = s - laps * total;
        laps * self.period + self.t_within(speed, local)
    }

    fn t_within<F: Fn(f64) -> f64>(&self, speed: &F, s: f64) -> f64 {
        let i = self.panel_of_s(s);
        let (mut lo, mut hi) = (self.knots[i], self.knots[i + 1]);
        let (s_lo, s_hi) = (self.cumulative[i], self.cumulative[i + 1]);
        if s <= s_lo {
            return lo;
        }
        if s >= s_hi {
            return hi;
        }
        let mut t = lo + (hi - lo) * (s - s_lo) / (s_hi - s_lo);
        for _ in 0..50 {
            let f = self.cumulative[i] + gauss_kronrod_21(speed, self.knots[i], t).0 - s;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let step = f / speed(t);
            let mut next = t - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 4.0 * f64::EPSILON * self.period.max(t.abs()) {
                return next;
            }
            t = next;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn ellipse_length_and_inverse() {
        let (a, b) = (2.0, 1.0);
        let speed = |t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt();
        let table = ArcTable::build(&speed, TAU, 256, &[]);
        // complete elliptic integral value for a=2, b=1
        assert!((table.length() - 9.688_448_220_547_675).abs() < 1e-12);
        for &t in &[0.0, 0.3, 1.7, 3.0, 6.0] {
            let s = table.s_of_t(&speed, t);
            let back = table.t_of_s(&speed, s);
            assert!((back - t).abs() < 1e-13, "{t} -> {s} -> {back}");
        }
        let s = table.s_of_t(&speed, TAU + 0.5);
        assert!((s - table.length() - table.s_of_t(&speed, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn breakpoints_become_knots() {
        let speed = |_t: f64| 1.0;
        let table = ArcTable::build(&speed, 1.0, 4, &[0.1, 0.55]);
        assert!(table.knots().contains(&0.1));
        assert!(table.knots().contains(&0.55));
        assert!((table.length() - 1.0).abs() < 1e-15);
    }
}
