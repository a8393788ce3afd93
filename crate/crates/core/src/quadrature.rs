//! One-dimensional quadrature: the 10-point Gauss / 21-point Kronrod pair and
//! a globally adaptive driver built on it.

/// Kronrod abscissae on `[0, 1]`; odd indices are the Gauss-Legendre nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_706_124,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// 10-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre_10<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut sum = 0.0;
    for (j, w) in WG.iter().enumerate() {
        let x = h * XGK[2 * j + 1];
        sum += w * (f(c - x) + f(c + x));
    }
    sum * h
}

/// Returns `(kronrod, |kronrod - gauss|)` on `[a, b]`.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for j in 0..10 {
        let x = h * XGK[j];
        let pair = f(c - x) + f(c + x);
        k += WGK[j] * pair;
        if j % 2 == 1 {
            g += WG[j / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrates `f` over `[a, b]`, splitting first at every breakpoint in
    /// the open interval. The interval with the largest error estimate is
    /// bisected until the total estimate meets the tolerance.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, breakpoints: &[f64]) -> QuadResult {
        if a == b {
            return QuadResult {
                value: 0.0,
                error: 0.0,
                intervals: 0,
            };
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let mut cuts = vec![lo];
        let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > lo && x < hi).collect();
        inner.sort_by(f64::total_cmp);
        inner.dedup();
        cuts.extend(inner);
        cuts.push(hi);

        let mut pieces: Vec<Piece> = cuts
            .windows(2)
            .map(|w| {
                let (value, error) = gauss_kronrod_21(&f, w[0], w[1]);
                Piece {
                    a: w[0],
                    b: w[1],
                    value,
                    error,
                }
            })
            .collect();

        loop {
            let total: f64 = pieces.iter().map(|p| p.value).sum();
            let err: f64 = pieces.iter().map(|p| p.error).sum();
            if err <= self.abs_tol.max(self.rel_tol * total.abs()) || pieces.len() >= self.max_intervals {
                break;
            }
            let (worst, _) = pieces.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
            let p = pieces[worst];
            let mid = 0.5 * (p.a + p.b);
            if mid <= p.a || mid >= p.b {
                // interval exhausted at machine precision
                pieces[worst].error = 0.0;
                continue;
            }
            let (lv, le) = gauss_kronrod_21(&f, p.a, mid);
            let (rv, re) = gauss_kronrod_21(&f, mid, p.b);
            pieces[worst] = Piece {
                a: p.a,
                b: mid,
                value: lv,
                error: le,
            };
            pieces.push(Piece {
                a: mid,
                b: p.b,
                value: rv,
                error: re,
            });
        }

        pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
        let values: Vec<f64> = pieces.iter().map(|p| p.value).collect();
        QuadResult {
            value: sign * pairwise_sum(&values),
            error: pieces.iter().map(|p| p.error).sum(),
            intervals: pieces.len(),
        }
    }
}

/// Adaptive integral with the default tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64]) -> f64 {
    Quadrature::default().integrate(f, a, b, breakpoints).value
}

/// Pairwise summation in a fixed order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((g - 2.0).abs() < 1e-14);
        assert!((k - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_exactness() {
        // G10 is exact to degree 19, K21 to degree 31.
        for deg in 0..=19 {
            let f = |x: f64| x.powi(deg);
            let exact = (1.0 - (-1f64).powi(deg + 1)) / (deg as f64 + 1.0);
            assert!((gauss_legendre_10(&f, -1.0, 1.0) - exact).abs() < 1e-13, "deg {deg}");
        }
        for deg in 0..=31 {
            let f = |x: f64| x.powi(deg);
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((gauss_kronrod_21(&f, 0.0, 1.0).0 - exact).abs() < 1e-13, "deg {deg}");
        }
    }

    #[test]
    fn adaptive_handles_kink_with_breakpoint() {
        let f = |x: f64| (x - 0.3).abs();
        let exact = 0.5 * 0.3 * 0.3 + 0.5 * 0.7 * 0.7;
        let with = Quadrature::default().integrate(f, 0.0, 1.0, &[0.3]);
        assert!((with.value - exact).abs() < 1e-15);
        let without = Quadrature::default().integrate(f, 0.0, 1.0, &[]);
        assert!((without.value - exact).abs() < 1e-11);
    }

    #[test]
    fn adaptive_smooth_and_reversed() {
        let v = integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI, &[]);
        assert!((v - 2.0).abs() < 1e-14);
        let r = integrate(|x: f64| x.sin(), std::f64::consts::PI, 0.0, &[]);
        assert!((r + 2.0).abs() < 1e-14);
        let peaky = integrate(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, &[]);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((peaky - exact).abs() / exact < 1e-11);
    }
}
