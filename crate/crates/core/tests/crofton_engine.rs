//! Localized and global Crofton identities, Fenchel and Fary-Milnor checks.

use std::f64::consts::{PI, TAU};

use crofton::desitter::{tangent_indicatrix, SphericalCurve};
use crofton::engine::*;
use crofton::gallery::*;
use crofton::hyperbolic::{choose_radius, h2_area};
use crofton::Error;
use proptest::prelude::*;

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn curves() -> Vec<SphericalCurve> {
    vec![
        equator(1).unwrap(),
        wobble(0.2, 3, 1).unwrap(),
        wobble(0.3, 2, 2).unwrap(),
        quad_perturb(0.5).unwrap(),
        tangent_indicatrix(&clam_shell(0.5).unwrap()).unwrap(),
    ]
}

#[test]
fn equator_example() {
    let g = equator(1).unwrap();
    let r = 2f64.acosh();
    assert!((localized_rhs(&g, r).unwrap() - 4.0 * PI).abs() < 1e-9);
    let q = verify_localized_quadrature(&g, r, 64).unwrap();
    assert!(q.passed);
    assert!((q.lhs - 4.0 * PI).abs() < 1e-9);
    // every pole in the disk meets the equator exactly twice
    let mc = localized_lhs_mc(&g, r, 2000, 1).unwrap();
    assert_eq!((mc.min_count, mc.max_count), (2, 2));
    assert!((mc.estimate - 4.0 * PI).abs() < 1e-9);
    assert_eq!(mc.stderr, 0.0);
}

#[test]
fn small_radius_is_rejected() {
    let g = wobble(0.3, 2, 1).unwrap();
    match verify_localized_quadrature(&g, 0.1, 64) {
        Err(Error::RadiusTooSmall { cosh_r, needed }) => assert!(cosh_r < needed),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        localized_lhs_mc(&g, 0.1, 100, 0),
        Err(Error::RadiusTooSmall { .. })
    ));
    assert!(matches!(localized_rhs(&g, -1.0), Err(Error::NegativeRadius(_))));
}

#[test]
fn inner_integral_against_simpson() {
    for (tau, p) in [(0.0, 1.0), (0.4, 1.2), (-0.9, 1.0), (1.5, 0.7), (-2.0, 0.5), (0.3, 3.0)] {
        // split at the kink so Simpson sees smooth pieces
        let f = |psi: f64| (tau - psi).abs().sinh();
        let oracle = if tau.abs() < p {
            simpson(f, -p, tau, 20_000) + simpson(f, tau, p, 20_000)
        } else {
            simpson(f, -p, p, 20_000)
        };
        let got = inner_integral_numeric(tau, p);
        assert!(
            (got - oracle).abs() < 1e-10 * oracle.max(1.0),
            "τ {tau}, ψ* {p}: {got} vs {oracle}"
        );
        if tau.abs() <= p {
            let closed = 2.0 * p.cosh() * tau.cosh() - 2.0;
            assert!((got - closed).abs() < 1e-12 * closed.max(1.0));
        }
    }
}

#[test]
fn quadrature_identity_holds_on_gallery() {
    for g in curves() {
        for safety in [1.5, 2.0, 4.0] {
            let r = choose_radius(&g, safety).unwrap();
            let rep = verify_localized_quadrature(&g, r, 256).unwrap();
            assert!(
                rep.passed,
                "{} at safety {safety}: rel {:e}",
                g.label(),
                rep.rel_residual
            );
            assert!(rep.metrics["max_inner_defect"] < INNER_TOL);
        }
    }
}

#[test]
fn localized_integral_increases_with_radius() {
    for g in curves() {
        let r0 = choose_radius(&g, 1.5).unwrap();
        let vals: Vec<f64> = [0.0, 0.2, 0.5, 1.0]
            .iter()
            .map(|d| localized_lhs_quadrature(&g, r0 + d, 128).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]), "{}: {vals:?}", g.label());
    }
}

#[test]
fn excess_is_independent_of_radius() {
    for g in curves() {
        let two_i = 2.0 * g.index() as f64;
        let excess = |safety: f64| {
            let r = choose_radius(&g, safety).unwrap();
            localized_lhs_quadrature(&g, r, 256).unwrap().value - two_i * h2_area(r).unwrap()
        };
        let (a, b) = (excess(2.0), excess(4.0));
        let want = -2.0 * g.length() + 2.0 * g.delta_theta();
        assert!((a - b).abs() < 1e-8 * (1.0 + want.abs()), "{}: {a} vs {b}", g.label());
        assert!((a - want).abs() < 1e-8 * (1.0 + want.abs()));
    }
}

#[test]
fn monte_carlo_stderr_scales_like_inverse_root_n() {
    let g = wobble(0.3, 2, 1).unwrap();
    let r = choose_radius(&g, 2.0).unwrap();
    let se: Vec<f64> = [1_000, 10_000, 100_000]
        .iter()
        .map(|&n| localized_lhs_mc(&g, r, n, 9).unwrap().stderr)
        .collect();
    for w in se.windows(2) {
        let ratio = w[0] / w[1];
        assert!(ratio > 10f64.sqrt() / 1.5 && ratio < 10f64.sqrt() * 1.5, "{se:?}");
    }
}

#[test]
fn monte_carlo_is_deterministic_across_thread_counts() {
    let g = wobble(0.2, 3, 1).unwrap();
    let r = choose_radius(&g, 2.0).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| localized_lhs_mc(&g, r, 5000, 77).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
    assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
}

#[test]
fn monte_carlo_identity_within_three_sigma() {
    for (i, g) in curves().into_iter().enumerate().skip(1) {
        let r = choose_radius(&g, 2.0).unwrap();
        let rep = verify_localized_mc(&g, r, 20_000, 3).unwrap();
        assert!(rep.passed, "{}: {} sigmas", g.label(), rep.metrics["sigmas"]);
        let gl = global_residual_at(&g, r, 20_000, 4).unwrap();
        assert!(
            gl.passed,
            "{}: residual {:e}, tol {:e}",
            g.label(),
            gl.abs_residual,
            gl.tolerance
        );
        // the clam shell indicatrix is longer than 4π; the others are shorter than 2Iπ
        assert_eq!(gl.lhs > 0.0, i == 4, "{}: {}", g.label(), gl.lhs);
    }
}

#[test]
fn lemma_has_no_exceptions() {
    for g in curves() {
        let rep = verify_lemma_2i(&g, 200, 5).unwrap();
        assert!(rep.passed, "{}: {} exceptions", g.label(), rep.lhs);
    }
}

#[test]
fn wrong_index_is_reported() {
    assert!(matches!(
        verify_fenchel(&clam_shell(0.5).unwrap()),
        Err(Error::WrongIndex { expected: 1, found: 2 })
    ));
    assert!(matches!(
        verify_fary_milnor(&circle(1.0).unwrap(), false, 10, 0),
        Err(Error::WrongIndex { expected: 2, found: 1 })
    ));
}

#[test]
fn fenchel_examples() {
    let c = verify_fenchel(&circle(3.0).unwrap()).unwrap();
    assert!(c.passed);
    assert!((c.lhs - TAU).abs() < 1e-9);
    assert!(c.flags.iter().any(|f| f.starts_with("equality")));
    let e = verify_fenchel(&ellipse(2.0, 0.5).unwrap()).unwrap();
    assert!(e.passed && (e.lhs - TAU).abs() < 1e-8);
    let w = verify_fenchel(&wobble_space(1.0, 1.0, 0.2, 2, 0.3).unwrap()).unwrap();
    assert!(w.passed && w.lhs < TAU - 1e-6);
    assert!(w.flags.iter().any(|f| f == "strict inequality"));
}

#[test]
fn fary_milnor_on_clam_shell_finds_two_count_poles() {
    for eps in [0.3, 0.6] {
        let c = clam_shell(eps).unwrap();
        let rep = verify_fary_milnor(&c, false, 4000, 1).unwrap();
        assert!(rep.passed);
        assert!(rep.lhs >= clam_shell_bound(eps).unwrap() - 1e-6);
        assert!(rep.lhs > 2.0 * TAU);
        assert!(rep.metrics["count_two_poles"] > 0.0);
        // a knotted claim is refuted by the witnesses
        let rep = verify_fary_milnor(&c, true, 4000, 1).unwrap();
        assert!(!rep.passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn fenchel_on_random_index_one_curves(a in 0.5..2.0f64, b in 0.5..2.0f64, alpha in 0.0..0.3f64, k in 1u32..5, phase in 0.0..TAU) {
        let c = wobble_space(a, b, alpha, k, phase);
        prop_assume!(c.is_ok());
        let rep = verify_fenchel(&c.unwrap()).unwrap();
        prop_assert!(rep.passed, "TC {}", rep.lhs);
        prop_assert!(rep.lhs <= TAU + TC_TOL);
    }
}
