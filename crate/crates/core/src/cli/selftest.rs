use std::time::Instant;

use crate::curve::total_curvature;
use crate::desitter::{adapted_frame, frame_derivatives, tangent_indicatrix, SphericalCurve};
use crate::engine;
use crate::error::Result;
use crate::gallery::{
    circle, clam_shell, clam_shell_bound, equator, quad_perturb, trefoil_spacelike, wobble, wobble_space,
};
use crate::hyperbolic::choose_radius;
use crate::lorentz::LorentzVector;

use super::{EXIT_FAIL, EXIT_PASS};

struct Row {
    check: &'static str,
    subject: String,
    passed: bool,
    detail: String,
}

fn spherical_gallery() -> Result<Vec<SphericalCurve>> {
    Ok(vec![
        equator(1)?,
        wobble(0.2, 3, 1)?,
        wobble(0.3, 2, 2)?,
        quad_perturb(0.5)?,
        tangent_indicatrix(&clam_shell(0.5)?)?,
    ])
}

fn gram_defect(f: &[LorentzVector; 3]) -> f64 {
    let target = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max((f[i].inner(&f[j]) - target[i][j]).abs());
        }
    }
    worst
}

fn structure_defect(g: &SphericalCurve, s: f64, h: f64) -> f64 {
    let plus = adapted_frame(g, s + h);
    let minus = adapted_frame(g, s - h);
    let fd = [
        (plus.e1 - minus.e1) / (2.0 * h),
        (plus.e2 - minus.e2) / (2.0 * h),
        (plus.e3 - minus.e3) / (2.0 * h),
    ];
    let exact = frame_derivatives(&g.at(s));
    (0..3)
        .map(|i| (fd[i] - exact[i]).euclid_norm_sq().sqrt())
        .fold(0.0, f64::max)
}

fn rows(quick: bool) -> Result<Vec<Row>> {
    let n_mc = if quick { 1_000 } else { 10_000 };
    let mut out = Vec::new();
    let mut push = |check, subject: &str, passed, detail: String| {
        out.push(Row {
            check,
            subject: subject.to_string(),
            passed,
            detail,
        })
    };

    for g in spherical_gallery()? {
        let name = g.label().to_string();
        let pts = if quick { 50 } else { 200 };
        let ss: Vec<f64> = (0..pts).map(|i| g.length() * (i as f64 + 0.37) / pts as f64).collect();
        let gram = ss
            .iter()
            .map(|&s| {
                let f = adapted_frame(&g, s);
                gram_defect(&[f.e1, f.e2, f.e3])
            })
            .fold(0.0, f64::max);
        push("frame-gram", &name, gram < 1e-8, format!("max defect {gram:.2e}"));
        let st = ss.iter().map(|&s| structure_defect(&g, s, 1e-4)).fold(0.0, f64::max);
        push("structure-equations", &name, st < 1e-5, format!("max defect {st:.2e}"));
        let res = g.arclength_residual(1000);
        push("arclength-identity", &name, res < 1e-7, format!("residual {res:.2e}"));

        let lem = engine::verify_lemma_2i(&g, if quick { 50 } else { 200 }, 11)?;
        push("lemma-2i", &name, lem.passed, format!("{} exceptions", lem.lhs));

        let mut worst: f64 = 0.0;
        let mut ok = true;
        for safety in [1.5, 2.0, 4.0] {
            let rep = engine::verify_localized_quadrature(&g, choose_radius(&g, safety)?, 256)?;
            worst = worst.max(rep.rel_residual);
            ok &= rep.passed;
        }
        push("crofton-local-quadrature", &name, ok, format!("max rel {worst:.2e}"));

        let r = choose_radius(&g, 2.0)?;
        let mc = engine::verify_localized_mc(&g, r, n_mc, 5)?;
        let se = mc.stderr.unwrap_or(0.0);
        push(
            "crofton-local-mc",
            &name,
            mc.abs_residual <= 3.0 * se + 1e-9 * mc.rhs.abs(),
            format!("|res| {:.3e}, stderr {se:.3e}", mc.abs_residual),
        );
        let gl = engine::global_residual_at(&g, r, n_mc, 5)?;
        push(
            "crofton-global",
            &name,
            gl.passed,
            format!("|res| {:.3e}, tol {:.3e}", gl.abs_residual, gl.tolerance),
        );
    }

    let f = engine::verify_fenchel(&circle(1.0)?)?;
    push(
        "fenchel",
        "circle(r=1)",
        f.passed && (f.lhs - std::f64::consts::TAU).abs() < 1e-9 && !f.flags.is_empty(),
        format!("TC {:.12}", f.lhs),
    );
    let w = wobble_space(1.0, 1.0, 0.2, 2, 0.3)?;
    let f = engine::verify_fenchel(&w)?;
    push(
        "fenchel",
        w.label(),
        f.passed && f.lhs < std::f64::consts::TAU,
        format!("TC {:.12}", f.lhs),
    );

    let mut prev = 0.0;
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for k in 1..=9 {
        let eps = k as f64 / 10.0;
        let tc = total_curvature(&clam_shell(eps)?)?;
        let margin = tc - clam_shell_bound(eps)?;
        worst = worst.min(margin);
        ok &= margin >= -1e-6 && tc > prev;
        prev = tc;
    }
    push(
        "clam-shell-bound",
        "clam_shell(0.1..0.9)",
        ok,
        format!("min TC - bound {worst:.3}"),
    );

    let t = trefoil_spacelike(0.05)?;
    let fm = engine::verify_fary_milnor(&t, true, if quick { 1_000 } else { 10_000 }, 3)?;
    push(
        "fary-milnor",
        t.label(),
        fm.passed,
        format!("TC {:.9}, count-2 poles {}", fm.lhs, fm.metrics["count_two_poles"]),
    );
    Ok(out)
}

pub(super) fn run(quick: bool) -> i32 {
    let start = Instant::now();
    let rows = match rows(quick) {
        Ok(r) => r,
        Err(e) => {
            println!("selftest aborted: {e}");
            return EXIT_FAIL;
        }
    };
    println!("{:<26} {:<44} {:<6} detail", "check", "subject", "result");
    for r in &rows {
        println!(
            "{:<26} {:<44} {:<6} {}",
            r.check,
            r.subject,
            if r.passed { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!(
        "{} checks, {} failed, {:.1}s",
        rows.len(),
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
