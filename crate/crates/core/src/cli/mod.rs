//! Command-line driver.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 input error,
//! 3 precondition violation.

mod selftest;
pub mod spec;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::curve::{certify_strong_spacelike, StrongSpacelikeReport, STRONG_TOL};
use crate::desitter::{frame_vectors, intersection_number, tangent_indicatrix, SphericalCurve};
use crate::engine::{self, VerificationReport, DEGENERATE_TOL, MC_SCAN};
use crate::error::{Error, Result};
use crate::gallery::{clam_shell, clam_shell_bound, clam_shell_profile, GalleryCurve};
use crate::hyperbolic::{choose_radius, sample_disk};

use spec::{parse_params, CurveSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "CROFTON_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "crofton",
    version,
    about = "Crofton identities and total curvature of closed spacelike curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run verification checks on one curve and write a report.
    Verify(VerifyArgs),
    /// Emit plot data for a builtin family.
    Gallery(GalleryArgs),
    /// Run the invariant suite and print a pass/fail matrix.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    CroftonLocal,
    CroftonGlobal,
    Fenchel,
    FaryMilnor,
    #[value(name = "lemma-2i")]
    Lemma2I,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Quadrature,
    Mc,
    Both,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Curve spec file or `builtin:NAME?key=value,...`.
    #[arg(long)]
    curve: String,
    #[arg(long, value_enum, default_value = "all")]
    check: Check,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    /// Monte Carlo sample count (also the pole-search size).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Disk radius: `auto` or a positive number.
    #[arg(long, default_value = "auto")]
    radius: String,
    /// Safety factor for the automatic radius.
    #[arg(long, default_value_t = 2.0)]
    safety: f64,
    /// Seed; defaults to $CROFTON_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the quadrature relative tolerance and the total-curvature slack.
    #[arg(long)]
    tol: Option<f64>,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long)]
    threads: Option<usize>,
    /// Treat the curve as a nontrivial knot for the fary-milnor check.
    #[arg(long)]
    knotted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    CurveCsv,
    IndicatrixCsv,
    HprimeCsv,
    SweepCsv,
    PolesCsv,
}

#[derive(Debug, clap::Args)]
struct GalleryArgs {
    #[arg(long)]
    family: String,
    /// `key=value,key=value`
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long, value_enum)]
    emit: Emit,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Rows for sampled tables.
    #[arg(long, default_value_t = 512)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
struct SelftestArgs {
    /// Smaller sample sizes.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    threads: Option<usize>,
}

/// Exit code for an error: malformed input versus a curve that does not
/// meet a check's hypotheses.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BadParameter(_) | Error::InvalidCurve(_) | Error::ZeroVector | Error::NegativeRadius(_) => EXIT_INPUT,
        Error::NotSpacelike { .. }
        | Error::InflectionPoint { .. }
        | Error::NotStrongSpacelike { .. }
        | Error::NonIntegerWinding { .. }
        | Error::NotOnDeSitter { .. }
        | Error::NotInH2
        | Error::RadiusTooSmall { .. }
        | Error::WrongIndex { .. }
        | Error::DegenerateDomain { .. } => EXIT_PRECONDITION,
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let invocation: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match cli.command {
        Command::Verify(a) => with_threads(a.threads, || cmd_verify(&a, invocation)),
        Command::Gallery(a) => match cmd_gallery(&a) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
                EXIT_PASS
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Command::Selftest(a) => with_threads(a.threads, || selftest::run(a.quick)),
    }
}

fn with_threads(threads: Option<usize>, f: impl FnOnce() -> i32 + Send) -> i32 {
    match threads {
        None => f(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                eprintln!("error: cannot build thread pool: {e}");
                EXIT_INPUT
            }
        },
    }
}

#[derive(Debug, Serialize)]
struct Precondition {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<StrongSpacelikeReport>,
}

#[derive(Debug, Serialize)]
struct ReportFile {
    tool: &'static str,
    version: &'static str,
    invocation: Vec<String>,
    seed: u64,
    curve: String,
    reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    precondition: Option<Precondition>,
    passed: bool,
    exit_code: i32,
    /// Wall-clock seconds per report; the only field that varies between
    /// identical runs.
    timing: Vec<f64>,
}

fn resolve_seed(arg: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = arg {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{SEED_ENV}={v} is not an unsigned integer")),
        Err(_) => Ok(0),
    }
}

enum Radius {
    Auto,
    Fixed(f64),
}

fn parse_radius(s: &str) -> std::result::Result<Radius, String> {
    if s == "auto" {
        return Ok(Radius::Auto);
    }
    match s.parse::<f64>() {
        Ok(r) if r > 0.0 && r.is_finite() => Ok(Radius::Fixed(r)),
        _ => Err(format!("--radius must be `auto` or a positive number, got `{s}`")),
    }
}

struct Plan<'a> {
    args: &'a VerifyArgs,
    seed: u64,
    radius: Radius,
}

impl Plan<'_> {
    fn radius_for(&self, g: &SphericalCurve, safety: f64) -> Result<f64> {
        match self.radius {
            Radius::Auto => choose_radius(g, safety),
            Radius::Fixed(r) => engine::check_radius(g, r).map(|_| r),
        }
    }

    fn crofton_local(&self, g: &SphericalCurve) -> Result<Vec<VerificationReport>> {
        let r = self.radius_for(g, self.args.safety)?;
        let mut out = Vec::new();
        if matches!(self.args.method, MethodArg::Quadrature | MethodArg::Both) {
            let mut rep = engine::verify_localized_quadrature(g, r, 256)?;
            if let Some(tol) = self.args.tol {
                rep.tolerance = tol;
                rep.passed = rep.rel_residual < tol && rep.metrics["max_inner_defect"] < engine::INNER_TOL;
            }
            out.push(rep);
        }
        if matches!(self.args.method, MethodArg::Mc | MethodArg::Both) {
            out.push(engine::verify_localized_mc(g, r, self.args.samples, self.seed)?);
        }
        Ok(out)
    }

    fn crofton_global(&self, g: &SphericalCurve) -> Result<Vec<VerificationReport>> {
        let safety = self.args.safety.max(2.0);
        let r = self.radius_for(g, safety)?;
        Ok(vec![engine::global_residual_at(g, r, self.args.samples, self.seed)?])
    }

    fn lemma(&self, g: &SphericalCurve) -> Result<Vec<VerificationReport>> {
        Ok(vec![engine::verify_lemma_2i(g, 200, self.seed)?])
    }
}

fn run_checks(plan: &Plan, curve: &GalleryCurve, reports: &mut Vec<VerificationReport>) -> Result<()> {
    let check = plan.args.check;
    let spherical = match curve {
        GalleryCurve::Spherical(g) => g.clone(),
        GalleryCurve::Space(c) => {
            if matches!(check, Check::Fenchel | Check::All) || check == Check::FaryMilnor {
                let index = crate::curve::winding_index(c)?;
                let run_fenchel = check == Check::Fenchel || (check == Check::All && index == 1);
                let run_fm = check == Check::FaryMilnor || (check == Check::All && index == 2);
                if run_fenchel {
                    let mut rep = engine::verify_fenchel(c)?;
                    if let Some(tol) = plan.args.tol {
                        rep.tolerance = tol;
                        rep.passed = rep.lhs <= rep.rhs + tol;
                    }
                    reports.push(rep);
                }
                if run_fm {
                    reports.push(engine::verify_fary_milnor(
                        c,
                        plan.args.knotted,
                        plan.args.samples,
                        plan.seed,
                    )?);
                }
                if check != Check::All {
                    return Ok(());
                }
            }
            tangent_indicatrix(c)?
        }
    };
    if matches!(check, Check::Fenchel | Check::FaryMilnor) {
        return Err(Error::BadParameter(format!(
            "the {check:?} check needs a space curve, got a curve on the de Sitter sphere"
        )));
    }
    if matches!(check, Check::CroftonLocal | Check::All) {
        reports.extend(plan.crofton_local(&spherical)?);
    }
    if matches!(check, Check::CroftonGlobal | Check::All) {
        reports.extend(plan.crofton_global(&spherical)?);
    }
    if matches!(check, Check::Lemma2I | Check::All) {
        reports.extend(plan.lemma(&spherical)?);
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, invocation: Vec<String>) -> i32 {
    let input = || -> std::result::Result<(u64, Radius), String> {
        let seed = resolve_seed(args.seed)?;
        let radius = parse_radius(&args.radius)?;
        if !(args.safety >= 1.0) {
            return Err(format!("--safety must be at least 1, got {}", args.safety));
        }
        if args.samples < 2 {
            return Err("--samples must be at least 2".into());
        }
        if let Some(t) = args.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("--tol must be positive, got {t}"));
            }
        }
        Ok((seed, radius))
    };
    let (seed, radius) = match input() {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    let mut file = ReportFile {
        tool: "crofton",
        version: env!("CARGO_PKG_VERSION"),
        invocation,
        seed,
        curve: args.curve.clone(),
        reports: Vec::new(),
        precondition: None,
        passed: false,
        exit_code: EXIT_FAIL,
        timing: Vec::new(),
    };

    let curve = CurveSpec::load(&args.curve).and_then(|s| s.build());
    let outcome = match &curve {
        Err(e) => Err(e.clone()),
        Ok(c) => {
            file.curve = match c {
                GalleryCurve::Space(c) => c.label().to_string(),
                GalleryCurve::Spherical(g) => g.label().to_string(),
            };
            let plan = Plan { args, seed, radius };
            run_checks(&plan, c, &mut file.reports)
        }
    };
    file.timing = file.reports.iter().map(|r| r.wall_time).collect();
    let code = match outcome {
        Ok(()) if file.reports.iter().all(|r| r.passed) => EXIT_PASS,
        Ok(()) => EXIT_FAIL,
        Err(e) => {
            let code = exit_code_for(&e);
            let certificate = match (&curve, code) {
                (Ok(GalleryCurve::Space(c)), EXIT_PRECONDITION) => Some(certify_strong_spacelike(c, 4096, STRONG_TOL)),
                _ => None,
            };
            file.precondition = Some(Precondition {
                error: e.to_string(),
                certificate,
            });
            eprintln!("error: {e}");
            code
        }
    };
    file.exit_code = code;
    file.passed = code == EXIT_PASS;
    for r in &file.reports {
        println!(
            "{:<15} {:<12} {:<8} lhs={:.12e} rhs={:.12e} |res|={:.3e}",
            r.identity,
            format!("{:?}", r.method).to_lowercase(),
            if r.passed { "PASS" } else { "FAIL" },
            r.lhs,
            r.rhs,
            r.abs_residual
        );
    }

    let text = match serde_json::to_string_pretty(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return EXIT_FAIL;
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => println!("{text}"),
    }
    code
}

fn spherical_rows(g: &SphericalCurve, n: usize) -> String {
    let mut out = String::from("s,theta,phi,x1,x2,x3\n");
    for i in 0..n {
        let s = g.length() * i as f64 / n as f64;
        let a = g.at(s);
        let p = frame_vectors(a.theta, a.phi)[0];
        let _ = writeln!(out, "{s},{},{},{},{},{}", a.theta, a.phi, p.x1, p.x2, p.x3);
    }
    out
}

fn write_table(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::BadParameter(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| Error::BadParameter(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_gallery(args: &GalleryArgs) -> Result<Vec<PathBuf>> {
    if args.samples < 2 {
        return Err(Error::BadParameter("--samples must be at least 2".into()));
    }
    let params = parse_params(&args.params)?;
    let curve = CurveSpec::Builtin {
        name: args.family.clone(),
        params: params.clone(),
    }
    .build();
    let n = args.samples;
    let tag = args.family.as_str();
    let path = match args.emit {
        Emit::CurveCsv => {
            let body = match curve? {
                GalleryCurve::Space(c) => {
                    let mut out = String::from("t,x1,x2,x3\n");
                    for i in 0..n {
                        let t = c.period() * i as f64 / n as f64;
                        let p = c.position(t);
                        let _ = writeln!(out, "{t},{},{},{}", p.x1, p.x2, p.x3);
                    }
                    out
                }
                GalleryCurve::Spherical(g) => spherical_rows(&g, n),
            };
            write_table(&args.out, &format!("{tag}_curve.csv"), &body)?
        }
        Emit::IndicatrixCsv => {
            let g = match curve? {
                GalleryCurve::Space(c) => tangent_indicatrix(&c)?,
                GalleryCurve::Spherical(g) => g,
            };
            write_table(&args.out, &format!("{tag}_indicatrix.csv"), &spherical_rows(&g, n))?
        }
        Emit::HprimeCsv => {
            if tag != "clam_shell" {
                return Err(Error::BadParameter("hprime-csv is only defined for clam_shell".into()));
            }
            curve?;
            let eps = params["epsilon"];
            let mut out = String::from("theta,h,hprime,hsecond\n");
            for i in 0..=n {
                let th = 4.0 * std::f64::consts::PI * i as f64 / n as f64;
                let [h, h1, h2, _] = clam_shell_profile(eps, th);
                let _ = writeln!(out, "{th},{h},{h1},{h2}");
            }
            write_table(&args.out, "clam_shell_hprime.csv", &out)?
        }
        Emit::SweepCsv => {
            if tag != "clam_shell" {
                return Err(Error::BadParameter("sweep-csv is only defined for clam_shell".into()));
            }
            let mut out = String::from("epsilon,total_curvature,bound\n");
            for k in 1..=9 {
                let eps = k as f64 / 10.0;
                let tc = crate::curve::total_curvature(&clam_shell(eps)?)?;
                let _ = writeln!(out, "{eps},{tc},{}", clam_shell_bound(eps)?);
            }
            write_table(&args.out, "clam_shell_sweep.csv", &out)?
        }
        Emit::PolesCsv => {
            let g = match curve? {
                GalleryCurve::Space(c) => tangent_indicatrix(&c)?,
                GalleryCurve::Spherical(g) => g,
            };
            let seed = resolve_seed(args.seed).map_err(Error::BadParameter)?;
            let r = choose_radius(&g, 2.0)?;
            let mut out = String::from("x1,x2,x3,n_Yperp\n");
            for p in sample_disk(r, n, seed)? {
                let y = p.vector();
                let res = intersection_number(&g, &y, MC_SCAN, DEGENERATE_TOL)?;
                if !res.degenerate {
                    let _ = writeln!(out, "{},{},{},{}", y.x1, y.x2, y.x3, res.count);
                }
            }
            write_table(&args.out, &format!("{tag}_poles.csv"), &out)?
        }
    };
    Ok(vec![path])
}

/// Parsed report file, for tests comparing runs.
pub fn strip_timing(report_json: &str) -> Result<BTreeMap<String, serde_json::Value>> {
    let mut v: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(report_json).map_err(|e| Error::InvalidCurve(format!("report: {e}")))?;
    v.remove("timing");
    Ok(v)
}
