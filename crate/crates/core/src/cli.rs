//! The `hhcert` command line: argument handling, dispatch, rendering.
//!
//! [`run`] does all the work and returns the exit code together with both
//! output streams, so the binary is a thin wrapper and tests need no process.
//!
//! Exit codes: 0 success, 1 input or evaluation error, 2 a bound or check
//! was violated, 3 the convexity hypothesis of `bracket` was falsified.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    identity_check, report_all, verify_sandwich, BoundParams, BoundReport, IdentityCheck, ReportConfig, Sandwich,
    Status,
};
use crate::bracket::{bracket_integral, Bracket};
use crate::classify::{
    falsify, ConvexityClass, PathInterval, SampleConfig, Verdict, Witness, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::autodiff::eval_jet2;
use crate::error::Error;
use crate::expr::{parse, Expr};
use crate::json;

pub const SEED_ENV: &str = "HHCERT_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hhcert", version, about = "Hermite-Hadamard error bounds and certified integral brackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every applicable bound against the measured defect
    Bounds(CommonArgs),
    /// Bracket the integral of a convex function over [a, b]
    Bracket(CommonArgs),
    /// Sample the convexity classes of f (or of |f''|)
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        /// Classify |f''| instead of f
        #[arg(long)]
        second_derivative: bool,
    },
    /// Check the integration-by-parts identity and the four-term sandwich
    Verify(CommonArgs),
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// Expression in x, see docs/grammar.md
    #[arg(long)]
    expr: String,
    /// Left endpoint
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Right endpoint, > a
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Angle in radians, mapped to eta = cos(phi)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Contraction in (0, 1]; overrides --phi
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Hoelder exponent, > 1
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    p: f64,
    /// Power-mean exponent, >= 1
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    q: f64,
    /// s-convexity order, in (0, 1]
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    s: f64,
    /// Absolute tolerance for quadrature and bracket width
    #[arg(long, default_value_t = 1e-10, allow_negative_numbers = true)]
    tol: f64,
    /// Sampling seed [default: $HHCERT_SEED, else built-in]
    #[arg(long)]
    seed: Option<u64>,
    /// Random triples per classifier (corner triples are added)
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Validated inputs shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub expression: String,
    pub ast: Expr,
    pub interval: PathInterval,
    pub params: BoundParams,
    pub tol: f64,
    pub sampling: SampleConfig,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn input_error(stderr: String) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr }
    }
}

/// Parses `args` (program name first) and runs the subcommand. `env_seed` is
/// the value of [`SEED_ENV`], consulted only when `--seed` is absent.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::input_error(text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let (common, second_derivative) = match &cli.command {
        Command::Bounds(c) | Command::Bracket(c) | Command::Verify(c) => (c, false),
        Command::Classify { common, second_derivative } => (common, *second_derivative),
    };
    let cfg = match RunConfig::from_args(common, env_seed) {
        Ok(cfg) => cfg,
        Err(msg) => return Outcome::input_error(msg),
    };
    match cli.command {
        Command::Bounds(_) => cmd_bounds(&cfg),
        Command::Bracket(_) => cmd_bracket(&cfg),
        Command::Classify { .. } => cmd_classify(&cfg, second_derivative),
        Command::Verify(_) => cmd_verify(&cfg),
    }
}

fn error_line(e: &Error, expression: &str) -> String {
    let mut s = format!("error: {e}\n");
    let offset = match e {
        Error::Syntax { offset, .. } | Error::UnknownFunction { offset, .. } => Some(*offset),
        _ => None,
    };
    if let Some(offset) = offset {
        let col = expression.get(..offset).map_or(offset, |p| p.chars().count());
        let _ = writeln!(s, "  {expression}\n  {}^", " ".repeat(col));
    }
    s
}

impl RunConfig {
    fn from_args(c: &CommonArgs, env_seed: Option<&str>) -> Result<Self, String> {
        let ast = parse(&c.expr).map_err(|e| error_line(&e, &c.expr))?;
        let seed = match (c.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(env)) => env
                .trim()
                .parse()
                .map_err(|_| format!("error: {SEED_ENV} must be an unsigned 64-bit integer, got `{env}`\n"))?,
            (None, None) => DEFAULT_SEED,
        };
        let fail = |m: String| format!("error: {m}\n");
        if !(c.a.is_finite() && c.b.is_finite() && c.a < c.b) {
            return Err(fail(format!("need finite a < b, got a = {}, b = {}", c.a, c.b)));
        }
        let eta = match c.eta {
            Some(eta) => eta,
            None if (0.0..FRAC_PI_2).contains(&c.phi) => c.phi.cos(),
            None => return Err(fail(format!("phi must lie in [0, pi/2), got {}", c.phi))),
        };
        let interval = PathInterval::new(c.a, c.b, eta).map_err(|e| fail(e.to_string()))?;
        if !(c.p > 1.0 && c.p.is_finite()) {
            return Err(fail(format!("p must be finite and > 1, got {}", c.p)));
        }
        if !(c.q >= 1.0 && c.q.is_finite()) {
            return Err(fail(format!("q must be finite and >= 1, got {}", c.q)));
        }
        if !(c.s > 0.0 && c.s <= 1.0) {
            return Err(fail(format!("s must lie in (0, 1], got {}", c.s)));
        }
        if !(c.tol > 0.0 && c.tol.is_finite()) {
            return Err(fail(format!("tol must be positive, got {}", c.tol)));
        }
        if c.samples == 0 {
            return Err(fail("samples must be at least 1".into()));
        }
        Ok(RunConfig {
            expression: c.expr.clone(),
            ast,
            interval,
            params: BoundParams { p: c.p, q: c.q, s: c.s },
            tol: c.tol,
            sampling: SampleConfig::new(c.samples, seed),
            format: c.format,
        })
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::NotFalsified { samples } => format!("not falsified ({samples} samples)"),
        Verdict::Falsified(w) => format!("falsified at {w}"),
    }
}

pub fn cmd_bounds(cfg: &RunConfig) -> Outcome {
    let reports = report_all(&cfg.ast, &cfg.interval, &cfg.params, &ReportConfig { sampling: cfg.sampling, tol: cfg.tol });
    let code = if reports.iter().any(|r| r.status == Status::Violated) { EXIT_VIOLATED } else { EXIT_OK };
    let stdout = match cfg.format {
        OutputFormat::Json => json::to_string(&reports) + "\n",
        OutputFormat::Text => bounds_text(&reports),
    };
    Outcome { code, stdout, stderr: String::new() }
}

fn bounds_text(reports: &[BoundReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{:<16} {:<20} bound {:<14} defect {:<14} margin {}",
            r.theorem_id.as_str(),
            format!("{:?}", r.status),
            fmt_opt(r.bound),
            fmt_opt(r.defect),
            fmt_opt(r.margin)
        );
        let _ = writeln!(s, "    hypothesis: {}", r.hypothesis);
        if let Some(v) = &r.hypothesis_verdict {
            let _ = writeln!(s, "    verdict: {}", verdict_text(v));
        }
        if let Some(e) = &r.error {
            let _ = writeln!(s, "    error: {e}");
        }
        for n in &r.notes {
            let _ = writeln!(s, "    note: {n}");
        }
    }
    s
}

#[derive(Serialize)]
struct FalsifiedOutput<'a> {
    status: &'static str,
    witness: &'a Witness,
}

pub fn cmd_bracket(cfg: &RunConfig) -> Outcome {
    let iv = &cfg.interval;
    match bracket_integral(&cfg.ast, iv.a, iv.b, cfg.tol, &cfg.sampling) {
        Ok(b) => Outcome::ok(match cfg.format {
            OutputFormat::Json => json::to_string(&b) + "\n",
            OutputFormat::Text => bracket_text(&b),
        }),
        Err(Error::HypothesisFalsified(w)) => {
            let stdout = match cfg.format {
                OutputFormat::Json => json::to_string(&FalsifiedOutput { status: "HypothesisFalsified", witness: &w }) + "\n",
                OutputFormat::Text => format!("f is not convex on [{}, {}]: {w}\n", iv.a, iv.b),
            };
            Outcome { code: EXIT_FALSIFIED, stdout, stderr: format!("error: {}\n", Error::HypothesisFalsified(w)) }
        }
        Err(e) => Outcome::input_error(error_line(&e, &cfg.expression)),
    }
}

fn bracket_text(b: &Bracket) -> String {
    format!(
        "integral in [{:.17e}, {:.17e}]\nwidth {:.3e} with {} panels\nconvexity: {}\n",
        b.lo,
        b.hi,
        b.width(),
        b.panels,
        verdict_text(&b.hypothesis)
    )
}

#[derive(Serialize)]
struct ClassResult {
    class: &'static str,
    verdict: Option<Verdict>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    target: &'static str,
    a: f64,
    b: f64,
    eta: f64,
    results: Vec<ClassResult>,
}

/// The three path classes, and s-convexity of order `s` on the classical
/// interval.
pub fn cmd_classify(cfg: &RunConfig, second_derivative: bool) -> Outcome {
    let iv = cfg.interval;
    let f = &cfg.ast;
    let mut classes = vec![ConvexityClass::PhiConvex, ConvexityClass::LogPhiConvex, ConvexityClass::QuasiPhiConvex];
    if iv.is_classical() {
        classes.push(ConvexityClass::SConvex { s: cfg.params.s });
    }
    let results = classes
        .into_iter()
        .map(|class| {
            let v = if second_derivative {
                falsify(class, |x| Ok(eval_jet2(f, x)?.d2.abs()), &iv, &cfg.sampling)
            } else {
                falsify(class, |x| f.eval(x), &iv, &cfg.sampling)
            };
            match v {
                Ok(v) => ClassResult { class: class.name(), verdict: Some(v), error: None },
                Err(e) => ClassResult { class: class.name(), verdict: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let out = ClassifyOutput {
        target: if second_derivative { "abs_second_derivative" } else { "f" },
        a: iv.a,
        b: iv.b,
        eta: iv.eta,
        results,
    };
    Outcome::ok(match cfg.format {
        OutputFormat::Json => json::to_string(&out) + "\n",
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &out.results {
                let what = match (&r.verdict, &r.error) {
                    (Some(v), _) => verdict_text(v),
                    (None, Some(e)) => format!("error: {e}"),
                    (None, None) => unreachable!(),
                };
                let _ = writeln!(s, "{:<18} {what}", r.class);
            }
            s
        }
    })
}

#[derive(Serialize)]
struct VerifyOutput {
    identity: IdentityCheck,
    identity_tolerance: f64,
    sandwich: Sandwich,
    sandwich_slack: f64,
    phi_convex: Verdict,
    /// Links of the chain that are required: the outer link compares f at
    /// the contracted end with f(b) and is only required when `eta = 1`.
    checked_links: usize,
    status: &'static str,
}

pub fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let iv = &cfg.interval;
    let f = &cfg.ast;
    let identity = match identity_check(f, iv, cfg.tol) {
        Ok(c) => c,
        Err(e) => return Outcome::input_error(error_line(&e, &cfg.expression)),
    };
    let sandwich = match verify_sandwich(f, iv, cfg.tol) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(error_line(&e, &cfg.expression)),
    };
    let phi_convex = match falsify(ConvexityClass::PhiConvex, |x| f.eval(x), iv, &cfg.sampling) {
        Ok(v) => v,
        Err(e) => return Outcome::input_error(error_line(&e, &cfg.expression)),
    };
    let identity_tolerance = (10.0 * cfg.tol).max(1e-9);
    let sandwich_slack = (10.0 * cfg.tol).max(1e-10);
    let checked_links = match (&phi_convex, iv.is_classical()) {
        (Verdict::Falsified(_), _) => 0,
        (_, true) => 3,
        (_, false) => 2,
    };
    let chain_ok = sandwich.gaps[..checked_links].iter().all(|g| *g >= -sandwich_slack);
    let pass = identity.residual <= identity_tolerance && chain_ok;
    let out = VerifyOutput {
        identity,
        identity_tolerance,
        sandwich,
        sandwich_slack,
        phi_convex,
        checked_links,
        status: if pass { "ok" } else { "failed" },
    };
    let stdout = match cfg.format {
        OutputFormat::Json => json::to_string(&out) + "\n",
        OutputFormat::Text => format!(
            "identity: lhs {:.17e} rhs {:.17e} residual {:.3e} (tolerance {:.1e})\n\
             sandwich: {:.17e} <= {:.17e} <= {:.17e} <= {:.17e}\n\
             convexity of f: {}\nstatus: {}\n",
            out.identity.lhs,
            out.identity.rhs,
            out.identity.residual,
            out.identity_tolerance,
            out.sandwich.midpoint_value,
            out.sandwich.average,
            out.sandwich.endpoint_mean,
            out.sandwich.outer_mean,
            verdict_text(&out.phi_convex),
            out.status
        ),
    };
    Outcome { code: if pass { EXIT_OK } else { EXIT_VIOLATED }, stdout, stderr: String::new() }
}
