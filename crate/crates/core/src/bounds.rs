//! Right-hand sides of the second-derivative bounds, the measured defect they
//! bound, and a batch runner that checks each bound against its hypothesis.
//!
//! With `h = eta (b - a)` and `c = a + h`, every bound controls
//!
//! ```text
//! | (1/h) int_a^c f  -  (f(a) + f(c)) / 2 |
//! ```
//!
//! through the identity
//! `(f(a) + f(c))/2 - (1/h) int_a^c f = (h^2/2) int_0^1 (t - t^2) f''(a + t h) dt`.
//! Bounds read the endpoint magnitudes `alpha = |f''(a)|`, `beta = |f''(b)|`
//! at the original endpoint `b`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::autodiff::eval_jet2;
use crate::classify::{ConvexityClass, Geometry, PathInterval, SampleConfig, SampleValues, Verdict};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::quad::integrate;
use crate::special::{beta_tt, gamma, kernel_log, log_mean, MeanPair};

/// Margins below this are reported as violations.
pub const VIOLATION_SLACK: f64 = 1e-9;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Defect {
    /// `(1/h) int_a^c f`
    pub average: f64,
    /// `(f(a) + f(c)) / 2`
    pub endpoint_mean: f64,
    /// `|average - endpoint_mean|`
    pub value: f64,
}

fn path_average(f: &Expr, iv: &PathInterval, tol: f64) -> Result<f64> {
    let h = iv.width();
    Ok(integrate(|x| f.eval(x), iv.a, iv.end(), tol * h)?.value / h)
}

/// Measures the defect; the average is accurate to `tol` (absolute).
pub fn defect(f: &Expr, iv: &PathInterval, tol: f64) -> Result<Defect> {
    let average = path_average(f, iv, tol)?;
    let endpoint_mean = 0.5 * (f.eval(iv.a)? + f.eval(iv.end())?);
    Ok(Defect { average, endpoint_mean, value: (average - endpoint_mean).abs() })
}

/// Both sides of the integration-by-parts identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    /// `endpoint_mean - average`
    pub lhs: f64,
    /// `(h^2/2) int_0^1 (t - t^2) f''(a + t h) dt`
    pub rhs: f64,
    pub residual: f64,
}

pub fn identity_check(f: &Expr, iv: &PathInterval, tol: f64) -> Result<IdentityCheck> {
    let d = defect(f, iv, tol)?;
    let lhs = d.endpoint_mean - d.average;
    let h = iv.width();
    let scale = 0.5 * h * h;
    let kernel = integrate(
        |t| Ok((t - t * t) * eval_jet2(f, iv.a + t * h)?.d2),
        0.0,
        1.0,
        tol / scale.max(f64::MIN_POSITIVE),
    )?;
    let rhs = scale * kernel.value;
    Ok(IdentityCheck { lhs, rhs, residual: (rhs - lhs).abs() })
}

/// `|rhs - lhs|` of the integration-by-parts identity.
pub fn identity_residual(f: &Expr, iv: &PathInterval, tol: f64) -> Result<f64> {
    Ok(identity_check(f, iv, tol)?.residual)
}

/// `|f''(a)|` and `|f''(b)|`.
pub fn endpoint_magnitudes(f: &Expr, iv: &PathInterval) -> Result<MeanPair> {
    Ok(MeanPair::new(eval_jet2(f, iv.a)?.d2.abs(), eval_jet2(f, iv.b)?.d2.abs()))
}

fn check_holder_p(p: f64) -> Result<f64> {
    if p > 1.0 && p.is_finite() {
        Ok(p / (p - 1.0))
    } else {
        Err(Error::domain(format!("Hoelder exponent p must be finite and > 1, got {p}")))
    }
}

fn check_magnitudes(m: &MeanPair) -> Result<()> {
    if m.alpha >= 0.0 && m.beta >= 0.0 && m.alpha.is_finite() && m.beta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("magnitudes must be finite and non-negative, got ({}, {})", m.alpha, m.beta)))
    }
}

/// `(sqrt(pi)/2)^(1/p) (Gamma(p+1) / Gamma(p+3/2))^(1/p)`, which equals
/// `4 (int_0^1 (t - t^2)^p dt)^(1/p)`.
pub fn holder_constant(p: f64) -> Result<f64> {
    check_holder_p(p)?;
    Ok((0.5 * PI.sqrt()).powf(1.0 / p) * (gamma(p + 1.0)? / gamma(p + 1.5)?).powf(1.0 / p))
}

fn h2(iv: &PathInterval) -> f64 {
    let h = iv.width();
    h * h
}

/// `|f''|` phi-convex: `h^2 (alpha + beta) / 24`.
pub fn bound_phi_q1(m: MeanPair, iv: &PathInterval) -> Result<f64> {
    check_magnitudes(&m)?;
    Ok(h2(iv) * (m.alpha + m.beta) / 24.0)
}

/// `|f''|^(p/(p-1))` phi-convex.
pub fn bound_phi_holder(m: MeanPair, iv: &PathInterval, p: f64) -> Result<f64> {
    check_magnitudes(&m)?;
    let r = check_holder_p(p)?;
    let mean = (0.5 * (m.alpha.powf(r) + m.beta.powf(r))).powf(1.0 / r);
    Ok(h2(iv) / 8.0 * holder_constant(p)? * mean)
}

/// `|f''|` log-phi-convex: `(h^2/2) int_0^1 (t - t^2) alpha^(1-t) beta^t dt`,
/// i.e. `(h / log(beta/alpha))^2 (A - L)`.
pub fn bound_log_phi(m: MeanPair, iv: &PathInterval) -> Result<f64> {
    Ok(0.5 * h2(iv) * kernel_log(m)?)
}

/// `|f''|^(p/(p-1))` log-phi-convex, with the logarithmic mean
/// `L(alpha^r, beta^r)^(1/r)`, `r = p/(p-1)`.
pub fn bound_log_phi_holder(m: MeanPair, iv: &PathInterval, p: f64) -> Result<f64> {
    let r = check_holder_p(p)?;
    let l = log_mean(MeanPair::new(m.alpha.powf(r), m.beta.powf(r)))?;
    Ok(h2(iv) / 8.0 * holder_constant(p)? * l.powf(1.0 / r))
}

/// `|f''|` quasi-phi-convex: `h^2 max(alpha, beta) / 12`.
pub fn bound_quasi_q1(m: MeanPair, iv: &PathInterval) -> Result<f64> {
    check_magnitudes(&m)?;
    Ok(h2(iv) * m.alpha.max(m.beta) / 12.0)
}

/// `|f''|^(p/(p-1))` quasi-phi-convex.
pub fn bound_quasi_holder(m: MeanPair, iv: &PathInterval, p: f64) -> Result<f64> {
    check_magnitudes(&m)?;
    check_holder_p(p)?;
    Ok(h2(iv) / 8.0 * holder_constant(p)? * m.alpha.max(m.beta))
}

/// `|f''|^q` quasi-phi-convex: `h^2 (max(alpha^q, beta^q))^(1/q) / 12`.
pub fn bound_quasi_powermean(m: MeanPair, iv: &PathInterval, q: f64) -> Result<f64> {
    check_magnitudes(&m)?;
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("power-mean exponent q must be finite and >= 1, got {q}")));
    }
    Ok(h2(iv) * m.alpha.max(m.beta) / 12.0)
}

/// `|f''|^q` s-convex on the classical interval:
/// `((b-a)^2 / (2 * 6^(1/p))) ((alpha^q + beta^q) / ((s+2)(s+3)))^(1/q)`
/// with `1/p + 1/q = 1`.
pub fn bound_sconvex(m: MeanPair, iv: &PathInterval, s: f64, q: f64) -> Result<f64> {
    check_magnitudes(&m)?;
    if !iv.is_classical() {
        return Err(Error::domain("the s-convex bound is stated for the classical interval only (eta = 1)"));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1], got {s}")));
    }
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::domain(format!("q must be finite and >= 1, got {q}")));
    }
    let inv_p = 1.0 - 1.0 / q;
    let len = iv.length();
    let inner = (m.alpha.powf(q) + m.beta.powf(q)) / ((s + 2.0) * (s + 3.0));
    Ok(len * len / (2.0 * 6f64.powf(inv_p)) * inner.powf(1.0 / q))
}

/// The four Hermite-Hadamard sandwich terms on the contracted interval,
/// closed by the classical endpoint mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    /// `f(a + h/2)`
    pub midpoint_value: f64,
    /// `(1/h) int_a^c f`
    pub average: f64,
    /// `(f(a) + f(c)) / 2`
    pub endpoint_mean: f64,
    /// `(f(a) + f(b)) / 2`
    pub outer_mean: f64,
    /// Consecutive differences, each expected to be non-negative.
    pub gaps: [f64; 3],
}

impl Sandwich {
    /// Whether every consecutive gap is at least `-slack`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.gaps.iter().all(|g| *g >= -slack)
    }
}

pub fn verify_sandwich(f: &Expr, iv: &PathInterval, tol: f64) -> Result<Sandwich> {
    let d = defect(f, iv, tol)?;
    let midpoint_value = f.eval(iv.a + 0.5 * iv.width())?;
    let outer_mean = 0.5 * (f.eval(iv.a)? + f.eval(iv.b)?);
    Ok(Sandwich {
        midpoint_value,
        average: d.average,
        endpoint_mean: d.endpoint_mean,
        outer_mean,
        gaps: [d.average - midpoint_value, d.endpoint_mean - d.average, outer_mean - d.endpoint_mean],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    PhiQ1,
    PhiHolder,
    LogPhi,
    LogPhiHolder,
    QuasiQ1,
    QuasiHolder,
    QuasiPowermean,
    Sconvex,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::PhiQ1,
        TheoremId::PhiHolder,
        TheoremId::LogPhi,
        TheoremId::LogPhiHolder,
        TheoremId::QuasiQ1,
        TheoremId::QuasiHolder,
        TheoremId::QuasiPowermean,
        TheoremId::Sconvex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::PhiQ1 => "phi_q1",
            TheoremId::PhiHolder => "phi_holder",
            TheoremId::LogPhi => "log_phi",
            TheoremId::LogPhiHolder => "log_phi_holder",
            TheoremId::QuasiQ1 => "quasi_q1",
            TheoremId::QuasiHolder => "quasi_holder",
            TheoremId::QuasiPowermean => "quasi_powermean",
            TheoremId::Sconvex => "sconvex",
        }
    }

    pub fn from_name(name: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|id| id.as_str() == name)
    }

    /// Hypothesis class and the power of `|f''|` it is imposed on.
    fn hypothesis(self, params: &BoundParams) -> (ConvexityClass, HypothesisPower) {
        use HypothesisPower::*;
        match self {
            TheoremId::PhiQ1 => (ConvexityClass::PhiConvex, One),
            TheoremId::PhiHolder => (ConvexityClass::PhiConvex, Conjugate),
            TheoremId::LogPhi => (ConvexityClass::LogPhiConvex, One),
            TheoremId::LogPhiHolder => (ConvexityClass::LogPhiConvex, Conjugate),
            TheoremId::QuasiQ1 => (ConvexityClass::QuasiPhiConvex, One),
            TheoremId::QuasiHolder => (ConvexityClass::QuasiPhiConvex, Conjugate),
            TheoremId::QuasiPowermean => (ConvexityClass::QuasiPhiConvex, Q),
            TheoremId::Sconvex => (ConvexityClass::SConvex { s: params.s }, Q),
        }
    }

    /// Evaluates this theorem's right-hand side.
    pub fn bound(self, m: MeanPair, iv: &PathInterval, params: &BoundParams) -> Result<f64> {
        match self {
            TheoremId::PhiQ1 => bound_phi_q1(m, iv),
            TheoremId::PhiHolder => bound_phi_holder(m, iv, params.p),
            TheoremId::LogPhi => bound_log_phi(m, iv),
            TheoremId::LogPhiHolder => bound_log_phi_holder(m, iv, params.p),
            TheoremId::QuasiQ1 => bound_quasi_q1(m, iv),
            TheoremId::QuasiHolder => bound_quasi_holder(m, iv, params.p),
            TheoremId::QuasiPowermean => bound_quasi_powermean(m, iv, params.q),
            TheoremId::Sconvex => bound_sconvex(m, iv, params.s, params.q),
        }
    }

    fn applies_to(self, iv: &PathInterval) -> bool {
        self != TheoremId::Sconvex || iv.is_classical()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HypothesisPower {
    One,
    /// `p / (p - 1)`
    Conjugate,
    Q,
}

impl HypothesisPower {
    fn exponent(self, params: &BoundParams) -> f64 {
        match self {
            HypothesisPower::One => 1.0,
            HypothesisPower::Conjugate => params.p / (params.p - 1.0),
            HypothesisPower::Q => params.q,
        }
    }

    fn describe(self) -> &'static str {
        match self {
            HypothesisPower::One => "|f''|",
            HypothesisPower::Conjugate => "|f''|^(p/(p-1))",
            HypothesisPower::Q => "|f''|^q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub p: f64,
    pub q: f64,
    pub s: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { p: 2.0, q: 1.0, s: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportConfig {
    pub sampling: SampleConfig,
    pub tol: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { sampling: SampleConfig::default(), tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Violated,
    HypothesisFalsified,
    HypothesisUnchecked,
    EvaluationError,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub hypothesis: String,
    pub hypothesis_verdict: Option<Verdict>,
    pub bound: Option<f64>,
    /// `|average - endpoint_mean|`
    pub defect: Option<f64>,
    pub margin: Option<f64>,
    pub status: Status,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

const QUASI_Q1_NOTE: &str =
    "constant 1/12 with max(|f''(a)|, |f''(b)|); the variant with 1/24 is violated by f = x^2, and the first-derivative form (b-a)/4 max(|f'(a)|, |f'(b)|) is not a second-derivative bound";

/// Runs every applicable bound for `f` on `iv`.
///
/// Hypotheses are sampled on `[a, b]` for the power of `|f''|` each bound
/// assumes. Failures are recorded in the affected reports; the batch itself
/// never aborts. Reports come back in [`TheoremId`] order; the s-convex bound
/// is only included when `eta = 1`.
pub fn report_all(f: &Expr, iv: &PathInterval, params: &BoundParams, cfg: &ReportConfig) -> Vec<BoundReport> {
    let defect = defect(f, iv, cfg.tol);
    let magnitudes = endpoint_magnitudes(f, iv);
    let g = |x: f64| Ok(eval_jet2(f, x)?.d2.abs());
    let path = SampleValues::evaluate(g, Geometry::Path, iv, &cfg.sampling);
    let chord = iv.is_classical().then(|| SampleValues::evaluate(g, Geometry::Chord, iv, &cfg.sampling));

    TheoremId::ALL
        .into_iter()
        .filter(|id| id.applies_to(iv))
        .map(|id| {
            let (class, power) = id.hypothesis(params);
            let exponent = power.exponent(params);
            let samples = match class.geometry() {
                Geometry::Path => &path,
                Geometry::Chord => chord.as_ref().expect("chord samples exist on the classical interval"),
            };
            let verdict = if cfg.sampling.samples == 0 {
                Err(Error::invalid("sample count must be at least 1"))
            } else {
                class.validate(iv).and_then(|_| {
                    if exponent == 1.0 {
                        samples.verdict(class)
                    } else if exponent.is_finite() && exponent > 0.0 {
                        samples.verdict_with(class, |g| g.powf(exponent))
                    } else {
                        Err(Error::invalid(format!("hypothesis exponent {exponent} is not usable")))
                    }
                })
            };
            let hypothesis = format!("{} {} on [{}, {}]", power.describe(), class.name(), iv.a, iv.b);
            let bound = magnitudes.clone().and_then(|m| id.bound(m, iv, params));
            let mut notes = Vec::new();
            if id == TheoremId::QuasiQ1 {
                notes.push(QUASI_Q1_NOTE.to_string());
            }
            let (hypothesis_verdict, verdict_err) = match verdict {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e)),
            };
            if let Some(e) = &verdict_err {
                notes.push(format!("hypothesis could not be checked: {e}"));
            }
            let mut report = BoundReport {
                theorem_id: id,
                hypothesis,
                hypothesis_verdict,
                bound: bound.as_ref().ok().copied(),
                defect: defect.as_ref().ok().map(|d| d.value),
                margin: None,
                status: Status::EvaluationError,
                notes,
                error: None,
            };
            match (&defect, &bound) {
                (Err(e), _) | (_, Err(e)) => report.error = Some(e.to_string()),
                (Ok(d), Ok(b)) => {
                    let margin = b - d.value;
                    report.margin = Some(margin);
                    report.status = match hypothesis_verdict {
                        None => Status::HypothesisUnchecked,
                        Some(Verdict::Falsified(_)) => Status::HypothesisFalsified,
                        Some(Verdict::NotFalsified { .. }) if margin < -VIOLATION_SLACK => Status::Violated,
                        Some(Verdict::NotFalsified { .. }) => Status::Holds,
                    };
                }
            }
            report
        })
        .collect()
}

/// `int_0^1 (t - t^2)^p dt`, re-exported next to the constant it feeds.
pub fn holder_kernel(p: f64) -> Result<f64> {
    beta_tt(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::E;

    fn unit() -> PathInterval {
        PathInterval::classical(0.0, 1.0).unwrap()
    }

    fn e(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn defect_examples() {
        let d = defect(&e("x^2"), &unit(), 1e-12).unwrap();
        assert!((d.average - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(d.endpoint_mean, 0.5);
        assert!((d.value - 1.0 / 6.0).abs() < 1e-12);
        for iv in [PathInterval::new(-2.0, 5.0, 0.3).unwrap(), unit()] {
            assert!(defect(&e("3*x+1"), &iv, 1e-12).unwrap().value < 1e-12);
        }
        let d = defect(&e("x^3"), &unit(), 1e-12).unwrap();
        assert!((d.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn identity_examples() {
        assert!(identity_residual(&e("x^3"), &unit(), 1e-12).unwrap() <= 1e-10);
        assert!(identity_residual(&e("3*x^2 - x + 2"), &PathInterval::new(-1.0, 2.0, 0.5).unwrap(), 1e-13).unwrap() <= 1e-12);
        let iv = PathInterval::new(0.0, PI / 2.0, 0.5).unwrap();
        assert!(identity_residual(&e("sin(x)"), &iv, 1e-10).unwrap() <= 1e-9);
        // the sign: lhs = endpoint mean - average, positive for x^2
        let c = identity_check(&e("x^2"), &unit(), 1e-12).unwrap();
        assert!((c.lhs - 1.0 / 6.0).abs() < 1e-12 && (c.rhs - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn phi_q1_examples() {
        assert!((bound_phi_q1(MeanPair::new(2.0, 2.0), &unit()).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(bound_phi_q1(MeanPair::new(0.0, 0.0), &unit()).unwrap(), 0.0);
        let m = endpoint_magnitudes(&e("x^4"), &unit()).unwrap();
        assert_eq!(m, MeanPair::new(0.0, 12.0));
        assert_eq!(bound_phi_q1(m, &unit()).unwrap(), 0.5);
        let d = defect(&e("x^4"), &unit(), 1e-12).unwrap();
        assert!((d.value - 0.3).abs() < 1e-12);
    }

    #[test]
    fn phi_holder_examples() {
        let m = MeanPair::new(2.0, 2.0);
        let want = (8.0f64 / 15.0).sqrt() / 4.0;
        assert!((bound_phi_holder(m, &unit(), 2.0).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.18257).abs() < 1e-5);
        assert_eq!(bound_phi_holder(MeanPair::new(0.0, 0.0), &unit(), 3.0).unwrap(), 0.0);
        assert!(matches!(bound_phi_holder(m, &unit(), 1.0), Err(Error::Domain(_))));
        // holder constant against the quadrature value of the kernel integral
        for p in [2.0, 4.0, 8.0] {
            let q = integrate(|t: f64| Ok((t - t * t).powf(p)), 0.0, 1.0, 1e-14).unwrap().value;
            let sharp = 4.0 * q.powf(1.0 / p);
            assert!((holder_constant(p).unwrap() - sharp).abs() < 1e-10, "p = {p}");
        }
        // bound for x^2 increases with p towards (1/8) * 2 = 1/4
        let b: Vec<f64> = [2.0, 4.0, 8.0].iter().map(|&p| bound_phi_holder(m, &unit(), p).unwrap()).collect();
        assert!(b[0] < b[1] && b[1] < b[2] && b[2] < 0.25);
    }

    #[test]
    fn log_phi_examples() {
        let m = MeanPair::new(1.0, E);
        let b = bound_log_phi(m, &unit()).unwrap();
        assert!((b - (3.0 - E) / 2.0).abs() < 1e-14);
        let d = defect(&e("exp(x)"), &unit(), 1e-12).unwrap();
        assert!((d.value - b).abs() < 1e-10);
        // constant |f''| = 2c: bound equals the defect of c x^2
        let c = 1.75;
        let iv = PathInterval::new(-1.0, 2.0, 0.5).unwrap();
        let b = bound_log_phi(MeanPair::new(2.0 * c, 2.0 * c), &iv).unwrap();
        let want = 2.0 * c / 12.0 * iv.width() * iv.width();
        assert!((b - want).abs() < 1e-14);
        assert!(matches!(bound_log_phi(MeanPair::new(0.0, 1.0), &unit()), Err(Error::Domain(_))));
        // f'' = e^{2x}
        let f = e("exp(2*x)/4");
        let m = endpoint_magnitudes(&f, &unit()).unwrap();
        assert!(bound_log_phi(m, &unit()).unwrap() >= defect(&f, &unit(), 1e-12).unwrap().value - 1e-12);
    }

    #[test]
    fn log_phi_holder_examples() {
        let b = bound_log_phi_holder(MeanPair::new(1.0, E), &unit(), 2.0).unwrap();
        let want = (8.0f64 / 15.0).sqrt() / 8.0 * ((E * E - 1.0) / 2.0).sqrt();
        assert!((b - want).abs() < 1e-14);
        assert!((b - 0.163_159_636_794_391).abs() < 1e-14);
        assert!(b >= (3.0 - E) / 2.0);
        let m = MeanPair::new(3.0, 3.0);
        for p in [1.5, 2.0, 3.0] {
            let lhs = bound_log_phi_holder(m, &unit(), p).unwrap();
            let rhs = bound_phi_holder(m, &unit(), p).unwrap();
            assert!((lhs - rhs).abs() < 1e-14);
        }
        assert!(bound_log_phi_holder(m, &unit(), 0.5).is_err());
        assert!(bound_log_phi_holder(MeanPair::new(0.0, 1.0), &unit(), 2.0).is_err());
    }

    #[test]
    fn quasi_examples() {
        let m = MeanPair::new(2.0, 2.0);
        let d = defect(&e("x^2"), &unit(), 1e-12).unwrap().value;
        assert!((bound_quasi_q1(m, &unit()).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        // the 1/24 constant would give 1/12 < 1/6
        assert!(2.0 / 24.0 < d - 1e-3);
        assert_eq!(bound_quasi_q1(MeanPair::new(0.0, 0.0), &unit()).unwrap(), 0.0);
        assert_eq!(bound_quasi_q1(MeanPair::new(0.0, 6.0), &unit()).unwrap(), 0.5);

        let qh = bound_quasi_holder(m, &unit(), 2.0).unwrap();
        assert!((qh - (8.0f64 / 15.0).sqrt() / 4.0).abs() < 1e-14);
        assert_eq!(bound_quasi_holder(MeanPair::new(0.0, 0.0), &unit(), 2.0).unwrap(), 0.0);
        let uneven = MeanPair::new(1.0, 5.0);
        for p in [1.5, 2.0, 4.0] {
            assert!(bound_quasi_holder(uneven, &unit(), p).unwrap() >= bound_phi_holder(uneven, &unit(), p).unwrap());
        }

        assert!((bound_quasi_powermean(m, &unit(), 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        for q in [1.0, 2.0, 7.5] {
            assert_eq!(bound_quasi_powermean(uneven, &unit(), q).unwrap(), bound_quasi_powermean(uneven, &unit(), 1.0).unwrap());
        }
        assert_eq!(bound_quasi_powermean(MeanPair::new(0.0, 12.0), &unit(), 2.0).unwrap(), 1.0);
        assert!(bound_quasi_powermean(m, &unit(), 0.5).is_err());
    }

    #[test]
    fn sconvex_examples() {
        let m = MeanPair::new(2.0, 2.0);
        assert!((bound_sconvex(m, &unit(), 1.0, 1.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let iv = PathInterval::classical(-1.0, 2.0).unwrap();
        for q in [1.0, 2.0, 5.0] {
            let m = MeanPair::new(0.7, 3.1);
            let want = 9.0 / 12.0 * ((m.alpha.powf(q) + m.beta.powf(q)) / 2.0).powf(1.0 / q);
            assert!((bound_sconvex(m, &iv, 1.0, q).unwrap() - want).abs() < 1e-12);
        }
        let contracted = PathInterval::new(0.0, 1.0, 0.5).unwrap();
        assert!(bound_sconvex(m, &contracted, 1.0, 1.0).is_err());
        assert!(bound_sconvex(m, &unit(), 0.0, 1.0).is_err());
        assert!(bound_sconvex(m, &unit(), 1.0, 0.9).is_err());
        let b = bound_sconvex(MeanPair::new(0.0, 12.0), &unit(), 0.5, 2.0).unwrap();
        assert!(b.is_finite() && b >= 0.3);
    }

    #[test]
    fn sandwich_examples() {
        let s = verify_sandwich(&e("x^2"), &unit(), 1e-12).unwrap();
        assert_eq!(s.midpoint_value, 0.25);
        assert!((s.average - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!((s.endpoint_mean, s.outer_mean), (0.5, 0.5));
        assert!(s.is_monotone(1e-12));

        let s = verify_sandwich(&e("2*x - 1"), &PathInterval::new(0.0, 4.0, 0.5).unwrap(), 1e-12).unwrap();
        // on the contracted path the affine terms agree; the outer mean uses b
        assert!((s.average - s.midpoint_value).abs() < 1e-12);
        assert!((s.endpoint_mean - s.average).abs() < 1e-12);

        let s = verify_sandwich(&e("exp(x)"), &PathInterval::new(0.0, 2.0, 0.5).unwrap(), 1e-12).unwrap();
        assert!(s.is_monotone(1e-10));
        assert!((s.average - (E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn report_for_square() {
        let reports = report_all(&e("x^2"), &unit(), &BoundParams::default(), &ReportConfig::default());
        assert_eq!(reports.len(), 8);
        let ids: Vec<_> = reports.iter().map(|r| r.theorem_id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        for r in &reports {
            assert_eq!(r.status, Status::Holds, "{:?}", r);
        }
        let by = |id| reports.iter().find(|r| r.theorem_id == id).unwrap();
        for id in [TheoremId::PhiQ1, TheoremId::QuasiPowermean, TheoremId::QuasiQ1, TheoremId::LogPhi, TheoremId::Sconvex] {
            assert!(by(id).margin.unwrap().abs() < 1e-12, "{id:?}");
        }
        assert!(!by(TheoremId::QuasiQ1).notes.is_empty());
    }

    #[test]
    fn report_for_sine() {
        let iv = PathInterval::classical(0.0, PI).unwrap();
        let reports = report_all(&e("sin(x)"), &iv, &BoundParams::default(), &ReportConfig::default());
        for r in &reports {
            match r.theorem_id {
                TheoremId::PhiQ1 | TheoremId::PhiHolder | TheoremId::Sconvex => {
                    assert_eq!(r.status, Status::HypothesisFalsified, "{r:?}")
                }
                // |sin| is concave, so not quasi-convex either; the bound is still reported
                TheoremId::QuasiQ1 | TheoremId::QuasiHolder | TheoremId::QuasiPowermean => {
                    assert_eq!(r.status, Status::HypothesisFalsified, "{r:?}");
                    assert!(r.bound.is_some());
                }
                // |sin| vanishes at both endpoints
                TheoremId::LogPhi | TheoremId::LogPhiHolder => assert_eq!(r.status, Status::EvaluationError),
            }
        }
    }

    #[test]
    fn report_isolates_errors() {
        let reports = report_all(&e("x*log(x)"), &unit(), &BoundParams::default(), &ReportConfig::default());
        assert!(reports.iter().all(|r| r.status == Status::EvaluationError && r.error.is_some()));
        // a bound-specific failure leaves the other reports intact
        let reports = report_all(&e("x^3"), &unit(), &BoundParams::default(), &ReportConfig::default());
        let log = reports.iter().find(|r| r.theorem_id == TheoremId::LogPhi).unwrap();
        assert_eq!(log.status, Status::EvaluationError);
        let q1 = reports.iter().find(|r| r.theorem_id == TheoremId::QuasiQ1).unwrap();
        assert_eq!(q1.status, Status::Holds);
    }
}
