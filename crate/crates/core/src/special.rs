//! Closed-form constants used by the bounds: Gamma, the `(t - t^2)^p` kernel
//! integral, arithmetic and logarithmic means, and the log-convexity kernel
//! `int_0^1 (t - t^2) alpha^(1-t) beta^t dt`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Endpoint magnitudes `|f''(a)|`, `|f''(b)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPair {
    pub alpha: f64,
    pub beta: f64,
}

impl MeanPair {
    pub fn new(alpha: f64, beta: f64) -> Self {
        MeanPair { alpha, beta }
    }

    fn require_positive(&self, what: &str) -> Result<()> {
        if self.alpha > 0.0 && self.beta > 0.0 && self.alpha.is_finite() && self.beta.is_finite() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} needs positive finite arguments, got ({:e}, {:e})",
                self.alpha, self.beta
            )))
        }
    }

    /// `log(beta / alpha)` without the rounding of the quotient.
    fn log_ratio(&self) -> f64 {
        ((self.beta - self.alpha) / self.alpha).ln_1p()
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Gamma(x)` for `x > 0`.
///
/// Relative error is below `1e-13` on `(0, 30]`. Arguments below `1/2` are
/// shifted up with `Gamma(x) = Gamma(x + 1) / x`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma is defined here only for positive x, got {x}")));
    }
    if x < 0.5 {
        return Ok(lanczos(x + 1.0) / x);
    }
    let g = lanczos(x);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(Error::domain(format!("gamma overflows at x = {x}")))
    }
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let w = z + LANCZOS_G + 0.5;
    // w^(z+1/2) e^-w split in two factors so that it stays finite up to ~171.
    let half = w.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-w).exp() * half * acc
}

/// `int_0^1 (t - t^2)^p dt = 2^(-1-2p) sqrt(pi) Gamma(p+1) / Gamma(p+3/2)`.
pub fn beta_tt(p: f64) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::domain(format!("kernel integral diverges for p = {p} <= -1")));
    }
    Ok((-1.0 - 2.0 * p).exp2() * PI.sqrt() * gamma(p + 1.0)? / gamma(p + 1.5)?)
}

pub fn arith_mean(m: MeanPair) -> Result<f64> {
    m.require_positive("arithmetic mean")?;
    Ok(0.5 * (m.alpha + m.beta))
}

/// Logarithmic mean `(beta - alpha) / (log beta - log alpha)`, with the
/// series `alpha (1 + d/2 + d^2/6)` (`d = log(beta/alpha)`) when `|d| < 1e-8`.
pub fn log_mean(m: MeanPair) -> Result<f64> {
    m.require_positive("logarithmic mean")?;
    let d = m.log_ratio();
    if d.abs() < 1e-8 {
        return Ok(m.alpha * (1.0 + d / 2.0 + d * d / 6.0));
    }
    Ok((m.beta - m.alpha) / d)
}

/// Below this `|log(beta/alpha)|` the log kernel is summed as a power series.
pub const KERNEL_SERIES_THRESHOLD: f64 = 1.0;

/// `int_0^1 (t - t^2) alpha^(1-t) beta^t dt`.
///
/// Closed form `(alpha + beta)/d^2 - 2 (beta - alpha)/d^3` with
/// `d = log(beta/alpha)`; for `|d| < 1` the series
/// `alpha sum_k d^k / (k! (k+2) (k+3))` is used instead, since the closed
/// form cancels roughly `2 log10(1/|d|)` digits.
pub fn kernel_log(m: MeanPair) -> Result<f64> {
    m.require_positive("log kernel")?;
    let d = m.log_ratio();
    if d.abs() < KERNEL_SERIES_THRESHOLD {
        let mut sum = 0.0;
        let mut pow_over_fact = 1.0; // d^k / k!
        for k in 0..40 {
            let kf = k as f64;
            let term = pow_over_fact / ((kf + 2.0) * (kf + 3.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            pow_over_fact *= d / (kf + 1.0);
        }
        return Ok(m.alpha * sum);
    }
    Ok((m.alpha + m.beta) / (d * d) - 2.0 * (m.beta - m.alpha) / (d * d * d))
}
