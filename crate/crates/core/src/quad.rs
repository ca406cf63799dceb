//! Adaptive Simpson quadrature with a Richardson error estimate.
//!
//! This is the reference integrator behind defects, identity residuals and
//! the closed-form cross-checks. On each panel the one-panel Simpson value
//! `S` is compared with the two-half-panel value `S2`; the panel is accepted
//! once `|S2 - S| <= 15 tol_panel` and contributes `S2 + (S2 - S)/15` with
//! error estimate `|S2 - S|/15`. Tolerance is halved on each split.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_EVALUATIONS: usize = 1_000_000;
pub const MAX_DEPTH: u32 = 60;
/// Panels narrower than this fraction of the full range are accepted as-is.
pub const WIDTH_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_est: f64,
    pub evaluations: usize,
}

struct Simpson<'a, G> {
    g: &'a G,
    evaluations: usize,
    err_est: f64,
    floor: f64,
}

impl<G> Simpson<'_, G>
where
    G: Fn(f64) -> Result<f64>,
{
    fn eval(&mut self, x: f64) -> Result<f64> {
        if self.evaluations >= MAX_EVALUATIONS {
            return Err(Error::NoConvergence { evaluations: self.evaluations, err_est: f64::INFINITY });
        }
        self.evaluations += 1;
        (self.g)(x)
    }

    #[allow(clippy::too_many_arguments)]
    fn panel(
        &mut self,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_mid: f64,
        f_hi: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let mid = 0.5 * (lo + hi);
        let lm = 0.5 * (lo + mid);
        let rm = 0.5 * (mid + hi);
        let f_lm = self.eval(lm)?;
        let f_rm = self.eval(rm)?;
        let left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
        let right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
        let halves = left + right;
        let delta = halves - whole;
        if delta.abs() <= 15.0 * tol || depth >= MAX_DEPTH || hi - lo <= self.floor {
            self.err_est += delta.abs() / 15.0;
            return Ok(halves + delta / 15.0);
        }
        let l = self.panel(lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth + 1)?;
        let r = self.panel(mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

/// Integrates `g` over `[lo, hi]` to absolute tolerance `tol`.
///
/// A zero-width range integrates to zero without evaluating `g`.
pub fn integrate<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::invalid(format!("integration range [{lo}, {hi}] is not a finite ordered interval")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if lo == hi {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evaluations: 0 });
    }
    let mut s = Simpson { g: &g, evaluations: 0, err_est: 0.0, floor: WIDTH_FLOOR * (hi - lo) };
    let f_lo = s.eval(lo)?;
    let f_mid = s.eval(0.5 * (lo + hi))?;
    let f_hi = s.eval(hi)?;
    let whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
    let value = match s.panel(lo, hi, f_lo, f_mid, f_hi, whole, tol, 0) {
        Ok(v) => v,
        Err(Error::NoConvergence { evaluations, .. }) => {
            return Err(Error::NoConvergence { evaluations, err_est: s.err_est.max(tol) });
        }
        Err(e) => return Err(e),
    };
    if s.err_est > tol {
        return Err(Error::NoConvergence { evaluations: s.evaluations, err_est: s.err_est });
    }
    Ok(QuadResult { value, err_est: s.err_est, evaluations: s.evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn reference_values() {
        let r = integrate(ok(|x| x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() <= 1e-12);
        let r = integrate(ok(|t| t - t * t), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 6.0).abs() <= 1e-12);
        let r = integrate(ok(f64::sin), 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() <= 1e-10);
        assert!(r.err_est <= 1e-10);
    }

    #[test]
    fn cubic_is_exact_on_one_panel() {
        let g = ok(|x| 2.0 * x * x * x - x * x + 3.0 * x - 1.0);
        let r = integrate(g, -1.0, 2.0, 1e-13).unwrap();
        // F(x) = x^4/2 - x^3/3 + 3x^2/2 - x
        let f = |x: f64| x.powi(4) / 2.0 - x.powi(3) / 3.0 + 1.5 * x * x - x;
        assert!((r.value - (f(2.0) - f(-1.0))).abs() <= 1e-13);
        assert_eq!(r.evaluations, 5);
    }

    #[test]
    fn errors() {
        assert!(matches!(integrate(ok(|x| x), 1.0, 0.0, 1e-8), Err(Error::InvalidInput(_))));
        assert!(matches!(integrate(ok(|x| x), 0.0, 1.0, 0.0), Err(Error::InvalidInput(_))));
        let failing = |x: f64| if x > 0.5 { Err(Error::domain("boom")) } else { Ok(x) };
        assert!(matches!(integrate(failing, 0.0, 1.0, 1e-8), Err(Error::Domain(_))));
        // 1/sqrt(x) style singularity cannot meet a tight tolerance.
        let sing = ok(|x: f64| if x == 0.0 { 1e300 } else { 1.0 / x });
        assert!(matches!(integrate(sing, 0.0, 1.0, 1e-12), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn empty_range() {
        let r = integrate(ok(|x| x), 2.0, 2.0, 1e-8).unwrap();
        assert_eq!(r, QuadResult { value: 0.0, err_est: 0.0, evaluations: 0 });
    }

    #[test]
    fn additivity() {
        let g = |x: f64| Ok((x * 1.3).exp() * (3.0 * x).cos());
        let tol = 1e-10;
        let whole = integrate(g, -1.0, 2.0, tol).unwrap().value;
        let split = integrate(g, -1.0, 0.4, tol).unwrap().value + integrate(g, 0.4, 2.0, tol).unwrap().value;
        assert!((whole - split).abs() <= 2.0 * tol);
    }
}
