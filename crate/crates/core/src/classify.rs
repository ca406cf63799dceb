//! Sampling falsifiers for the convexity classes used as hypotheses.
//!
//! Each class is a universally quantified inequality over triples
//! `(u, v, t)` with `u, v` in `[a, b]` and `t` in `[0, 1]`. A falsifier
//! draws a seeded sample of triples (always starting with the 27 corner
//! triples `u, v in {a, (a+b)/2, b}`, `t in {0, 1/2, 1}`), evaluates the
//! target at every point, and reports the first violating triple in sample
//! order. [`Verdict::NotFalsified`] only says that no sample refuted the
//! hypothesis.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Slack allowed in every predicate, relative to `max(1, |rhs|)`.
pub const TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x4848_5f63_6572_7431;

/// Base point `a`, endpoint `b` and the real contraction `eta` in `(0, 1]`
/// that shortens the path from `a` towards `b` to `[a, a + eta (b - a)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathInterval {
    pub a: f64,
    pub b: f64,
    pub eta: f64,
}

impl PathInterval {
    pub fn new(a: f64, b: f64, eta: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("need finite a < b, got a = {a}, b = {b}")));
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::invalid(format!("eta must lie in (0, 1], got {eta}")));
        }
        let iv = PathInterval { a, b, eta };
        if !(iv.end() > a) {
            return Err(Error::invalid("contracted interval is empty in floating point"));
        }
        Ok(iv)
    }

    /// The classical interval, `eta = 1`.
    pub fn classical(a: f64, b: f64) -> Result<Self> {
        PathInterval::new(a, b, 1.0)
    }

    /// `eta = cos(phi)` for `phi` in `[0, pi/2)`.
    pub fn from_phi(a: f64, b: f64, phi: f64) -> Result<Self> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&phi) {
            return Err(Error::invalid(format!("phi must lie in [0, pi/2), got {phi}")));
        }
        PathInterval::new(a, b, phi.cos())
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// `eta (b - a)`.
    pub fn width(&self) -> f64 {
        self.eta * (self.b - self.a)
    }

    /// `a + eta (b - a)`.
    pub fn end(&self) -> f64 {
        if self.eta == 1.0 {
            self.b
        } else {
            self.a + self.width()
        }
    }

    pub fn is_classical(&self) -> bool {
        self.eta == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u = {}, v = {}, t = {}: lhs {:e} > rhs {:e} (gap {:e})",
            self.u, self.v, self.t, self.lhs, self.rhs, self.gap
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NotFalsified { samples: usize },
    Falsified(Witness),
}

impl Verdict {
    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Falsified(w) => Some(w),
            Verdict::NotFalsified { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

impl SampleConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        SampleConfig { samples, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ConvexityClass {
    /// `g(u + t eta (v - u)) <= (1 - t) g(u) + t g(v)`
    PhiConvex,
    /// `g(u + t eta (v - u)) <= g(u)^(1 - t) g(v)^t`, with `g > 0`
    LogPhiConvex,
    /// `g(u + t eta (v - u)) <= max(g(u), g(v))`
    QuasiPhiConvex,
    /// `g(t u + (1 - t) v) <= t^s g(u) + (1 - t)^s g(v)`, classical interval only
    SConvex { s: f64 },
}

/// Where a class evaluates its left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// `u + t eta (v - u)`
    Path,
    /// `t u + (1 - t) v`
    Chord,
}

impl ConvexityClass {
    pub fn name(&self) -> &'static str {
        match self {
            ConvexityClass::PhiConvex => "phi_convex",
            ConvexityClass::LogPhiConvex => "log_phi_convex",
            ConvexityClass::QuasiPhiConvex => "quasi_phi_convex",
            ConvexityClass::SConvex { .. } => "s_convex",
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            ConvexityClass::SConvex { .. } => Geometry::Chord,
            _ => Geometry::Path,
        }
    }

    pub fn validate(&self, iv: &PathInterval) -> Result<()> {
        if let ConvexityClass::SConvex { s } = *self {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::invalid(format!("s must lie in (0, 1], got {s}")));
            }
            if !iv.is_classical() {
                return Err(Error::invalid("s-convexity is only defined on the classical interval (eta = 1)"));
            }
        }
        Ok(())
    }

    /// Right-hand side of the class inequality.
    pub fn rhs(&self, gu: f64, gv: f64, t: f64) -> f64 {
        match *self {
            ConvexityClass::PhiConvex => (1.0 - t) * gu + t * gv,
            ConvexityClass::LogPhiConvex => gu.powf(1.0 - t) * gv.powf(t),
            ConvexityClass::QuasiPhiConvex => gu.max(gv),
            ConvexityClass::SConvex { s } => t.powf(s) * gu + (1.0 - t).powf(s) * gv,
        }
    }

    /// Returns `(lhs, rhs)` if the triple violates the class inequality.
    pub fn violation(&self, gu: f64, gv: f64, gx: f64, t: f64) -> Option<(f64, f64)> {
        let rhs = self.rhs(gu, gv, t);
        (gx > rhs + TOLERANCE * rhs.abs().max(1.0)).then_some((gx, rhs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triple {
    pub u: f64,
    pub v: f64,
    pub t: f64,
}

impl Triple {
    pub fn point(&self, geometry: Geometry, iv: &PathInterval) -> f64 {
        let x = match geometry {
            Geometry::Path if iv.eta == 1.0 => self.u + self.t * (self.v - self.u),
            Geometry::Path => self.u + self.t * iv.eta * (self.v - self.u),
            Geometry::Chord => self.t * self.u + (1.0 - self.t) * self.v,
        };
        x.clamp(self.u.min(self.v), self.u.max(self.v))
    }
}

/// Corner triples followed by `cfg.samples` seeded random triples.
pub fn sample_triples(iv: &PathInterval, cfg: &SampleConfig) -> Vec<Triple> {
    let mid = 0.5 * (iv.a + iv.b);
    let nodes = [iv.a, mid, iv.b];
    let mut out = Vec::with_capacity(27 + cfg.samples);
    for &u in &nodes {
        for &v in &nodes {
            for t in [0.0, 0.5, 1.0] {
                out.push(Triple { u, v, t });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let len = iv.length();
    for _ in 0..cfg.samples {
        let u = (iv.a + len * rng.random::<f64>()).min(iv.b);
        let v = (iv.a + len * rng.random::<f64>()).min(iv.b);
        let t = rng.random::<f64>();
        out.push(Triple { u, v, t });
    }
    out
}

/// Target values `(g(u), g(v), g(point))` at every sampled triple.
#[derive(Debug, Clone)]
pub struct SampleValues {
    pub geometry: Geometry,
    pub triples: Vec<Triple>,
    pub values: Vec<Result<[f64; 3]>>,
}

impl SampleValues {
    /// Evaluates `g` at all points of the sample; batches run in parallel and
    /// results stay in sample order.
    pub fn evaluate<G>(g: G, geometry: Geometry, iv: &PathInterval, cfg: &SampleConfig) -> Self
    where
        G: Fn(f64) -> Result<f64> + Sync,
    {
        let triples = sample_triples(iv, cfg);
        let values = triples
            .par_iter()
            .map(|tr| Ok([g(tr.u)?, g(tr.v)?, g(tr.point(geometry, iv))?]))
            .collect();
        SampleValues { geometry, triples, values }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Checks `class` against `transform(g)`; the first failing sample, in
    /// sample order, decides the outcome.
    pub fn verdict_with<T>(&self, class: ConvexityClass, transform: T) -> Result<Verdict>
    where
        T: Fn(f64) -> f64,
    {
        if class.geometry() != self.geometry {
            return Err(Error::invalid(format!("{} needs samples with {:?} geometry", class.name(), class.geometry())));
        }
        for (tr, vals) in self.triples.iter().zip(&self.values) {
            let [gu, gv, gx] = vals.clone()?.map(&transform);
            if class == ConvexityClass::LogPhiConvex {
                if let Some(bad) = [gu, gv, gx].into_iter().find(|g| !(*g > 0.0)) {
                    return Err(Error::domain(format!(
                        "log-convexity needs a positive target, sampled value {bad:e} near u = {}, v = {}",
                        tr.u, tr.v
                    )));
                }
            }
            if let Some((lhs, rhs)) = class.violation(gu, gv, gx, tr.t) {
                return Ok(Verdict::Falsified(Witness { u: tr.u, v: tr.v, t: tr.t, lhs, rhs, gap: lhs - rhs }));
            }
        }
        Ok(Verdict::NotFalsified { samples: self.len() })
    }

    pub fn verdict(&self, class: ConvexityClass) -> Result<Verdict> {
        self.verdict_with(class, |g| g)
    }
}

/// Runs the falsifier for `class` on `g` over `iv`.
pub fn falsify<G>(class: ConvexityClass, g: G, iv: &PathInterval, cfg: &SampleConfig) -> Result<Verdict>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    class.validate(iv)?;
    if cfg.samples == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    SampleValues::evaluate(g, class.geometry(), iv, cfg).verdict(class)
}

pub fn falsify_phi_convex<G>(g: G, iv: &PathInterval, cfg: &SampleConfig) -> Result<Verdict>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    falsify(ConvexityClass::PhiConvex, g, iv, cfg)
}

pub fn falsify_log_phi_convex<G>(g: G, iv: &PathInterval, cfg: &SampleConfig) -> Result<Verdict>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    falsify(ConvexityClass::LogPhiConvex, g, iv, cfg)
}

pub fn falsify_quasi_phi_convex<G>(g: G, iv: &PathInterval, cfg: &SampleConfig) -> Result<Verdict>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    falsify(ConvexityClass::QuasiPhiConvex, g, iv, cfg)
}

pub fn falsify_s_convex<G>(g: G, iv: &PathInterval, s: f64, cfg: &SampleConfig) -> Result<Verdict>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    falsify(ConvexityClass::SConvex { s }, g, iv, cfg)
}
