//! Certified two-sided brackets of `int_a^b f` for convex `f`.
//!
//! On a panel `[u, v]` of width `w`, convexity gives
//! `w f((u+v)/2) <= int_u^v f <= w (f(u) + f(v)) / 2`. Summing over a
//! partition brackets the integral; the panel with the widest gap is split
//! until the total gap drops below the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::autodiff::eval_jet2;
use crate::classify::{falsify_phi_convex, PathInterval, SampleConfig, Verdict};
use crate::error::{Error, Result};
use crate::expr::Expr;

pub const MAX_PANELS: usize = 1_000_000;
/// Deepest uniform start, i.e. at most `2^12` initial panels.
pub const MAX_INITIAL_DEPTH: u32 = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub panels: usize,
    pub hypothesis: Verdict,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    u: f64,
    v: f64,
    fu: f64,
    fm: f64,
    fv: f64,
}

impl Panel {
    fn lower(&self) -> f64 {
        (self.v - self.u) * self.fm
    }

    fn upper(&self) -> f64 {
        (self.v - self.u) * 0.5 * (self.fu + self.fv)
    }

    fn gap(&self) -> f64 {
        self.upper() - self.lower()
    }
}

/// Heap order: widest gap first, leftmost panel on ties.
#[derive(Debug, Clone, Copy)]
struct Ranked(Panel);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.gap().total_cmp(&other.0.gap()).then_with(|| other.0.u.total_cmp(&self.0.u))
    }
}

/// Greedy refinement state; exposed so callers can watch the bracket shrink.
pub struct Refinement<'a> {
    f: &'a Expr,
    heap: BinaryHeap<Ranked>,
    lo: f64,
    hi: f64,
}

impl<'a> Refinement<'a> {
    /// Uniform start with `2^depth` panels.
    pub fn new(f: &'a Expr, a: f64, b: f64, depth: u32) -> Result<Self> {
        check_range(a, b)?;
        let n = 1usize << depth.min(MAX_INITIAL_DEPTH);
        let w = (b - a) / n as f64;
        let node = |i: usize| if i == n { b } else { a + i as f64 * w };
        let mut heap = BinaryHeap::with_capacity(2 * n);
        let mut fu = f.eval(a)?;
        for i in 0..n {
            let (u, v) = (node(i), node(i + 1));
            let fv = f.eval(v)?;
            let fm = f.eval(0.5 * (u + v))?;
            heap.push(Ranked(Panel { u, v, fu, fm, fv }));
            fu = fv;
        }
        let mut r = Refinement { f, heap, lo: 0.0, hi: 0.0 };
        r.resum();
        Ok(r)
    }

    pub fn panels(&self) -> usize {
        self.heap.len()
    }

    /// Current `(lower, upper)` sums.
    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Splits the panel with the widest gap.
    pub fn step(&mut self) -> Result<()> {
        let Some(Ranked(p)) = self.heap.pop() else {
            return Ok(());
        };
        let m = 0.5 * (p.u + p.v);
        let left = Panel { u: p.u, v: m, fu: p.fu, fm: self.f.eval(0.5 * (p.u + m))?, fv: p.fm };
        let right = Panel { u: m, v: p.v, fu: p.fm, fm: self.f.eval(0.5 * (m + p.v))?, fv: p.fv };
        self.lo += left.lower() + right.lower() - p.lower();
        self.hi += left.upper() + right.upper() - p.upper();
        self.heap.push(Ranked(left));
        self.heap.push(Ranked(right));
        Ok(())
    }

    /// Recomputes both sums left to right, dropping drift from the
    /// incremental updates.
    pub fn resum(&mut self) {
        let mut panels: Vec<Panel> = self.heap.iter().map(|r| r.0).collect();
        panels.sort_by(|x, y| x.u.total_cmp(&y.u));
        self.lo = panels.iter().map(Panel::lower).sum();
        self.hi = panels.iter().map(Panel::upper).sum();
    }
}

fn check_range(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        Err(Error::invalid(format!("need finite a < b, got a = {a}, b = {b}")))
    }
}

/// Starting depth from `M = max |f''|` at `a`, the midpoint and `b`: the
/// total gap of `N` uniform panels is about `(b-a)^3 M / (8 N^2)`.
fn initial_depth(f: &Expr, a: f64, b: f64, tol: f64) -> u32 {
    let m = [a, 0.5 * (a + b), b]
        .iter()
        .filter_map(|&x| eval_jet2(f, x).ok().map(|j| j.d2.abs()))
        .fold(0.0, f64::max);
    let n = ((b - a).powi(3) * m / (8.0 * tol)).sqrt();
    if !(n > 1.0) {
        return 1;
    }
    (n.log2().ceil() as u32).clamp(1, MAX_INITIAL_DEPTH)
}

/// Brackets `int_a^b f` to width at most `tol`.
///
/// `f` must be convex on `[a, b]`: this is checked by sampling first and a
/// falsified hypothesis returns [`Error::HypothesisFalsified`] with its
/// witness. More than [`MAX_PANELS`] panels gives [`Error::PanelLimit`].
pub fn bracket_integral(f: &Expr, a: f64, b: f64, tol: f64, cfg: &SampleConfig) -> Result<Bracket> {
    check_range(a, b)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let iv = PathInterval::classical(a, b)?;
    let hypothesis = falsify_phi_convex(|x| f.eval(x), &iv, cfg)?;
    if let Verdict::Falsified(w) = hypothesis {
        return Err(Error::HypothesisFalsified(w));
    }
    let mut r = Refinement::new(f, a, b, initial_depth(f, a, b, tol))?;
    loop {
        if r.hi - r.lo <= tol {
            r.resum();
            if r.hi - r.lo <= tol {
                break;
            }
        }
        if r.panels() >= MAX_PANELS {
            return Err(Error::PanelLimit { limit: MAX_PANELS });
        }
        r.step()?;
    }
    // For affine f both sums agree up to rounding.
    let (lo, hi) = (r.lo.min(r.hi), r.lo.max(r.hi));
    Ok(Bracket { lo, hi, panels: r.panels(), hypothesis })
}
