//! Second-order forward-mode differentiation over [`Expr`].

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{BinaryOp, Expr, Func, UnaryOp};

/// Value, first and second derivative at a point, propagated by truncated
/// Taylor arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Jet2 { v, d1, d2 }
    }

    /// The independent variable at `x`.
    pub const fn seed(x: f64) -> Self {
        Jet2::new(x, 1.0, 0.0)
    }

    pub const fn constant(c: f64) -> Self {
        Jet2::new(c, 0.0, 0.0)
    }

    /// Applies a scalar function with derivatives `f0, f1, f2` at `self.v`.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2::new(f0, f1 * self.d1, f2 * self.d1 * self.d1 + f1 * self.d2)
    }

    pub fn sin(self) -> Self {
        let s = self.v.sin();
        self.chain(s, self.v.cos(), -s)
    }

    pub fn cos(self) -> Self {
        let c = self.v.cos();
        self.chain(c, -self.v.sin(), -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::domain(format!("log of non-positive value {}", self.v)));
        }
        let r = 1.0 / self.v;
        Ok(self.chain(self.v.ln(), r, -r * r))
    }

    pub fn sqrt(self) -> Result<Self> {
        if self.v < 0.0 {
            return Err(Error::domain(format!("sqrt of negative value {}", self.v)));
        }
        let s = self.v.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * self.v)))
    }

    /// `|u|` is smooth away from zero; at zero the one-sided derivatives
    /// disagree and the caller gets [`Error::NonDifferentiable`].
    pub fn abs(self, at: f64) -> Result<Self> {
        if self.v == 0.0 {
            return Err(Error::NonDifferentiable { x: at, reason: "abs of zero".into() });
        }
        Ok(if self.v > 0.0 { self } else { -self })
    }

    /// Integer power by repeated multiplication, matching [`Expr::eval`].
    pub fn powi_repeated(self, n: i32) -> Result<Self> {
        if n == 0 {
            return Ok(Jet2::constant(1.0));
        }
        let mut acc = self;
        for _ in 1..n.unsigned_abs() {
            acc = acc * self;
        }
        if n < 0 {
            if acc.v == 0.0 {
                return Err(Error::domain("zero raised to a negative power"));
            }
            acc = Jet2::constant(1.0) / acc;
        }
        Ok(acc)
    }

    /// `u^c` for a constant real exponent; requires `u > 0`.
    pub fn powf(self, c: f64) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::domain(format!(
                "power {c} of non-positive base {} is not differentiable in the reals",
                self.v
            )));
        }
        let p = self.v.powf(c);
        Ok(self.chain(p, c * p / self.v, c * (c - 1.0) * p / (self.v * self.v)))
    }

    /// `u^w` for a non-constant exponent, as `exp(w log u)`.
    pub fn pow(self, w: Jet2) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::domain(format!(
                "variable exponent requires a positive base, got {}",
                self.v
            )));
        }
        let mut j = (w * self.ln()?).exp();
        j.v = self.v.powf(w.v);
        Ok(j)
    }

    fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, w: Jet2) -> Jet2 {
        Jet2::new(self.v + w.v, self.d1 + w.d1, self.d2 + w.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, w: Jet2) -> Jet2 {
        Jet2::new(self.v - w.v, self.d1 - w.d1, self.d2 - w.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, w: Jet2) -> Jet2 {
        Jet2::new(
            self.v * w.v,
            self.d1 * w.v + self.v * w.d1,
            self.d2 * w.v + 2.0 * self.d1 * w.d1 + self.v * w.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, w: Jet2) -> Jet2 {
        let v = self.v / w.v;
        let d1 = (self.d1 - v * w.d1) / w.v;
        let d2 = (self.d2 - 2.0 * d1 * w.d1 - v * w.d2) / w.v;
        Jet2::new(v, d1, d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

/// `(f(x), f'(x), f''(x))` for the expression `ast`.
pub fn eval_jet2(ast: &Expr, x: f64) -> Result<Jet2> {
    jet(ast, x)
}

fn jet(ast: &Expr, x: f64) -> Result<Jet2> {
    let j = match ast {
        Expr::Constant(c) => Jet2::constant(*c),
        Expr::Variable => Jet2::seed(x),
        Expr::Unary(UnaryOp::Neg, a) => -jet(a, x)?,
        Expr::Binary(op, l, r) => {
            let lj = jet(l, x)?;
            match op {
                BinaryOp::Add => lj + jet(r, x)?,
                BinaryOp::Sub => lj - jet(r, x)?,
                BinaryOp::Mul => lj * jet(r, x)?,
                BinaryOp::Div => {
                    let rj = jet(r, x)?;
                    if rj.v == 0.0 {
                        return Err(Error::domain("division by zero"));
                    }
                    lj / rj
                }
                BinaryOp::Pow => match (ast.integer_exponent(), r.literal()) {
                    (Some(n), _) => lj.powi_repeated(n)?,
                    (None, Some(c)) => {
                        if lj.v == 0.0 && c > 0.0 {
                            return Err(Error::NonDifferentiable {
                                x,
                                reason: format!("non-integer power {c} of zero"),
                            });
                        }
                        lj.powf(c)?
                    }
                    (None, _) => lj.pow(jet(r, x)?)?,
                },
            }
        }
        Expr::Call(func, a) => {
            let aj = jet(a, x)?;
            match func {
                Func::Sin => aj.sin(),
                Func::Cos => aj.cos(),
                Func::Exp => aj.exp(),
                Func::Log => aj.ln()?,
                Func::Sqrt => {
                    if aj.v == 0.0 {
                        return Err(Error::NonDifferentiable { x, reason: "sqrt of zero".into() });
                    }
                    aj.sqrt()?
                }
                Func::Abs => aj.abs(x)?,
            }
        }
    };
    if j.is_finite() {
        Ok(j)
    } else if !j.v.is_finite() {
        Err(Error::domain(format!("non-finite value in `{ast}` at x = {x}")))
    } else {
        Err(Error::NonDifferentiable { x, reason: format!("non-finite derivative of `{ast}`") })
    }
}
