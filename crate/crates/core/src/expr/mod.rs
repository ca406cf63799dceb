//! Single-variable real function expressions.
//!
//! Expressions are parsed by [`parse`] into an immutable [`Expr`] tree and
//! evaluated in IEEE double precision by [`Expr::eval`]. The grammar and the
//! floating-point evaluation order are documented in `docs/grammar.md`.

mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::parse;

/// Integer exponents up to this magnitude are evaluated by repeated
/// multiplication instead of `powf`.
pub const MAX_REPEATED_EXPONENT: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sin, Func::Cos, Func::Exp, Func::Log, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub(crate) fn apply(self, x: f64) -> Result<f64> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Exp => Ok(x.exp()),
            Func::Log if x <= 0.0 => Err(Error::domain(format!("log of non-positive value {x}"))),
            Func::Log => Ok(x.ln()),
            Func::Sqrt if x < 0.0 => Err(Error::domain(format!("sqrt of negative value {x}"))),
            Func::Sqrt => Ok(x.sqrt()),
            Func::Abs => Ok(x.abs()),
        }
    }
}

/// Parsed expression over the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    Variable,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Self {
        Expr::Constant(c)
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: Expr) -> Self {
        Expr::Call(func, Box::new(arg))
    }

    pub fn neg(arg: Expr) -> Self {
        Expr::Unary(UnaryOp::Neg, Box::new(arg))
    }

    /// For `base ^ exponent` nodes whose exponent is an integer constant of
    /// magnitude at most [`MAX_REPEATED_EXPONENT`], returns that integer.
    /// A negated literal such as the one in `x^-2` counts as a constant.
    pub fn integer_exponent(&self) -> Option<i32> {
        match self {
            Expr::Binary(BinaryOp::Pow, _, exp) => exp.literal().and_then(integer_constant),
            _ => None,
        }
    }

    /// Value of a constant or of a negated constant.
    pub fn literal(&self) -> Option<f64> {
        match self {
            Expr::Constant(c) => Some(*c),
            Expr::Unary(UnaryOp::Neg, a) => match **a {
                Expr::Constant(c) => Some(-c),
                _ => None,
            },
            _ => None,
        }
    }

    /// Evaluates the expression at `x`.
    ///
    /// Every intermediate result must be finite; log of a non-positive value,
    /// sqrt of a negative value, division by zero, `0^negative` and overflow
    /// all surface as [`Error::Domain`].
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Constant(c) => *c,
            Expr::Variable => x,
            Expr::Unary(UnaryOp::Neg, arg) => -arg.eval(x)?,
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.eval(x)?;
                match op {
                    BinaryOp::Add => l + rhs.eval(x)?,
                    BinaryOp::Sub => l - rhs.eval(x)?,
                    BinaryOp::Mul => l * rhs.eval(x)?,
                    BinaryOp::Div => {
                        let r = rhs.eval(x)?;
                        if r == 0.0 {
                            return Err(Error::domain("division by zero"));
                        }
                        l / r
                    }
                    BinaryOp::Pow => match self.integer_exponent() {
                        Some(n) => powi_repeated(l, n)?,
                        None => pow_real(l, rhs.eval(x)?)?,
                    },
                }
            }
            Expr::Call(func, arg) => func.apply(arg.eval(x)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(format!("non-finite value in `{self}` at x = {x}")))
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Variable => 1,
            Expr::Unary(_, a) | Expr::Call(_, a) => 1 + a.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

pub(crate) fn integer_constant(c: f64) -> Option<i32> {
    if c.fract() == 0.0 && c.abs() <= MAX_REPEATED_EXPONENT as f64 {
        Some(c as i32)
    } else {
        None
    }
}

/// `base^n` as `((base*base)*base)...`, left to right; negative `n` takes the
/// reciprocal of the positive power. `x^0` is 1 for every `x`.
pub(crate) fn powi_repeated(base: f64, n: i32) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let mut acc = base;
    for _ in 1..n.unsigned_abs() {
        acc *= base;
    }
    if n < 0 {
        if acc == 0.0 {
            return Err(Error::domain("zero raised to a negative power"));
        }
        acc = 1.0 / acc;
    }
    Ok(acc)
}

pub(crate) fn pow_real(base: f64, exp: f64) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(exp))
    } else if base == 0.0 {
        if exp > 0.0 {
            Ok(0.0)
        } else if exp == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::domain("zero raised to a negative power"))
        }
    } else {
        Err(Error::domain(format!(
            "negative base {base} raised to non-integer-constant exponent {exp}"
        )))
    }
}

/// Fully parenthesized form; re-parses to a structurally equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Constant(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Constant(c) => write!(f, "{c:?}"),
            Expr::Variable => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, a) => write!(f, "(-{a})"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}
