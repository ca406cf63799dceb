#![allow(dead_code)]

use hhcert_core::expr::{parse, Expr};

pub struct Case {
    pub expr: &'static str,
    pub a: f64,
    pub b: f64,
    /// `f'' >= 0` on `[a, b]`, checked analytically.
    pub convex: bool,
}

impl Case {
    pub fn ast(&self) -> Expr {
        parse(self.expr).unwrap_or_else(|e| panic!("{}: {e}", self.expr))
    }
}

const fn case(expr: &'static str, a: f64, b: f64, convex: bool) -> Case {
    Case { expr, a, b, convex }
}

/// Fifty functions, each twice differentiable on its interval.
pub const CORPUS: [Case; 50] = [
    case("x^2", 0.0, 1.0, true),
    case("exp(x)", 0.0, 1.0, true),
    case("x^4", -1.0, 2.0, true),
    case("exp(-x)", 0.0, 3.0, true),
    case("1/x", 0.5, 3.0, true),
    case("x*log(x)", 0.5, 3.0, true),
    case("(exp(x)+exp(-x))/2", -2.0, 2.0, true),
    case("sqrt(1+x^2)", -2.0, 2.0, true),
    case("x^2.5", 0.5, 2.0, true),
    case("exp(x^2)", -1.0, 1.0, true),
    case("-log(x)", 0.2, 2.0, true),
    case("x^6-x", -1.0, 1.0, true),
    case("(x-1)^2+3", -1.0, 3.0, true),
    case("1/(1+x)", 0.0, 2.0, true),
    case("x^x", 0.5, 2.0, true),
    case("exp(2*x)-x", -1.0, 1.0, true),
    case("x^4+x^2", -2.0, 1.0, true),
    case("log(1+exp(x))", -3.0, 3.0, true),
    case("1/sqrt(x)", 0.5, 4.0, true),
    case("abs(x-5)^3", 0.0, 2.0, true),
    case("x^2*exp(x)", 0.0, 2.0, true),
    case("2^x", -1.0, 2.0, true),
    case("3*x^2-x+2", -1.0, 2.0, true),
    case("x^8/8+x", -1.5, 1.0, true),
    case("sin(x)", 0.0, 1.5707963267948966, false),
    case("cos(x)", 0.0, 2.0, false),
    case("x^3", -1.0, 1.0, false),
    case("log(x)", 1.0, 3.0, false),
    case("sqrt(x)", 0.5, 4.0, false),
    case("x^3-2*x", -2.0, 2.0, false),
    case("sin(3*x)*exp(-x)", 0.0, 2.0, false),
    case("x/(1+x^2)", -1.0, 2.0, false),
    case("exp(-x^2)", -2.0, 2.0, false),
    case("cos(x)^2", 0.0, 3.0, false),
    case("log(2+sin(x))", 0.0, 6.0, false),
    case("x^5", -1.0, 1.0, false),
    case("sin(x)+cos(2*x)", -1.0, 2.5, false),
    case("x*sin(x)", 0.0, 4.0, false),
    case("exp(sin(x))", 0.0, 3.0, false),
    case("x^0.5*log(x+1)", 0.5, 3.0, false),
    case("1/(x^2+1)", -1.0, 1.0, false),
    case("(x-2)^3*(x+1)", -1.0, 3.0, false),
    case("log(x^2+1)", -3.0, 3.0, false),
    case("sin(x)^3", 0.5, 2.0, false),
    case("x^7-3*x^4+x", -1.0, 1.2, false),
    case("exp(-x)*cos(x)", 0.0, 5.0, false),
    case("sqrt(4-x^2)", -1.5, 1.5, false),
    case("x^-3", 0.5, 2.0, true),
    case("cos(x)*cos(x)-sin(x)", -1.0, 1.0, false),
    case("x^1.5-x^2.5", 0.25, 1.0, false),
];

pub fn convex_cases() -> impl Iterator<Item = &'static Case> {
    CORPUS.iter().filter(|c| c.convex)
}

/// Monomial-basis polynomial `sum c_k x^k` as an expression string.
pub fn poly_source(coeffs: &[f64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match k {
            0 => format!("({c:?})"),
            1 => format!("({c:?})*x"),
            _ => format!("({c:?})*x^{k}"),
        })
        .collect();
    terms.join(" + ")
}
