//! LL(1) recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! ```

use super::{BinaryOp, Expr, Func};
use crate::error::{Error, Result};

/// Parses `source` into an expression tree.
///
/// Errors carry the byte offset of the offending token; an incomplete input
/// reports the offset one past its last byte.
pub fn parse(source: &str) -> Result<Expr> {
    let mut p = Parser { src: source.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("expected expression, found end of input"));
    }
    let expr = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        let found = p.describe_current();
        return Err(p.error(format!("expected operator or end of input, found {found}")));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn describe_current(&self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(_) => {
                // Offsets are byte offsets; show the full UTF-8 character.
                let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("?");
                format!("`{}`", rest.chars().next().unwrap_or('?'))
            }
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinaryOp::Add
            } else if self.eat(b'-') {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(b'*') {
                BinaryOp::Mul
            } else if self.eat(b'/') {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            Ok(Expr::binary(BinaryOp::Pow, base, exp))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected expression, found end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    let found = self.describe_current();
                    return Err(self.error(format!("expected `)`, found {found}")));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => {
                let found = self.describe_current();
                Err(self.error(format!("expected expression, found {found}")))
            }
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.peek() == Some(b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("expected digits in number literal"));
        }
        // An exponent marker only counts when digits follow; otherwise `e` is
        // left for the caller (and rejected, since there is no implicit product).
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map(Expr::Constant)
            .map_err(|_| Error::Syntax { offset: start, message: format!("invalid number `{text}`") })
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'(') {
            let func = Func::from_name(name)
                .ok_or_else(|| Error::UnknownFunction { name: name.to_string(), offset: start })?;
            self.pos += 1;
            let arg = self.expr()?;
            if !self.eat(b')') {
                let found = self.describe_current();
                return Err(self.error(format!("expected `)`, found {found}")));
            }
            return Ok(Expr::call(func, arg));
        }
        self.pos = save;
        match name {
            "x" => Ok(Expr::Variable),
            "pi" => Ok(Expr::Constant(std::f64::consts::PI)),
            "e" => Ok(Expr::Constant(std::f64::consts::E)),
            _ => Err(Error::Syntax {
                offset: start,
                message: format!("unknown identifier `{name}`; expected `x`, `pi`, `e` or a function call"),
            }),
        }
    }
}
