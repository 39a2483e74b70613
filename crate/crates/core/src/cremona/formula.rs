//! Rational expressions in the affine coordinates `x, y`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    X,
    Y,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    /// Value at `(x, y)`, or `None` at a pole.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        Some(match self {
            Expr::Num(q) => q.clone(),
            Expr::X => x.clone(),
            Expr::Y => y.clone(),
            Expr::Neg(a) => -a.eval(x, y)?,
            Expr::Add(a, b) => a.eval(x, y)? + b.eval(x, y)?,
            Expr::Sub(a, b) => a.eval(x, y)? - b.eval(x, y)?,
            Expr::Mul(a, b) => a.eval(x, y)? * b.eval(x, y)?,
            Expr::Div(a, b) => {
                let d = b.eval(x, y)?;
                if d.is_zero() {
                    return None;
                }
                a.eval(x, y)? / d
            }
            Expr::Pow(a, n) => {
                let v = a.eval(x, y)?;
                if *n < 0 && v.is_zero() {
                    return None;
                }
                num_traits::pow::Pow::pow(v, *n)
            }
        })
    }

    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip();
        if p.pos < p.s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{}", crate::scalar::rational::fmt_rational(q)),
            Expr::X => f.write_str("x"),
            Expr::Y => f.write_str("y"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            e = if c == b'+' { Expr::Add(e.into(), t.into()) } else { Expr::Sub(e.into(), t.into()) };
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let t = self.unary()?;
            e = if c == b'*' { Expr::Mul(e.into(), t.into()) } else { Expr::Div(e.into(), t.into()) };
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = self.peek() == Some(b'-');
            if neg {
                self.pos += 1;
            }
            let n = self.integer()?;
            let n: i32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(Expr::Pow(base.into(), if neg { -n } else { n }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                Ok(Expr::X)
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(Expr::Y)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Num(Rational::from_integer(self.integer()?))),
            _ => Err(self.err("expected x, y, a number or '('")),
        }
    }
}

/// A rational self-map of the affine plane, `(x, y) -> (fx, fy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    pub fx: Expr,
    pub fy: Expr,
}

impl RationalMap {
    pub fn identity() -> Self {
        RationalMap { fx: Expr::X, fy: Expr::Y }
    }

    /// Parses `"<expr>, <expr>"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut depth = 0i32;
        let split = s.char_indices().find(|&(_, c)| {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            c == ',' && depth == 0
        });
        let Some((i, _)) = split else {
            return Err(Error::Parse { pos: s.len(), msg: "expected two components separated by ','".into() });
        };
        let shift = |e: Error, off: usize| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + off, msg },
            e => e,
        };
        Ok(RationalMap {
            fx: Expr::parse(&s[..i]).map_err(|e| shift(e, 0))?,
            fy: Expr::parse(&s[i + 1..]).map_err(|e| shift(e, i + 1))?,
        })
    }

    pub fn eval(&self, p: &(Rational, Rational)) -> Option<(Rational, Rational)> {
        Some((self.fx.eval(&p.0, &p.1)?, self.fy.eval(&p.0, &p.1)?))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.fx, self.fy)
    }
}
