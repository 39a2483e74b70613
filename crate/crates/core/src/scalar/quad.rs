//! Exact numbers `a + b*sqrt(m)` in a real quadratic field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, parse_rational, squarefree_decomposition, Rational};
use crate::error::{Error, Result};

/// `a + b*sqrt(m)` with `m` squarefree. Rational values always carry `m = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    m: u64,
}

/// Arithmetic operations accepted by [`quad_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
}

impl QuadScalar {
    /// Builds `a + b*sqrt(n)`, pulling square factors of `n` into `b`.
    pub fn new(a: Rational, b: Rational, n: u64) -> Self {
        if b.is_zero() || n == 0 {
            return Self::rational(a);
        }
        let (s, m) = squarefree_decomposition(n);
        let b = b * Rational::from_integer(BigInt::from(s));
        if m == 1 {
            return Self::rational(a + b);
        }
        QuadScalar { a, b, m }
    }

    pub fn rational(a: Rational) -> Self {
        QuadScalar { a, b: Rational::zero(), m: 0 }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The positive square root of `n`, exact.
    pub fn sqrt(n: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), n)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Field parameter; `0` for rational values.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.m == 0
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.a.is_integer()
    }

    /// Galois conjugate `a - b*sqrt(m)`.
    pub fn conj(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -self.b.clone(), m: self.m }
    }

    /// Field norm `a^2 - m b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.m))
    }

    /// Common field parameter of two values, if any.
    pub fn context(&self, other: &Self) -> Result<u64> {
        match (self.m, other.m) {
            (0, m) | (m, 0) => Ok(m),
            (m, n) if m == n => Ok(m),
            (m, n) => Err(Error::FieldMismatch(m, n)),
        }
    }

    fn build(a: Rational, b: Rational, m: u64) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadScalar { a, b, m }
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let m = self.context(o)?;
        Ok(Self::build(&self.a + &o.a, &self.b + &o.b, m))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let m = self.context(o)?;
        Ok(Self::build(&self.a - &o.a, &self.b - &o.b, m))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let m = self.context(o)?;
        let mq = Rational::from_integer(BigInt::from(m));
        let a = &self.a * &o.a + &self.b * &o.b * mq;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::build(a, b, m))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.context(o)?;
        if o.is_zero() {
            return Err(Error::DivByZero);
        }
        // x / y = x * conj(y) / N(y); N(y) != 0 because sqrt(m) is irrational.
        let n = o.norm();
        let p = self.try_mul(&o.conj())?;
        Ok(Self::build(p.a / &n, p.b / &n, p.m.max(self.m)))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().try_div(self)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::build(&self.a * q, &self.b * q, self.m)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.try_mul(self).expect("same field");
        }
        acc
    }

    /// Sign of the real embedding, decided with rational arithmetic only.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with m b^2.
        let a2 = &self.a * &self.a;
        let mb2 = &self.b * &self.b * Rational::from_integer(BigInt::from(self.m));
        match a2.cmp(&mb2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Exact comparison of real embeddings.
    pub fn cmp_exact(&self, o: &Self) -> Result<Ordering> {
        Ok(self.try_sub(o)?.signum())
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Floating approximation, for display and sampling only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.m as f64).sqrt()
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

/// Field arithmetic dispatcher. `Neg` ignores `y`.
pub fn quad_arith(op: QuadOp, x: &QuadScalar, y: &QuadScalar) -> Result<QuadScalar> {
    match op {
        QuadOp::Add => x.try_add(y),
        QuadOp::Sub => x.try_sub(y),
        QuadOp::Mul => x.try_mul(y),
        QuadOp::Div => x.try_div(y),
        QuadOp::Neg => Ok(-x.clone()),
    }
}

pub fn quad_compare(x: &QuadScalar, y: &QuadScalar) -> Result<Ordering> {
    x.cmp_exact(y)
}

/// Larger root of `t^2 - a t + 1`, i.e. `(a + sqrt(a^2 - 4)) / 2`.
pub fn golden_eigenvalue(a: i64) -> Result<QuadScalar> {
    if a < 3 {
        return Err(Error::NotHyperbolic(format!(
            "trace {a} gives no eigenvalue above 1"
        )));
    }
    let disc = (a as i128 * a as i128 - 4) as u64;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    Ok(QuadScalar::new(
        Rational::from_integer(BigInt::from(a)) * &half,
        half,
        disc,
    ))
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.cmp_exact(other).ok()
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&QuadScalar> for &QuadScalar {
            type Output = QuadScalar;
            /// Panics on mixed fields; use the `try_` form to handle that case.
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: QuadScalar) -> QuadScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, rhs: &QuadScalar) -> QuadScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -self.a, b: -self.b, m: self.m }
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -self.clone()
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<Rational> for QuadScalar {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        let root = format!("sqrt({})", self.m);
        let mag = self.b.abs();
        let term = if mag.is_one() {
            root
        } else {
            format!("{}*{}", fmt_rational(&mag), root)
        };
        let neg = self.b.is_negative();
        if self.a.is_zero() {
            if neg {
                write!(f, "-{term}")
            } else {
                f.write_str(&term)
            }
        } else {
            let sign = if neg { '-' } else { '+' };
            write!(f, "{} {} {}", fmt_rational(&self.a), sign, term)
        }
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    /// Accepts sums of rational terms and `[c*]sqrt(n)` terms, e.g. `7/2 - 3*sqrt(5)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(bad(0, "empty scalar"));
        }
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'(' && bytes[i - 1] != b'e' {
                terms.push((start, &text[start..i]));
                start = i;
            }
        }
        terms.push((start, &text[start..]));
        let mut acc = QuadScalar::zero();
        for (pos, term) in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term),
            };
            let value = if let Some(idx) = body.find("sqrt(") {
                let coef = match &body[..idx] {
                    "" => Rational::one(),
                    c => parse_rational(c.strip_suffix('*').ok_or_else(|| bad(pos, "expected '*'"))?)
                        .ok_or_else(|| bad(pos, "bad coefficient"))?,
                };
                let inner = body[idx + 5..]
                    .strip_suffix(')')
                    .ok_or_else(|| bad(pos, "unclosed sqrt"))?;
                let n: u64 = inner.parse().map_err(|_| bad(pos, "bad radicand"))?;
                QuadScalar::new(Rational::zero(), coef, n)
            } else {
                QuadScalar::rational(parse_rational(body).ok_or_else(|| bad(pos, "bad rational"))?)
            };
            let value = if neg { -value } else { value };
            acc = acc.try_add(&value)?;
        }
        Ok(acc)
    }
}
