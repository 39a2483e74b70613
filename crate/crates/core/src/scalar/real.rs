//! A real number that stays exact as long as its inputs are.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::ball::{HPReal, DEFAULT_PRECISION};
use super::quad::QuadScalar;
use super::rational::{ceil, fmt_rational, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Real {
    Exact(Rational),
    Approx(HPReal),
}

impl Real {
    pub fn int(n: i64) -> Self {
        Real::Exact(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Real::int(0)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Real::Exact(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `ln n` for a positive integer; exact zero for `n = 1`.
    pub fn ln_int(n: i64, prec: u32) -> Result<Self> {
        if n == 1 {
            return Ok(Real::zero());
        }
        Ok(Real::Approx(HPReal::from_int(n, prec).ln()?))
    }

    pub fn parse(s: &str) -> Option<Self> {
        parse_rational(s).map(Real::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Approx(_) => None,
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Real::Exact(_) => None,
            Real::Approx(h) => Some(h.precision()),
        }
    }

    fn prec2(&self, o: &Self) -> u32 {
        self.precision().into_iter().chain(o.precision()).max().unwrap_or(DEFAULT_PRECISION)
    }

    pub fn to_hp(&self, prec: u32) -> HPReal {
        match self {
            Real::Exact(q) => HPReal::from_rational(q, prec),
            Real::Approx(h) => h.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => super::rational::to_f64(q),
            Real::Approx(h) => h.to_f64(),
        }
    }

    fn lift(
        &self,
        o: &Self,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        ball: impl FnOnce(&HPReal, &HPReal) -> HPReal,
    ) -> Self {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(exact(a, b)),
            _ => {
                let p = self.prec2(o);
                Real::Approx(ball(&self.to_hp(p), &o.to_hp(p)))
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.lift(o, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.lift(o, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.lift(o, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        match (self, o) {
            (_, Real::Exact(b)) if b.is_zero() => Err(Error::DivByZero),
            (Real::Exact(a), Real::Exact(b)) => Ok(Real::Exact(a / b)),
            _ => {
                let p = self.prec2(o);
                Ok(Real::Approx(self.to_hp(p).div(&o.to_hp(p))?))
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Real::Exact(q) => Real::Exact(-q),
            Real::Approx(h) => Real::Approx(h.neg()),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        self.mul(&Real::int(k))
    }

    /// Certified ordering, `None` when undecided.
    pub fn cmp_certain(&self, o: &Self) -> Option<Ordering> {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => {
                let p = self.prec2(o);
                self.to_hp(p).cmp_certain(&o.to_hp(p))
            }
        }
    }

    pub fn certainly_positive(&self) -> bool {
        self.cmp_certain(&Real::zero()) == Some(Ordering::Greater)
    }

    pub fn max(&self, o: &Self) -> Self {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a.max(b).clone()),
            _ => match self.cmp_certain(o) {
                Some(Ordering::Less) => o.clone(),
                Some(_) => self.clone(),
                None => {
                    let p = self.prec2(o);
                    Real::Approx(self.to_hp(p).max(&o.to_hp(p)))
                }
            },
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        self.neg().max(&o.neg()).neg()
    }

    /// Certified ceiling; `None` if the enclosure straddles an integer.
    pub fn ceil_certain(&self) -> Option<BigInt> {
        match self {
            Real::Exact(q) => Some(ceil(q)),
            Real::Approx(h) => h.ceil_certain(),
        }
    }

    pub fn error_bound(&self) -> Rational {
        match self {
            Real::Exact(_) => Rational::zero(),
            Real::Approx(h) => h.error_bound(),
        }
    }

    pub fn is_negative_certain(&self) -> bool {
        match self {
            Real::Exact(q) => q.is_negative(),
            Real::Approx(h) => h.sign() == Some(Ordering::Less),
        }
    }
}

impl From<HPReal> for Real {
    fn from(h: HPReal) -> Self {
        Real::Approx(h)
    }
}

impl From<Rational> for Real {
    fn from(q: Rational) -> Self {
        Real::Exact(q)
    }
}

impl TryFrom<&QuadScalar> for Real {
    type Error = Error;
    fn try_from(q: &QuadScalar) -> Result<Self> {
        q.as_rational()
            .cloned()
            .map(Real::Exact)
            .ok_or_else(|| Error::DomainError(format!("{q} is irrational")))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => f.write_str(&fmt_rational(q)),
            Real::Approx(h) => write!(f, "{h}"),
        }
    }
}
