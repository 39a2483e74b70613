//! Helpers around [`BigRational`], the exact coefficient type used everywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p`, `p/q`, or a finite decimal such as `0.289`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), fp.len());
        let q = Rational::new(n, d);
        return Some(if neg { -q } else { q });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Writes `n = s^2 * m` with `m` squarefree; returns `(s, m)`. Requires `n > 0`.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree decomposition of zero");
    let mut s = 1u64;
    let mut m = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    m *= rest;
    (s, m)
}

/// Integer square root of a nonnegative big integer, if exact.
pub fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn to_u64(q: &BigInt) -> Option<u64> {
    q.to_u64()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_decomposition(45), (3, 5));
        assert_eq!(squarefree_decomposition(1152), (24, 2));
        assert_eq!(squarefree_decomposition(1), (1, 1));
        assert_eq!(squarefree_decomposition(48), (4, 3));
        assert_eq!(squarefree_decomposition(97), (1, 97));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("0.289"), Some(rat(289, 1000)));
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("12"), Some(int(12)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(floor(&rat(-7, 2)), BigInt::from(-4));
        assert_eq!(ceil(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(ceil(&rat(7, 2)), BigInt::from(4));
        assert_eq!(ceil(&int(5)), BigInt::from(5));
    }
}
