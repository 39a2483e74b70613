//! Certified real arithmetic: a dyadic midpoint with a rigorous radius.
//!
//! Every operation returns a ball that contains the exact result of the same
//! operation applied to any points of the input balls. Rounding errors are folded
//! into the radius, and the radius itself is always rounded upward.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::quad::QuadScalar;
use super::rational::Rational;
use crate::error::{domain, Error, Result};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Precisions tried, in order, when a sign has to be certified.
pub const PRECISION_LADDER: [u32; 3] = [64, 128, 256];

const RAD_BITS: u64 = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Round {
    Floor,
    Ceil,
    Nearest,
}

/// `man * 2^exp`, exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    fn from_int(n: BigInt) -> Self {
        Dyadic { man: n, exp: 0 }.norm()
    }

    fn norm(mut self) -> Self {
        if self.man.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Dyadic { man: a + b, exp: e }.norm()
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }.norm()
    }

    fn cmp(&self, o: &Self) -> Ordering {
        match self.sub(o).man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// `floor(log2 |x|)` for nonzero `x`.
    fn msb(&self) -> i64 {
        self.exp + self.man.bits() as i64 - 1
    }

    fn round(&self, prec: u64, mode: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        // arithmetic shift: q = floor(man / 2^shift), 0 <= r < 2^shift
        let q = &self.man >> shift;
        let r = &self.man - (&q << shift);
        debug_assert!(!r.is_negative());
        let q = match mode {
            Round::Floor => q,
            Round::Ceil if r.is_zero() => q,
            Round::Ceil => q + 1,
            Round::Nearest => {
                if r.bit(shift - 1) {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic { man: q, exp: self.exp + shift as i64 }.norm()
    }

    /// Nearest rounding together with the exact size of the rounding error.
    fn round_nearest_err(&self, prec: u64) -> (Self, Self) {
        let bits = self.man.bits();
        if bits <= prec {
            return (self.clone(), Self::zero());
        }
        let shift = bits - prec;
        let q = &self.man >> shift;
        let r = &self.man - (&q << shift);
        let (q, err) = if r.bit(shift - 1) { (q + 1, pow2(shift) - r) } else { (q, r) };
        let err = Dyadic { man: err, exp: self.exp }.norm();
        (Dyadic { man: q, exp: self.exp + shift as i64 }.norm(), err)
    }

    fn div_int_round(num: &BigInt, den: &BigInt, mode: Round) -> (BigInt, bool) {
        let (q, r) = num.div_mod_floor(den);
        if r.is_zero() {
            return (q, true);
        }
        let q = match mode {
            Round::Floor => q,
            Round::Ceil => q + 1,
            Round::Nearest => {
                if (r.abs() << 1u32) >= den.abs() {
                    q + 1
                } else {
                    q
                }
            }
        };
        (q, false)
    }

    /// Quotient with at least `prec` significant bits; flag is true when exact.
    fn div(&self, o: &Self, prec: u64, mode: Round) -> (Self, bool) {
        assert!(!o.is_zero());
        if self.is_zero() {
            return (Self::zero(), true);
        }
        let k = (prec as i64 + o.man.bits() as i64 - self.man.bits() as i64 + 2).max(0) as u64;
        let (q, exact) = Self::div_int_round(&(&self.man << k), &o.man, mode);
        (Dyadic { man: q, exp: self.exp - o.exp - k as i64 }.norm(), exact)
    }

    /// Square root of a nonnegative value with at least `prec` bits.
    fn sqrt(&self, prec: u64, mode: Round) -> (Self, bool) {
        assert!(!self.is_negative());
        if self.is_zero() {
            return (Self::zero(), true);
        }
        let mut k = (2 * prec as i64 + 2 - self.man.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let n = &self.man << k as u64;
        let s = n.sqrt();
        let exact = &s * &s == n;
        let s = match mode {
            Round::Ceil if !exact => s + 1,
            Round::Nearest if !exact => {
                // s^2 < n < (s+1)^2; nearest by comparing against (s + 1/2)^2
                let twice = &s * 2u32 + 1u32;
                if (&n << 2u32) >= &twice * &twice {
                    s + 1
                } else {
                    s
                }
            }
            _ => s,
        };
        (Dyadic { man: s, exp: (self.exp - k) / 2 }.norm(), exact)
    }

    fn from_rational(q: &Rational, prec: u64, mode: Round) -> (Self, bool) {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        n.div(&d, prec, mode)
    }

    fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if (bits >> 63) == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (man, exp) = if e == 0 { (frac, -1074) } else { (frac | (1 << 52), e - 1075) };
        Dyadic { man: BigInt::from(sign * man), exp }.norm()
    }

    fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.man << self.exp as u64)
        } else {
            Rational::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Top 53 bits as an `f64` mantissa and a binary exponent.
    fn split_f64(&self) -> (f64, i64) {
        let bits = self.man.bits() as i64;
        let shift = (bits - 53).max(0);
        // Round the magnitude to nearest so both signs round the same way.
        let mag = self.man.magnitude();
        let mut t = mag >> shift as u64;
        if shift > 0 && mag.bit(shift as u64 - 1) {
            t += 1u32;
        }
        let top = t.to_f64().unwrap_or(0.0);
        let top = if self.man.sign() == Sign::Minus { -top } else { top };
        (top, self.exp + shift)
    }

    fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (top, e) = self.split_f64();
        let e = e.clamp(-2000, 2000) as i32;
        // Two steps keep intermediate powers in range.
        let h = e / 2;
        top * 2f64.powi(h) * 2f64.powi(e - h)
    }
}

/// A certified real: the true value lies in `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct HPReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, HPReal>> = RefCell::new(HashMap::new());
}

impl HPReal {
    fn finish(exact: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (mid, err) = exact.round_nearest_err(prec as u64);
        let rad = rad.add(&err).round(RAD_BITS, Round::Ceil);
        HPReal { mid, rad, prec }
    }

    pub fn zero(prec: u32) -> Self {
        HPReal { mid: Dyadic::zero(), rad: Dyadic::zero(), prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::finish(Dyadic::from_int(BigInt::from(n)), Dyadic::zero(), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::finish(Dyadic::from_int(n.clone()), Dyadic::zero(), prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let (d, exact) = Dyadic::from_rational(q, prec as u64 + 2, Round::Nearest);
        let rad = if exact { Dyadic::zero() } else { Dyadic { man: BigInt::one(), exp: d.exp } };
        Self::finish(d, rad, prec)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self::finish(Dyadic::from_f64(x), Dyadic::zero(), prec)
    }

    /// Ball `mid ± rad` from rationals; the radius is rounded outward.
    pub fn from_mid_rad(mid: &Rational, rad: &Rational, prec: u32) -> Self {
        let m = Self::from_rational(mid, prec);
        let (r, _) = Dyadic::from_rational(&rad.abs(), RAD_BITS, Round::Ceil);
        HPReal { rad: m.rad.add(&r).round(RAD_BITS, Round::Ceil), ..m }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::finish(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn error_bound(&self) -> Rational {
        self.rad.to_rational()
    }

    pub fn midpoint(&self) -> Rational {
        self.mid.to_rational()
    }

    pub fn lower(&self) -> Rational {
        self.mid.sub(&self.rad).to_rational()
    }

    pub fn upper(&self) -> Rational {
        self.mid.add(&self.rad).to_rational()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn error_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    /// Upper bound for `|x|` over the ball.
    fn mag(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    fn pmax(&self, o: &Self) -> u32 {
        self.prec.max(o.prec)
    }

    /// Certain sign, if the ball excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo().cmp(&Dyadic::zero()) == Ordering::Greater {
            Some(Ordering::Greater)
        } else if self.hi().cmp(&Dyadic::zero()) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified ordering; `None` when the balls overlap.
    pub fn cmp_certain(&self, o: &Self) -> Option<Ordering> {
        self.sub(o).sign()
    }

    /// True unless the ball lies entirely above `o`.
    pub fn possibly_le(&self, o: &Self) -> bool {
        self.cmp_certain(o) != Some(Ordering::Greater)
    }

    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.cmp_certain(o) == Some(Ordering::Less)
    }

    pub fn certainly_gt(&self, o: &Self) -> bool {
        self.cmp_certain(o) == Some(Ordering::Greater)
    }

    pub fn neg(&self) -> Self {
        HPReal { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        match self.sign() {
            Some(Ordering::Less) => self.neg(),
            Some(_) => self.clone(),
            None => {
                // Ball straddles zero: enclose [0, mag].
                let m = self.mag();
                let half = m.shl(-1);
                Self::finish(half.clone(), half, self.prec)
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::finish(self.mid.add(&o.mid), self.rad.add(&o.rad), self.pmax(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::finish(self.mid.sub(&o.mid), self.rad.add(&o.rad), self.pmax(o))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let rad = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        Self::finish(self.mid.mul(&o.mid), rad, self.pmax(o))
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k, self.prec))
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        HPReal { mid: self.mid.shl(k), rad: self.rad.shl(k), prec: self.prec }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let prec = self.pmax(o);
        if o.mid.is_zero() && o.rad.is_zero() {
            return Err(Error::DivByZero);
        }
        let bm = o.mid.abs();
        let lower = bm.sub(&o.rad);
        if lower.cmp(&Dyadic::zero()) != Ordering::Greater {
            return Err(Error::PrecisionFailure("divisor ball contains zero".into()));
        }
        let (q, exact) = self.mid.div(&o.mid, prec as u64 + 4, Round::Nearest);
        let mut rad = if exact { Dyadic::zero() } else { Dyadic { man: BigInt::one(), exp: q.exp } };
        if !(self.rad.is_zero() && o.rad.is_zero()) {
            let num = self.mid.abs().mul(&o.rad).add(&bm.mul(&self.rad));
            let den = bm.mul(&lower);
            let (p, _) = num.div(&den, RAD_BITS, Round::Ceil);
            rad = rad.add(&p);
        }
        Ok(Self::finish(q, rad, prec))
    }

    pub fn div_int(&self, k: i64) -> Result<Self> {
        self.div(&Self::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_int(1, self.prec).div(self)
    }

    pub fn sqrt(&self) -> Result<Self> {
        let prec = self.prec as u64;
        let hi = self.hi();
        if hi.is_negative() {
            return Err(domain("square root of a negative number"));
        }
        let lo = self.lo();
        if lo.cmp(&Dyadic::zero()) != Ordering::Greater {
            // Enclose [0, sqrt(hi)].
            let (s, _) = hi.sqrt(RAD_BITS, Round::Ceil);
            let half = s.shl(-1);
            return Ok(Self::finish(half.clone(), half, self.prec));
        }
        let (s, exact) = self.mid.sqrt(prec + 4, Round::Nearest);
        let mut rad = if exact { Dyadic::zero() } else { Dyadic { man: BigInt::one(), exp: s.exp } };
        if !self.rad.is_zero() {
            // |sqrt(x) - sqrt(m)| <= r / sqrt(lo)
            let (sl, _) = lo.sqrt(RAD_BITS, Round::Floor);
            let (p, _) = self.rad.div(&sl, RAD_BITS, Round::Ceil);
            rad = rad.add(&p);
        }
        Ok(Self::finish(s, rad, self.prec))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::from_int(1, self.prec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.sqr();
            n >>= 1;
        }
        acc
    }

    /// `ln 2` at the given precision, cached per thread.
    pub fn ln2(prec: u32) -> Self {
        if let Some(v) = LN2_CACHE.with(|c| c.borrow().get(&prec).cloned()) {
            return v;
        }
        let wp = prec + 16;
        let third = Self::from_rational(&Rational::new(BigInt::one(), BigInt::from(3)), wp);
        let v = atanh_series(&third, wp).expect("convergent").shl(1).with_precision(prec);
        LN2_CACHE.with(|c| c.borrow_mut().insert(prec, v.clone()));
        v
    }

    pub fn exp(&self) -> Result<Self> {
        const S: u64 = 10;
        let p = self.prec;
        let approx = self.mid.to_f64();
        if !approx.is_finite() || approx.abs() > 1.0e7 {
            return Err(domain("exponent out of supported range"));
        }
        if self.rad.cmp(&Dyadic { man: BigInt::one(), exp: -2 }) != Ordering::Less {
            // exp is monotone; enclose the images of the end points
            let lo = HPReal { mid: self.lo(), rad: Dyadic::zero(), prec: p }.exp()?;
            let hi = HPReal { mid: self.hi(), rad: Dyadic::zero(), prec: p }.exp()?;
            return Ok(lo.hull(&hi));
        }
        // x = n ln2 + r with |r| <= ln2 / 2, and e^r = (e^(r / 2^S))^(2^S)
        let n = (approx / std::f64::consts::LN_2).round() as i64;
        let w = p as u64 + 64;
        let r = fixed(&self.mid, w) - BigInt::from(n) * ln2_fixed(w);
        let t = &r >> S;
        // error of t in units of 2^-w
        let et = (1 + 2 * n.unsigned_abs()) / (1 << S) + 2;
        let tmax = Dyadic { man: t.abs() + et, exp: -(w as i64) }.round(RAD_BITS, Round::Ceil);
        let lt = if tmax.is_zero() { -1.0e9 } else { tmax.to_f64().log2() };
        let mut k = 1u64;
        let mut logfact = 0.0f64;
        loop {
            let kk = k + 1;
            logfact += (kk as f64).log2();
            if (kk as f64) * lt - logfact < -(w as f64 + 8.0) {
                break;
            }
            k += 1;
        }
        let mut term = BigInt::one() << w;
        let mut acc = term.clone();
        for j in 1..=k {
            term = ((&term * &t) >> w) / BigInt::from(j);
            acc += &term;
        }
        // E_j <= E_(j-1) / 2 + et + 2 for the j-th term; tail <= 2 tmax^(k+1) / (k+1)!
        let mut fact = BigInt::one();
        for j in 2..=(k + 1) {
            fact *= j;
        }
        let (tail, _) = pow_ceil(&tmax, k + 1).shl(1).div(&Dyadic::from_int(fact), RAD_BITS, Round::Ceil);
        let mut err = Dyadic { man: BigInt::from(2 * (k + 1) * (et + 2)), exp: -(w as i64) }.add(&tail);
        let two_ulps = Dyadic { man: BigInt::from(2), exp: -(w as i64) };
        let mut v = acc;
        for _ in 0..S {
            // values stay below sqrt 2, so the error at most triples
            v = (&v * &v) >> w;
            err = err.mul(&Dyadic::from_int(BigInt::from(3))).add(&two_ulps).round(RAD_BITS, Round::Ceil);
        }
        let mid = Dyadic { man: v, exp: n - w as i64 }.norm();
        let mut rad = err.shl(n);
        if !self.rad.is_zero() {
            // e^(x + d) - e^x <= 2 |d| e^x for |d| < 1/4
            rad = rad.add(&mid.add(&rad).mul(&self.rad).shl(1));
        }
        Ok(Self::finish(mid, rad.round(RAD_BITS, Round::Ceil), p))
    }

    pub fn ln(&self) -> Result<Self> {
        let p = self.prec;
        if self.hi().cmp(&Dyadic::zero()) != Ordering::Greater {
            return Err(domain("logarithm of a nonpositive number"));
        }
        if self.lo().cmp(&Dyadic::zero()) != Ordering::Greater {
            return Err(Error::PrecisionFailure("logarithm argument ball contains zero".into()));
        }
        // A wide ball is handled through its endpoints, ln being monotone.
        if self.rad.shl(8).cmp(&self.mid.abs()) == Ordering::Greater {
            let lo = HPReal { mid: self.lo(), rad: Dyadic::zero(), prec: p }.ln()?;
            let hi = HPReal { mid: self.hi(), rad: Dyadic::zero(), prec: p }.ln()?;
            return Ok(lo.hull(&hi));
        }
        // x = 2^k (1 + j/16) g with 1 <= g < 1 + 1/16
        let w = p as u64 + 40;
        let k = self.mid.msb();
        let f = fixed(&self.mid.shl(-k), w);
        let one = BigInt::one() << w;
        let j = ((&f - &one) >> (w - 4)).to_u32().unwrap_or(0).min(15);
        let g = (&f << 4u32) / BigInt::from(16 + j);
        let u = ((&g - &one) << w) / (&g + &one);
        // u is within 2 units, as atanh_fixed allows
        let (a, aerr) = atanh_fixed(&u, w);
        let total = (a << 1u32) + ln_table(w, j) + BigInt::from(k) * ln2_fixed(w);
        let units = Dyadic { man: BigInt::from(2 + 2 * k.unsigned_abs() + 2), exp: -(w as i64) };
        let mut rad = aerr.shl(1).add(&units);
        if !self.rad.is_zero() {
            let (d, _) = self.rad.div(&self.lo(), RAD_BITS, Round::Ceil);
            rad = rad.add(&d);
        }
        Ok(Self::finish(Dyadic { man: total, exp: -(w as i64) }.norm(), rad.round(RAD_BITS, Round::Ceil), p))
    }

    /// Smallest ball containing both balls.
    fn hull(&self, o: &Self) -> Self {
        let lo = if self.lo().cmp(&o.lo()) == Ordering::Less { self.lo() } else { o.lo() };
        let hi = if self.hi().cmp(&o.hi()) == Ordering::Greater { self.hi() } else { o.hi() };
        let mid = lo.add(&hi).shl(-1);
        let rad = hi.sub(&lo).shl(-1);
        Self::finish(mid, rad, self.prec.max(o.prec))
    }

    pub fn cosh(&self) -> Result<Self> {
        let e = self.exp()?;
        Ok(e.add(&e.recip()?).shl(-1))
    }

    pub fn sinh(&self) -> Result<Self> {
        let wp = self.prec + 32;
        let e = self.with_precision(wp).exp()?;
        Ok(e.sub(&e.recip()?).shl(-1).with_precision(self.prec))
    }

    /// Inverse hyperbolic cosine. Balls reaching below 1 are clipped to `[1, hi]`.
    pub fn acosh(&self) -> Result<Self> {
        let one = Dyadic::from_int(BigInt::one());
        let hi = self.hi();
        if hi.cmp(&one) == Ordering::Less {
            return Err(domain(format!("acosh of {} < 1", self)));
        }
        let x = if self.lo().cmp(&one) == Ordering::Less {
            let mid = one.add(&hi).shl(-1);
            let rad = hi.sub(&one).shl(-1);
            HPReal { mid, rad, prec: self.prec }
        } else {
            self.clone()
        };
        let wp = self.prec + 32;
        let x = x.with_precision(wp);
        let onew = Self::from_int(1, wp);
        let s = x.sub(&onew).mul(&x.add(&onew)).sqrt()?;
        Ok(x.add(&s).ln()?.with_precision(self.prec))
    }

    /// Smallest integer not below the value, when certified.
    pub fn ceil_certain(&self) -> Option<BigInt> {
        let lo = super::rational::ceil(&self.lower());
        let hi = super::rational::ceil(&self.upper());
        (lo == hi).then_some(lo)
    }

    pub fn floor_certain(&self) -> Option<BigInt> {
        let lo = super::rational::floor(&self.lower());
        let hi = super::rational::floor(&self.upper());
        (lo == hi).then_some(lo)
    }

    /// True if the ball contains the rational `q`.
    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    pub fn max(&self, o: &Self) -> Self {
        match self.cmp_certain(o) {
            Some(Ordering::Less) => o.clone(),
            Some(_) => self.clone(),
            None => {
                // Enclose both upper ends.
                let lo = if self.lo().cmp(&o.lo()) == Ordering::Greater { self.lo() } else { o.lo() };
                let hi = if self.hi().cmp(&o.hi()) == Ordering::Greater { self.hi() } else { o.hi() };
                let prec = self.pmax(o);
                Self::finish(lo.add(&hi).shl(-1), hi.sub(&lo).shl(-1), prec)
            }
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        self.neg().max(&o.neg()).neg()
    }

    /// Decimal rendering of the midpoint with `places` digits after the point.
    pub fn to_decimal(&self, places: usize) -> String {
        let q = self.midpoint() * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
        let n = q.round().to_integer();
        let neg = n.is_negative();
        let digits = n.abs().to_string();
        let s = if places == 0 {
            digits
        } else if digits.len() > places {
            let (i, f) = digits.split_at(digits.len() - places);
            format!("{i}.{f}")
        } else {
            format!("0.{}{}", "0".repeat(places - digits.len()), digits)
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }

    /// The radius rendered with two significant digits, rounded up.
    pub fn error_string(&self) -> String {
        if self.rad.is_zero() {
            return "0".into();
        }
        let (top, e2) = self.rad.split_f64();
        let d = top.log10() + e2 as f64 * std::f64::consts::LOG10_2;
        let mut e = d.floor() as i64;
        let mut m = (10f64.powf(d - e as f64) * (1.0 + 1e-12) * 10.0).ceil() / 10.0;
        if m >= 10.0 {
            m = 1.0;
            e += 1;
        }
        format!("{m:.1}e{e}")
    }

    fn display_places(&self) -> usize {
        let cap = (self.prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        if self.rad.is_zero() {
            if self.mid.exp >= 0 {
                0
            } else {
                ((-self.mid.exp) as usize).min(cap)
            }
        } else {
            let lr = (self.rad.msb() + 1) as f64 * std::f64::consts::LOG10_2;
            ((-lr).floor() as i64 + 1).clamp(0, cap as i64) as usize
        }
    }
}

/// Upper bound for `x^n`, `x >= 0`, with short mantissas.
fn pow_ceil(x: &Dyadic, mut n: u64) -> Dyadic {
    let mut acc = Dyadic::from_int(BigInt::one());
    let mut base = x.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&base).round(RAD_BITS, Round::Ceil);
        }
        base = base.mul(&base).round(RAD_BITS, Round::Ceil);
        n >>= 1;
    }
    acc
}

/// `floor(x * 2^w)`, off by less than one unit.
fn fixed(x: &Dyadic, w: u64) -> BigInt {
    let e = x.exp + w as i64;
    if e >= 0 {
        &x.man << e as u64
    } else {
        &x.man >> (-e) as u64
    }
}

thread_local! {
    static FIXED_CACHE: RefCell<HashMap<(u64, u32), BigInt>> = RefCell::new(HashMap::new());
}

/// Cached fixed-point constant with `w` fractional bits, within 2 units.
fn fixed_constant(w: u64, key: u32, f: impl FnOnce(u32) -> HPReal) -> BigInt {
    if let Some(v) = FIXED_CACHE.with(|c| c.borrow().get(&(w, key)).cloned()) {
        return v;
    }
    let v = fixed(&f(w as u32 + 16).mid, w);
    FIXED_CACHE.with(|c| c.borrow_mut().insert((w, key), v.clone()));
    v
}

fn ln2_fixed(w: u64) -> BigInt {
    fixed_constant(w, 0, HPReal::ln2)
}

/// `ln(1 + j/16) = 2 atanh(j / (32 + j))`.
fn ln_table(w: u64, j: u32) -> BigInt {
    if j == 0 {
        return BigInt::zero();
    }
    fixed_constant(w, j, |wp| {
        let u = HPReal::from_rational(&Rational::new(BigInt::from(j), BigInt::from(32 + j)), wp);
        atanh_series(&u, wp).expect("convergent").shl(1)
    })
}

/// `atanh(x 2^-w)` in fixed point for `|x| 2^-w < 1/2 - 2^(1-w)`, with an error
/// bound that also covers an error of up to 2 units in `x`.
fn atanh_fixed(x: &BigInt, w: u64) -> (BigInt, Dyadic) {
    let umax = Dyadic { man: x.abs() + 2u32, exp: -(w as i64) }.round(RAD_BITS, Round::Ceil);
    if x.is_zero() {
        return (BigInt::zero(), Dyadic { man: BigInt::from(2), exp: -(w as i64) });
    }
    let lu = umax.to_f64().log2();
    let mut k = 0u64;
    while ((2 * k + 3) as f64) * lu > -(w as f64 + 8.0) {
        k += 1;
    }
    let x2 = (x * x) >> w;
    let mut term = x.clone();
    let mut acc = x.clone();
    for j in 1..=k {
        term = (&term * &x2) >> w;
        acc += &term / BigInt::from(2 * j + 1);
    }
    // each term is within 4 units
    let ulps = Dyadic { man: BigInt::from(4 * (k + 1)), exp: -(w as i64) };
    // Tail <= umax^(2k+3) / ((2k+3)(1 - umax^2)) <= 2 umax^(2k+3) / (2k+3) since umax < 1/2.
    let (tail, _) = pow_ceil(&umax, 2 * k + 3).shl(1).div(&Dyadic::from_int(BigInt::from(2 * k + 3)), RAD_BITS, Round::Ceil);
    (acc, ulps.add(&tail))
}

/// `atanh(u) = sum u^(2j+1)/(2j+1)` with a rigorous tail bound. Requires `|u| < 1/2`.
fn atanh_series(u: &HPReal, wp: u32) -> Result<HPReal> {
    let umax = u.mag().round(RAD_BITS, Round::Ceil);
    if umax.cmp(&Dyadic { man: BigInt::from(7), exp: -4 }) == Ordering::Greater {
        return Err(Error::PrecisionFailure("atanh argument too large".into()));
    }
    if umax.is_zero() {
        return Ok(HPReal::zero(wp));
    }
    let w = wp as u64 + 16;
    let (a, err) = atanh_fixed(&fixed(&u.mid, w), w);
    // atanh' <= 2 on the argument ball
    Ok(HPReal::finish(Dyadic { man: a, exp: -(w as i64) }.norm(), err.add(&u.rad.shl(1)), wp))
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = self.to_decimal(self.display_places());
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        write!(f, "{} ±{}", s, self.error_string())
    }
}

/// Real embedding of `x` with relative error at most `2^(1 - bits)`.
pub fn embed(x: &QuadScalar, bits: u32) -> HPReal {
    let bits = bits.max(53);
    let mut wp = bits + 16;
    loop {
        let a = HPReal::from_rational(x.a(), wp);
        let v = if x.is_rational() {
            a
        } else {
            let r = HPReal::from_int(x.m() as i64, wp).sqrt().expect("m >= 0");
            a.add(&HPReal::from_rational(x.b(), wp).mul(&r))
        };
        // err <= 2^(1-bits) * (|mid| - rad), a lower bound for |value|
        let lower = v.mid.abs().sub(&v.rad);
        let allowed = lower.shl(1 - bits as i64);
        if v.rad.is_zero() || (!lower.is_negative() && v.rad.cmp(&allowed) != Ordering::Greater) {
            return HPReal { prec: bits, ..v };
        }
        wp += bits;
    }
}

/// Inverse hyperbolic cosine of an exact quadratic number.
pub fn acosh_hp(x: &QuadScalar, prec: u32) -> Result<HPReal> {
    if x.cmp_exact(&QuadScalar::one())? == Ordering::Less {
        return Err(domain(format!("acosh of {x} < 1")));
    }
    if x.cmp_exact(&QuadScalar::one())? == Ordering::Equal {
        return Ok(HPReal::zero(prec));
    }
    embed(x, prec + 8).acosh().map(|v| v.with_precision(prec))
}

/// Runs `f` at each precision of the ladder until its result has a certain sign.
pub fn certify_sign<F>(f: F) -> Result<(Ordering, HPReal)>
where
    F: Fn(u32) -> Result<HPReal>,
{
    let mut last = None;
    for &p in PRECISION_LADDER.iter() {
        match f(p) {
            Ok(v) => {
                if let Some(s) = v.sign() {
                    return Ok((s, v));
                }
                last = Some(v);
            }
            Err(Error::PrecisionFailure(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecisionFailure(match last {
        Some(v) => format!("sign of {v} undecided at 256 bits"),
        None => "evaluation failed at every precision".into(),
    }))
}
