//! Rigidity and tightness constants: promotion lemmas, shadow bounds, the
//! power threshold for tight elements and the constants of the `V_d` argument.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::scalar::{acosh_hp, HPReal, QuadScalar, Rational, Real, DEFAULT_PRECISION, PRECISION_LADDER};

/// How the middle term of the constant-curvature promotion is read.
pub const CAT_READING: &str = "18*eps + 2*log(5*(cosh(4*eps) - 1)/(cosh(eps') - 1))";

fn precondition(msg: impl Into<String>) -> Error {
    Error::PreconditionFailed(msg.into())
}

fn compare(a: &Real, b: &Real) -> Result<Ordering> {
    a.cmp_certain(b).ok_or_else(|| Error::PrecisionFailure(format!("cannot order {a} and {b}")))
}

fn prec_of(xs: &[&Real]) -> u32 {
    xs.iter().filter_map(|x| x.precision()).max().unwrap_or(DEFAULT_PRECISION)
}

/// `ln 3`, the hyperbolicity constant used throughout.
pub fn delta(prec: u32) -> Real {
    Real::ln_int(3, prec).expect("ln 3")
}

/// `theta = 4 delta`.
pub fn theta(prec: u32) -> Real {
    delta(prec).scale(4)
}

#[derive(Clone, Debug)]
pub struct RigidityParams {
    pub epsilon: Real,
    pub b: Real,
}

impl RigidityParams {
    pub fn new(epsilon: Real, b: Real) -> Result<Self> {
        if !epsilon.certainly_positive() || !b.certainly_positive() {
            return Err(precondition("rigidity parameters must be positive"));
        }
        Ok(RigidityParams { epsilon, b })
    }
}

/// `(eps, B)`-rigidity in a tree-like space promotes to `(eps, B + 6 eps + 4 theta)`.
pub fn promote_rigidity_tree(b: &Real, eps: &Real, theta: &Real) -> Result<Real> {
    if compare(eps, &theta.scale(2))? != Ordering::Greater {
        return Err(precondition("need eps > 2 theta"));
    }
    Ok(b.add(&eps.scale(6)).add(&theta.scale(4)))
}

/// In the hyperboloid, `(eps', B')`-rigidity implies `(eps, B)`-rigidity for
/// the returned `B`. `theta` only enters through the caller's choice of `eps`.
pub fn promote_rigidity_cat(eps_prime: &Real, b_prime: &Real, eps: &Real, theta: &Real) -> Result<Real> {
    if !eps_prime.certainly_positive() || compare(eps_prime, eps)? != Ordering::Less {
        return Err(precondition("need 0 < eps' < eps"));
    }
    if theta.is_negative_certain() || b_prime.is_negative_certain() {
        return Err(precondition("theta and B' must be nonnegative"));
    }
    let p = prec_of(&[eps_prime, b_prime, eps]);
    let (e, ep) = (eps.to_hp(p + 16), eps_prime.to_hp(p + 16));
    let one = HPReal::from_int(1, p + 16);
    let ratio = e.mul_int(4).cosh()?.sub(&one).div(&ep.cosh()?.sub(&one))?;
    let middle = Real::from(e.mul_int(18).add(&ratio.mul_int(5).ln()?.mul_int(2)).with_precision(p));
    let third = b_prime.scale(4).div(&Real::int(3))?.add(&eps.scale(2));
    Ok(eps.scale(22).max(&middle).max(&third))
}

/// Width `nu` of the tube containing two `2 eps`-close segments of length `B`
/// away from their ends.
pub fn shadow_bound(eps: &Real, b: &Real) -> Result<HPReal> {
    if compare(b, &eps.scale(10))? == Ordering::Less {
        return Err(precondition("need B >= 10 eps"));
    }
    let p = prec_of(&[eps, b]) + 16;
    let (e, bb) = (eps.to_hp(p), b.to_hp(p));
    let one = HPReal::from_int(1, p);
    let num = e.mul_int(2).cosh()?.sub(&one).mul_int(5);
    let den = bb.div_int(2)?.sub(&e.mul_int(4)).exp()?;
    Ok(one.add(&num.div(&den)?).acosh()?.with_precision(p - 16))
}

/// An axis of an isometry with displacement at least `eta` off the axis is
/// `(eta / 2, 7 L)`-rigid.
pub fn axis_rigidity_from_displacement(eta: &Real, l: &Real) -> Result<RigidityParams> {
    RigidityParams::new(eta.div(&Real::int(2))?, l.scale(7))
}

/// Least `n >= 1` with `n L >= 20 (60 theta + 2 B)`.
pub fn min_tight_power(l: &Real, theta: &Real, b: &Real) -> Result<BigInt> {
    if !l.certainly_positive() {
        return Err(precondition("L must be positive"));
    }
    let need = theta.scale(1200).add(&b.scale(40)).div(l)?;
    let n = need.ceil_certain().ok_or_else(|| Error::PrecisionFailure(format!("ceiling of {need} undecided")))?;
    Ok(n.max(BigInt::one()))
}

#[derive(Clone, Debug)]
pub struct KBound {
    pub l: Real,
    pub b: Real,
    pub k: BigInt,
    /// `ceil(40 * 1369 + 1200 theta)`
    pub c1: BigInt,
    /// `ceil(40 * 124 + 1200 theta)`
    pub c2: BigInt,
}

/// `ceil(c + 1200 theta)` with the precision raised until certain.
fn certified_ceiling(c: i64) -> Result<BigInt> {
    for &p in PRECISION_LADDER.iter() {
        if let Some(n) = Real::int(c).add(&theta(p).scale(1200)).ceil_certain() {
            return Ok(n);
        }
    }
    Err(Error::PrecisionFailure(format!("ceiling of {c} + 1200 theta undecided")))
}

/// `B = max(1369, 28 L / 3 + 124)` and `k = ceil(max(c1 / L, 374 + c2 / L))`.
pub fn cremona_k_bound(l: &Real) -> Result<KBound> {
    if !l.certainly_positive() {
        return Err(precondition("L must be positive"));
    }
    let (c1, c2) = (certified_ceiling(40 * 1369)?, certified_ceiling(40 * 124)?);
    let b = Real::int(1369).max(&l.scale(28).div(&Real::int(3))?.add(&Real::int(124)));
    let big = |n: &BigInt| Real::Exact(Rational::from_integer(n.clone()));
    let q = big(&c1).div(l)?.max(&Real::int(374).add(&big(&c2).div(l)?));
    let k = q.ceil_certain().ok_or_else(|| Error::PrecisionFailure(format!("ceiling of {q} undecided")))?;
    Ok(KBound { l: l.clone(), b, k, c1, c2 })
}

#[derive(Clone, Debug)]
pub struct TightnessConstants {
    pub delta: Real,
    pub theta: Real,
    pub l: Real,
    pub b: Real,
    pub n_min: BigInt,
    pub k: BigInt,
}

/// The full constant chain for an axis of translation length `L`.
pub fn tightness_constants(l: &Real) -> Result<TightnessConstants> {
    let p = prec_of(&[l]).max(DEFAULT_PRECISION);
    let kb = cremona_k_bound(l)?;
    let th = theta(p);
    let n_min = min_tight_power(l, &th, &kb.b)?;
    Ok(TightnessConstants { delta: delta(p), theta: th, l: l.clone(), b: kb.b, n_min, k: kb.k })
}

#[derive(Clone, Debug)]
pub struct Epsilon0Certificate {
    pub holds: bool,
    /// `4 - cosh(a1 + eps)`
    pub degree_margin: HPReal,
    /// `a4 - a2 - eps`
    pub shift_margin: HPReal,
    /// `a3 - a4`
    pub order_margin: HPReal,
    pub precision: u32,
}

/// `a1 = acosh 3`, `a2 = acosh sqrt 2`, `a3 = acosh(3 / sqrt 2)`, `a4 = acosh(5 / (2 sqrt 2))`.
pub fn table_constants(prec: u32) -> Result<[HPReal; 4]> {
    Ok([
        acosh_hp(&QuadScalar::int(3), prec)?,
        acosh_hp(&QuadScalar::sqrt(2), prec)?,
        acosh_hp(&QuadScalar::new(Rational::from_integer(0.into()), Rational::new(3.into(), 2.into()), 2), prec)?,
        acosh_hp(&QuadScalar::new(Rational::from_integer(0.into()), Rational::new(5.into(), 4.into()), 2), prec)?,
    ])
}

/// Checks `cosh(a1 + eps) < 4` and `a2 + eps < a4 < a3` with certified signs.
pub fn epsilon0_certificate(eps: &Rational) -> Result<Epsilon0Certificate> {
    if eps.is_negative() {
        return Err(precondition("eps must be nonnegative"));
    }
    for &p in PRECISION_LADDER.iter() {
        let [a1, a2, a3, a4] = table_constants(p + 8)?;
        let e = HPReal::from_rational(eps, p + 8);
        let degree_margin = HPReal::from_int(4, p + 8).sub(&a1.add(&e).cosh()?).with_precision(p);
        let shift_margin = a4.sub(&a2).sub(&e).with_precision(p);
        let order_margin = a3.sub(&a4).with_precision(p);
        let signs = [&degree_margin, &shift_margin, &order_margin].map(|m| m.sign());
        if signs.iter().all(Option::is_some) {
            let holds = signs.iter().all(|s| *s == Some(Ordering::Greater));
            return Ok(Epsilon0Certificate { holds, degree_margin, shift_margin, order_margin, precision: p });
        }
    }
    Err(Error::PrecisionFailure(format!("margins for eps = {eps} undecided at 256 bits")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExclusionBound {
    pub degree: u32,
    /// lower bound on `f_*[H] . [P]`
    pub bound: QuadScalar,
    /// worst case of the exceptional pairing in the estimate
    pub worst_pairing: Rational,
    /// lower bound on `f_*[H] . [D]` (degree 3) or on `[E1 + E2 + E3] . [R]` (degree 2)
    pub pairing_bound: Rational,
}

/// Lower bounds on `f_*[H] . [P]` ruling out degrees 3 and 2 near the axis point `[P]`.
pub fn exclusion_bounds(deg: u32) -> Result<ExclusionBound> {
    let half_sqrt2 = |c: Rational| QuadScalar::new(Rational::from_integer(0.into()), c, 2);
    match deg {
        3 => {
            // [D] = 2 sqrt2 [P] - [H] = 3 [H] - 2 [R] and f_*[H].[D] >= 3(3) + 2(-3)
            let worst = Rational::from_integer((-3).into());
            let pairing = Rational::from_integer(9.into()) + Rational::from_integer(2.into()) * &worst;
            // f_*[H].[P] = (f_*[H].[H] + f_*[H].[D]) / (2 sqrt 2)
            let num = Rational::from_integer(3.into()) + &pairing;
            Ok(ExclusionBound { degree: 3, bound: half_sqrt2(num / Rational::from_integer(4.into())), worst_pairing: worst, pairing_bound: pairing })
        }
        2 => {
            // 2 sqrt2 + (1/sqrt2)(-1 - 1/d) with d >= 2
            let worst = Rational::new((-3).into(), 2.into());
            let bound = QuadScalar::sqrt(2).scale(&Rational::from_integer(2.into())).try_add(&half_sqrt2(worst.clone() / Rational::from_integer(2.into())))?;
            Ok(ExclusionBound { degree: 2, bound, worst_pairing: worst.clone(), pairing_bound: worst })
        }
        _ => Err(Error::Unsupported(format!("no exclusion bound for degree {deg}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::rat;

    fn r(s: &str) -> Real {
        Real::parse(s).unwrap()
    }

    #[test]
    fn promotions() {
        assert_eq!(promote_rigidity_tree(&r("100"), &r("10"), &r("1")).unwrap().to_f64(), 164.0);
        assert!(matches!(promote_rigidity_tree(&r("1"), &r("2"), &r("1")), Err(Error::PreconditionFailed(_))));
        let v = promote_rigidity_tree(&r("1000"), &r("9"), &theta(128)).unwrap();
        assert!((v.to_f64() - 1071.578).abs() < 1e-3);
        let v = promote_rigidity_cat(&r("1"), &r("0"), &r("2"), &theta(128)).unwrap();
        let m = promote_rigidity_cat(&r("1/2"), &r("0"), &r("1"), &theta(128)).unwrap();
        let oracle = 18.0 + 2.0 * (5.0 * (4f64.cosh() - 1.0) / (0.5f64.cosh() - 1.0)).ln();
        assert!((m.to_f64() - oracle).abs() < 1e-9, "{}", m.to_f64());
        assert!(v.to_f64() > 44.0);
        let big = promote_rigidity_cat(&r("1/2"), &r("1000000"), &r("1"), &theta(128)).unwrap();
        assert_eq!(big.as_exact(), Some(&(rat(4_000_000, 3) + rat(2, 1))));
        assert!(promote_rigidity_cat(&r("1"), &r("0"), &r("1"), &theta(128)).is_err());
    }

    #[test]
    fn shadows() {
        let nu = shadow_bound(&r("0.1"), &r("10")).unwrap();
        assert!((nu.to_f64() - 0.0449).abs() < 5e-4, "{}", nu.to_f64());
        let far = shadow_bound(&r("0.1"), &r("12")).unwrap();
        assert!(far.certainly_lt(&nu));
        assert!(shadow_bound(&r("1"), &r("10")).is_ok());
        assert!(shadow_bound(&r("1"), &r("9.99")).is_err());
    }

    #[test]
    fn axis_params() {
        let p = axis_rigidity_from_displacement(&r("0.289"), &Real::ln_int(2, 128).unwrap()).unwrap();
        assert_eq!(p.epsilon.as_exact(), Some(&rat(289, 2000)));
        assert!((p.b.to_f64() - 4.852).abs() < 1e-3);
        assert!(axis_rigidity_from_displacement(&r("0"), &r("1")).is_err());
    }

    #[test]
    fn constant_chain() {
        let th = theta(128);
        let ln2 = Real::ln_int(2, 128).unwrap();
        // 60033.34 / ln 2 = 86609.8; the chain below rounds 60033.34 up first
        assert_eq!(min_tight_power(&ln2, &th, &r("1369")).unwrap(), 86610.into());
        assert_eq!(min_tight_power(&r("2"), &th, &r("1369")).unwrap(), 30017.into());
        assert_eq!(min_tight_power(&r("1"), &r("0"), &r("0")).unwrap(), 1.into());
        let kb = cremona_k_bound(&ln2).unwrap();
        assert_eq!((kb.c1.clone(), kb.c2.clone(), kb.k), (60034.into(), 10234.into(), 86611.into()));
        assert_eq!(cremona_k_bound(&r("2")).unwrap().k, 30017.into());
        assert_eq!(cremona_k_bound(&r("10234")).unwrap().k, 375.into());
        let t = tightness_constants(&ln2).unwrap();
        assert_eq!((t.n_min, t.k), (86610.into(), 86611.into()));
    }

    #[test]
    fn certificate() {
        let c = epsilon0_certificate(&rat(289, 1000)).unwrap();
        assert!(c.holds);
        assert!((c.degree_margin.to_f64() - 0.045).abs() < 2e-3);
        assert!((c.shift_margin.to_f64() - 7e-4).abs() < 1e-4);
        assert!(epsilon0_certificate(&rat(0, 1)).unwrap().holds);
        assert!(!epsilon0_certificate(&rat(3, 10)).unwrap().holds);
        assert!(epsilon0_certificate(&rat(-1, 10)).is_err());
    }

    #[test]
    fn exclusions() {
        let b3 = exclusion_bounds(3).unwrap().bound;
        let b2 = exclusion_bounds(2).unwrap().bound;
        assert_eq!(b3, "3/2*sqrt(2)".parse().unwrap());
        assert_eq!(b2, "5/4*sqrt(2)".parse().unwrap());
        assert_eq!(b3.pow(2), QuadScalar::frac(9, 2));
        assert_eq!(b2.pow(2), QuadScalar::frac(25, 8));
        assert!(matches!(exclusion_bounds(4), Err(Error::Unsupported(_))));
    }
}
