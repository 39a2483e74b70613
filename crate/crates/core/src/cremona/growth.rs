//! Dynamical degrees and the elliptic / parabolic / hyperbolic trichotomy.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntPoly};
use crate::scalar::{HPReal, QuadScalar, Rational};

use super::action::{CremonaAction, Variant};

/// A dynamical degree: exact when it is a quadratic integer, else a certified ball.
#[derive(Clone, Debug)]
pub enum Lambda {
    Exact(QuadScalar),
    Approx(HPReal),
}

impl PartialEq for Lambda {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Lambda::Exact(a), Lambda::Exact(b)) => a == b,
            (Lambda::Approx(a), Lambda::Approx(b)) => a.midpoint() == b.midpoint() && a.error_bound() == b.error_bound(),
            _ => false,
        }
    }
}

impl Lambda {
    pub fn one() -> Self {
        Lambda::Exact(QuadScalar::one())
    }

    pub fn to_hp(&self, prec: u32) -> HPReal {
        match self {
            Lambda::Exact(q) => crate::scalar::embed(q, prec),
            Lambda::Approx(x) => x.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Lambda::Exact(q) => q.to_f64(),
            Lambda::Approx(x) => x.to_f64(),
        }
    }

    /// Certified `lambda > 1`.
    pub fn exceeds_one(&self) -> bool {
        match self {
            Lambda::Exact(q) => q.cmp_exact(&QuadScalar::one()).is_ok_and(|o| o.is_gt()),
            Lambda::Approx(x) => x.certainly_gt(&HPReal::from_int(1, x.precision())),
        }
    }

    pub fn as_exact(&self) -> Option<&QuadScalar> {
        match self {
            Lambda::Exact(q) => Some(q),
            Lambda::Approx(_) => None,
        }
    }

    /// Translation length `log lambda`.
    pub fn log(&self, prec: u32) -> Result<HPReal> {
        self.to_hp(prec).ln()
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Exact(q) => write!(f, "{q}"),
            Lambda::Approx(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Growth {
    Linear,
    Quadratic,
    Unknown,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Linear => "linear",
            Growth::Quadratic => "quadratic",
            Growth::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsometryClass {
    Elliptic,
    Parabolic { growth: Growth },
    Hyperbolic { lambda: Lambda },
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Elliptic => "elliptic",
            IsometryClass::Parabolic { .. } => "parabolic",
            IsometryClass::Hyperbolic { .. } => "hyperbolic",
        }
    }
}

impl fmt::Display for IsometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsometryClass::Elliptic => f.write_str("elliptic"),
            IsometryClass::Parabolic { growth } => write!(f, "parabolic ({growth} growth)"),
            IsometryClass::Hyperbolic { lambda } => write!(f, "hyperbolic (lambda = {lambda})"),
        }
    }
}

pub const DEFAULT_HORIZON: usize = 16;

/// The `k`-th cyclotomic polynomial.
pub fn cyclotomic(k: u32) -> IntPoly {
    let mut c = vec![BigInt::zero(); k as usize + 1];
    c[0] = -BigInt::one();
    c[k as usize] = BigInt::one();
    let mut p = IntPoly::new(c);
    for d in 1..k {
        if k % d == 0 {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic factor");
        }
    }
    p
}

fn totient(k: u32) -> u32 {
    (1..=k).filter(|&i| i.gcd(&k) == 1).count() as u32
}

/// Orders of the roots of unity making up `p`, if `p` is a product of
/// cyclotomic polynomials.
pub fn cyclotomic_orders(p: &IntPoly) -> Option<Vec<u32>> {
    let n = p.degree() as u32;
    let mut rest = p.clone();
    let mut out = Vec::new();
    for k in 1..=(2 * n * n + 2) {
        if rest.degree() == 0 {
            break;
        }
        if totient(k) > rest.degree() as u32 {
            continue;
        }
        let phi = cyclotomic(k);
        while let Some(q) = rest.div_exact(&phi) {
            rest = q;
            out.push(k);
        }
    }
    (rest.degree() == 0 && rest.0[0].is_one()).then_some(out)
}

/// Larger root in modulus of `t^2 - u t + c`: `(|u| + sqrt(u^2 - 4c)) / 2`.
fn quadratic_root(u: &BigInt, c: &BigInt) -> Option<QuadScalar> {
    let disc: BigInt = u * u - BigInt::from(4) * c;
    if !disc.is_positive() {
        return None;
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    Some(QuadScalar::new(Rational::from_integer(u.abs()) * &half, half, disc.to_u64()?))
}

fn power_iteration(m: &IntMatrix) -> (f64, f64) {
    let n = m.rows();
    let a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect()).collect();
    let apply = |v: &[f64]| -> Vec<f64> { a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect() };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64) * 0.37).collect();
    let mut r = 0.0;
    for _ in 0..400 {
        let w = apply(&v);
        let nw = norm(&w);
        r = nw / norm(&v);
        v = w.iter().map(|x| x / nw).collect();
    }
    let w = apply(&v);
    let dot: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
    (r, dot.signum())
}

/// Spectral radius of an integer matrix whose dominant eigenvalue is real
/// (monomial maps and lattice isometries).
pub fn spectral_radius(m: &IntMatrix, prec: u32) -> Result<Lambda> {
    let p = m.charpoly();
    if cyclotomic_orders(&p).is_some() {
        return Ok(Lambda::one());
    }
    if p.degree() == 2 {
        let root = quadratic_root(&-p.0[1].clone(), &p.0[0]);
        return root.map(Lambda::Exact).ok_or_else(|| Error::NotApplicable("complex dominant eigenvalue".into()));
    }
    let (r, sign) = power_iteration(m);
    let sgn = if sign < 0.0 { -1 } else { 1 };
    for c in [1i64, -1] {
        let u = (r + c as f64 / r).round() as i64 * sgn;
        let factor = IntPoly::from_i64(&[c, -u, 1]);
        if p.div_exact(&factor).is_some() {
            if let Some(q) = quadratic_root(&BigInt::from(u), &BigInt::from(c)) {
                return Ok(Lambda::Exact(q));
            }
        }
    }
    bracket_root(&p, r * sgn as f64, prec).map(Lambda::Approx)
}

/// Certified ball around the simple real root of `p` near `guess`, by exact bisection.
fn bracket_root(p: &IntPoly, guess: f64, prec: u32) -> Result<HPReal> {
    let sign = |x: &Rational| p.eval(x).signum();
    let g = Rational::from_float(guess).ok_or_else(|| Error::PrecisionFailure("non-finite eigenvalue estimate".into()))?;
    let mut eps = Rational::from_float(guess.abs() * 1e-9 + 1e-12).unwrap();
    let (mut lo, mut hi) = loop {
        let (a, b) = (&g - &eps, &g + &eps);
        if sign(&a) * sign(&b) <= Rational::zero() {
            break (a, b);
        }
        eps *= Rational::from_integer(16.into());
        if eps > Rational::from_integer(1.into()) {
            return Err(Error::PrecisionFailure("no sign change near the eigenvalue estimate".into()));
        }
    };
    let two = Rational::from_integer(2.into());
    let s_lo = sign(&lo);
    for _ in 0..prec + 8 {
        let mid = (&lo + &hi) / &two;
        let s = sign(&mid);
        if s.is_zero() {
            return Ok(HPReal::from_rational(&mid.abs(), prec));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = ((&lo + &hi) / &two).abs();
    let rad = (&hi - &lo) / &two;
    Ok(HPReal::from_mid_rad(&mid, &rad, prec))
}

/// Growth type of `A` when all its eigenvalues are roots of unity, from the
/// nilpotency index of `A^L - I` with `L` the lcm of their orders.
pub fn unipotent_growth(m: &IntMatrix) -> Option<IsometryClass> {
    let orders = cyclotomic_orders(&m.charpoly())?;
    let l = orders.iter().fold(1u64, |acc, &k| acc.lcm(&(k as u64)));
    let n = m.pow(l).sub(&IntMatrix::identity(m.rows()));
    let mut acc = n.clone();
    let mut index = 1;
    while !acc.is_zero() && index <= m.rows() {
        acc = acc.mul(&n).ok()?;
        index += 1;
    }
    Some(match index {
        1 => IsometryClass::Elliptic,
        2 => IsometryClass::Parabolic { growth: Growth::Linear },
        3 => IsometryClass::Parabolic { growth: Growth::Quadratic },
        _ => IsometryClass::Parabolic { growth: Growth::Unknown },
    })
}

pub fn classify_matrix(m: &IntMatrix, prec: u32) -> Result<IsometryClass> {
    if let Some(c) = unipotent_growth(m) {
        return Ok(c);
    }
    let lambda = spectral_radius(m, prec)?;
    if lambda.exceeds_one() {
        Ok(IsometryClass::Hyperbolic { lambda })
    } else {
        Ok(IsometryClass::Parabolic { growth: Growth::Unknown })
    }
}

fn differences(v: &[BigInt]) -> Vec<BigInt> {
    v.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// Growth type read off an exact degree sequence of a map with `lambda = 1`.
pub fn classify_degrees(seq: &[QuadScalar]) -> IsometryClass {
    let ints: Option<Vec<BigInt>> = seq.iter().map(|q| q.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())).collect();
    let Some(d) = ints else {
        return IsometryClass::Parabolic { growth: Growth::Unknown };
    };
    let n = d.len();
    if (1..=n / 2).any(|p| (0..n - p).all(|i| d[i] == d[i + p])) {
        return IsometryClass::Elliptic;
    }
    let tail = &d[n / 2..];
    let d1 = differences(tail);
    let d2 = differences(&d1);
    let d3 = differences(&d2);
    let growth = if !d2.is_empty() && d2.iter().all(Zero::is_zero) && d1[0].is_positive() {
        Growth::Linear
    } else if !d3.is_empty() && d3.iter().all(Zero::is_zero) && d2[0].is_positive() {
        Growth::Quadratic
    } else {
        Growth::Unknown
    };
    IsometryClass::Parabolic { growth }
}

/// Dynamical degree: `d` for the symbolic generic variants, the spectral radius
/// for matrix variants. A composite of symbolic maps is accepted when its degrees
/// multiply over a few iterates, in which case its degree is returned.
pub fn dynamical_degree(a: &CremonaAction) -> Result<Lambda> {
    if let Some(s) = a.symbolic() {
        return Ok(Lambda::Exact(QuadScalar::int(s.d as i64)));
    }
    if a.is_monomial() || a.is_lattice() {
        return spectral_radius(&a.matrix().unwrap(), crate::scalar::DEFAULT_PRECISION);
    }
    if let Variant::Composite(v) = a.variant() {
        if v.is_empty() {
            return Ok(Lambda::one());
        }
    }
    let seq = a.degree_sequence(4)?;
    let d = &seq[0];
    let stable = seq.iter().enumerate().all(|(k, x)| *x == d.pow(k as u32 + 1));
    if stable {
        Ok(Lambda::Exact(d.clone()))
    } else {
        Err(Error::Unsupported("degrees of the composite are not multiplicative".into()))
    }
}

pub fn classify_isometry(a: &CremonaAction, horizon: usize) -> Result<IsometryClass> {
    if a.is_monomial() || a.is_lattice() {
        return classify_matrix(&a.matrix().unwrap(), crate::scalar::DEFAULT_PRECISION);
    }
    match dynamical_degree(a) {
        Ok(lambda) if lambda.exceeds_one() => return Ok(IsometryClass::Hyperbolic { lambda }),
        Ok(_) | Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(classify_degrees(&a.degree_sequence(horizon.max(4))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard_manin::PointRegistry;

    fn m(rows: &[[i64; 2]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        let p = IntPoly::from_i64(&[1, -2, 1]);
        assert_eq!(cyclotomic_orders(&p), Some(vec![1, 1]));
        assert_eq!(cyclotomic_orders(&IntPoly::from_i64(&[1, -3, 1])), None);
    }

    #[test]
    fn monomial_trichotomy() {
        let cat = m(&[[2, 1], [1, 1]]);
        let l = spectral_radius(&cat, 128).unwrap();
        assert_eq!(l, Lambda::Exact("3/2 + 1/2*sqrt(5)".parse().unwrap()));
        assert_eq!(classify_matrix(&m(&[[1, 0], [1, 1]]), 128).unwrap(), IsometryClass::Parabolic { growth: Growth::Linear });
        assert_eq!(classify_matrix(&m(&[[0, -1], [1, 0]]), 128).unwrap(), IsometryClass::Elliptic);
        assert_eq!(classify_matrix(&m(&[[-1, 0], [0, -1]]), 128).unwrap(), IsometryClass::Elliptic);
        let flip = spectral_radius(&m(&[[-1, -1], [-1, 0]]), 128).unwrap();
        assert!((flip.to_f64() - 1.618033988749895).abs() < 1e-12);
    }

    #[test]
    fn non_quadratic_root_is_bracketed() {
        // companion matrix of t^3 - t - 1 (plastic number)
        let c = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, 1], [0, 1, 0]]).unwrap();
        let Lambda::Approx(x) = spectral_radius(&c, 128).unwrap() else { panic!("expected a ball") };
        assert!((x.to_f64() - 1.324717957244746).abs() < 1e-14);
        assert!(x.error_f64() < 1e-30);
    }

    #[test]
    fn degree_growth_classes() {
        let q = |v: &[i64]| v.iter().map(|&x| QuadScalar::int(x)).collect::<Vec<_>>();
        assert_eq!(classify_degrees(&q(&[2, 1, 2, 1, 2, 1])), IsometryClass::Elliptic);
        assert_eq!(classify_degrees(&q(&[2, 3, 4, 5, 6, 7, 8])), IsometryClass::Parabolic { growth: Growth::Linear });
        assert_eq!(classify_degrees(&q(&[1, 4, 9, 16, 25, 36, 49, 64])), IsometryClass::Parabolic { growth: Growth::Quadratic });
    }

    #[test]
    fn symbolic_actions() {
        let reg = PointRegistry::new();
        let f = CremonaAction::quadratic_generic(&reg);
        assert_eq!(classify_isometry(&f, 16).unwrap(), IsometryClass::Hyperbolic { lambda: Lambda::Exact(QuadScalar::int(2)) });
        let id = f.compose(&f.inverse().unwrap()).unwrap();
        assert_eq!(classify_isometry(&id, 16).unwrap(), IsometryClass::Elliptic);
        let h = CremonaAction::henon(&reg, 3).unwrap();
        let l = dynamical_degree(&h).unwrap();
        assert!((l.log(128).unwrap().to_f64() - 3f64.ln()).abs() < 1e-15);
    }
}
