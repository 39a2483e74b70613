//! Binary quadratic forms and their automorphs via the Pell equation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::scalar::rational::exact_isqrt;
use crate::scalar::{QuadScalar, Rational};

/// `A u^2 + B uv + C v^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryForm { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn is_degenerate(&self) -> bool {
        self.discriminant().is_zero()
    }

    pub fn is_definite(&self) -> bool {
        self.discriminant().is_negative()
    }

    /// An indefinite form represents zero exactly when its discriminant is a square.
    pub fn represents_zero(&self) -> bool {
        exact_isqrt(&self.discriminant()).is_some()
    }

    pub fn eval(&self, u: &BigInt, v: &BigInt) -> BigInt {
        &self.a * u * u + &self.b * u * v + &self.c * v * v
    }

    /// Gram matrix of the polar form, `[[2A, B], [B, 2C]]`.
    pub fn gram(&self) -> IntMatrix {
        let two = BigInt::from(2);
        IntMatrix::from_big_rows(vec![vec![&two * &self.a, self.b.clone()], vec![self.b.clone(), &two * &self.c]]).unwrap()
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn primitive(&self) -> BinaryForm {
        let g = self.content();
        BinaryForm { a: &self.a / &g, b: &self.b / &g, c: &self.c / &g }
    }

    pub fn preserves(&self, m: &IntMatrix) -> bool {
        let g = self.gram();
        m.transpose().mul(&g).and_then(|x| x.mul(m)).is_ok_and(|x| x == g)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PellSolution {
    /// automorph acting on column vectors `(u, v)`
    pub matrix: IntMatrix,
    /// `(t, s)` with `t^2 - disc s^2 = 4`, for the primitive form
    pub t: BigInt,
    pub s: BigInt,
    pub lambda: QuadScalar,
    pub method: &'static str,
}

fn is_solution(t: &BigInt, s: &BigInt, d: &BigInt) -> bool {
    t * t - d * s * s == BigInt::from(4)
}

/// First solution of `t^2 - d s^2 = 4` among the continued fraction
/// convergents of `sqrt(d)`, scaled by 1 or 2.
fn by_continued_fraction(d: &BigInt, max_terms: usize) -> Option<(BigInt, BigInt)> {
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p_prev, mut p) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    for _ in 0..max_terms {
        for k in [1, 2] {
            let (t, s) = (&p * k, &q * k);
            if is_solution(&t, &s, d) {
                return Some((t, s));
            }
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
    }
    None
}

fn by_search(d: &BigInt, bound: u64) -> Option<(BigInt, BigInt)> {
    (1..=bound).map(BigInt::from).find_map(|s| {
        let t = exact_isqrt(&(d * &s * &s + BigInt::from(4)))?;
        Some((t, s))
    })
}

/// An automorph of `q` with eigenvalues `lambda > 1 > 1/lambda > 0`, from the
/// least solution found of `t^2 - D s^2 = 4` for the primitive form of `q`.
pub fn pell_isometry(q: &BinaryForm) -> Result<PellSolution> {
    if q.is_degenerate() {
        return Err(Error::NotApplicable("degenerate form".into()));
    }
    if q.is_definite() {
        return Err(Error::NotApplicable("definite form".into()));
    }
    if q.represents_zero() {
        return Err(Error::NotApplicable("form represents zero".into()));
    }
    let f = q.primitive();
    let d = f.discriminant();
    // |t/s - sqrt(D)| < 1/(2 s^2) once D > 16, so every solution is then a convergent
    let cf = if d > BigInt::from(16) { by_continued_fraction(&d, 10_000) } else { None };
    let (sol, method) = match cf {
        Some(x) => (Some(x), "continued fraction"),
        None => (by_search(&d, 1_000_000), "search"),
    };
    let (t, s) = sol.ok_or_else(|| Error::NotApplicable("no Pell solution found within the search bounds".into()))?;
    let two = BigInt::from(2);
    let matrix = IntMatrix::from_big_rows(vec![
        vec![(&t - &f.b * &s) / &two, -(&f.c * &s)],
        vec![&f.a * &s, (&t + &f.b * &s) / &two],
    ])?;
    let half = Rational::new(BigInt::one(), two.clone());
    let lambda = QuadScalar::new(
        Rational::from_integer(t.clone()) * &half,
        Rational::from_integer(s.clone()) * &half,
        d.to_u64().ok_or_else(|| Error::UnsupportedSize("discriminant too large".into()))?,
    );
    Ok(PellSolution { matrix, t, s, lambda, method })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Least-trace automorph of determinant 1 with trace above 2, entries bounded.
    fn brute_force(q: &BinaryForm, bound: i64) -> Option<IntMatrix> {
        let mut best: Option<(i64, IntMatrix)> = None;
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in -bound..=bound {
                    for d in -bound..=bound {
                        if a * d - b * c != 1 || a + d <= 2 {
                            continue;
                        }
                        let m = IntMatrix::from_rows(&[[a, b], [c, d]]).unwrap();
                        if q.preserves(&m) && best.as_ref().map_or(true, |(t, _)| a + d < *t) {
                            best = Some((a + d, m));
                        }
                    }
                }
            }
        }
        best.map(|(_, m)| m)
    }

    #[test]
    fn pell_cases() {
        let q = BinaryForm::new(1, 0, -2);
        let s = pell_isometry(&q).unwrap();
        assert_eq!(s.matrix, IntMatrix::from_rows(&[[3, 4], [2, 3]]).unwrap());
        assert_eq!(s.lambda, "3 + 2*sqrt(2)".parse().unwrap());
        assert_eq!(brute_force(&q, 10).unwrap().trace(), s.matrix.trace());
        let coble = BinaryForm::new(2, 8, 2);
        let s = pell_isometry(&coble).unwrap();
        assert!(coble.preserves(&s.matrix));
        assert_eq!(s.lambda, "2 + sqrt(3)".parse().unwrap());
        assert_eq!(s.lambda.try_mul(&s.lambda.conj()).unwrap(), QuadScalar::one());
        assert!(matches!(pell_isometry(&BinaryForm::new(1, 0, -1)), Err(Error::NotApplicable(_))));
        assert!(matches!(pell_isometry(&BinaryForm::new(1, 0, 1)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn large_fundamental_solution() {
        let s = pell_isometry(&BinaryForm::new(1, 0, -61)).unwrap();
        assert_eq!((s.t, s.s, s.method), (BigInt::from(2 * 1_766_319_049i64), BigInt::from(226_153_980), "continued fraction"));
    }

    #[test]
    fn small_discriminants_agree_with_search() {
        for (a, b, c) in [(1, 1, -1), (1, 0, -3), (1, 0, -5), (1, 0, -7), (2, 1, -1), (3, 1, -2), (1, 1, -5), (1, 0, -13), (1, 1, -11), (2, 3, -4)] {
            let q = BinaryForm::new(a, b, c);
            if q.represents_zero() {
                continue;
            }
            let s = pell_isometry(&q).unwrap();
            assert!(q.preserves(&s.matrix));
            assert!(is_solution(&s.t, &s.s, &q.discriminant()));
            assert_eq!(Some(s.s.clone()), by_search(&q.discriminant(), 1000).map(|x| x.1), "{a} {b} {c}");
            let (t, u) = by_continued_fraction(&q.discriminant(), 1000).unwrap();
            assert!(is_solution(&t, &u, &q.discriminant()) && u >= s.s);
        }
    }
}
