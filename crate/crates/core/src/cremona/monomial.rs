//! Monomial maps `(x, y) -> (x^a y^b, x^c y^d)` of the plane.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::linalg::IntMatrix;

fn check(m: &IntMatrix) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::UnsupportedSize("monomial maps use 2x2 matrices".into()));
    }
    let det = m.det();
    if det != BigInt::one() && det != -BigInt::one() {
        return Err(domain(format!("determinant {det} is not +-1")));
    }
    Ok(())
}

/// Degree of the homogenized map: the side of the smallest standard
/// triangle containing a translate of `{0, (a, b), (c, d)}`.
pub fn monomial_degree(m: &IntMatrix) -> Result<BigInt> {
    check(m)?;
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let z = BigInt::zero();
    let m3 = |x: BigInt, y: BigInt| z.clone().max(x).max(y);
    Ok(m3(-a, -c) + m3(-b, -d) + m3(a + b, c + d))
}

/// Exponents of `(alpha, beta)` in `g^-1 f^-1 g f` for `f = (alpha x, beta y)` and
/// `g` the monomial map of `m`: row `i` holds the exponents in the `i`-th
/// coordinate. Equals `I - m^-1`.
pub fn monomial_commutator(m: &IntMatrix) -> Result<IntMatrix> {
    check(m)?;
    Ok(IntMatrix::identity(2).sub(&m.inverse_unimodular()?))
}
