//! The rank-4 lattice of `E x E` for `E = C / Z[i]`, as Hermitian matrices
//! `[[a, z], [conj z, b]]` over the Gaussian integers with `q = 2 det`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::LatticeIsometry;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::picard_manin::AmbientLattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianClass {
    pub a: BigInt,
    pub b: BigInt,
    /// real and imaginary parts of `z`
    pub z: (BigInt, BigInt),
}

impl HermitianClass {
    pub fn new(a: i64, b: i64, re: i64, im: i64) -> Self {
        HermitianClass { a: a.into(), b: b.into(), z: (re.into(), im.into()) }
    }

    /// `2 (ab - |z|^2)`
    pub fn square(&self) -> BigInt {
        BigInt::from(2) * (&self.a * &self.b - &self.z.0 * &self.z.0 - &self.z.1 * &self.z.1)
    }

    pub fn to_vector(&self) -> Vec<BigInt> {
        vec![self.a.clone(), self.b.clone(), self.z.0.clone(), self.z.1.clone()]
    }

    pub fn from_vector(v: &[BigInt]) -> Self {
        HermitianClass { a: v[0].clone(), b: v[1].clone(), z: (v[2].clone(), v[3].clone()) }
    }

    /// `M^T H M` for a real integer matrix `M`.
    pub fn transform(&self, m: &IntMatrix) -> Self {
        let (p, q, r, s) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let (a, b, x, y) = (&self.a, &self.b, &self.z.0, &self.z.1);
        let two = BigInt::from(2);
        HermitianClass {
            a: p * p * a + &two * p * r * x + r * r * b,
            b: q * q * a + &two * q * s * x + s * s * b,
            z: (p * q * a + (p * s + r * q) * x + r * s * b, (p * s - r * q) * y),
        }
    }
}

/// Coordinates `(a, b, Re z, Im z)`; the reference class is `A + B`.
pub fn kummer_lattice() -> Arc<AmbientLattice> {
    let gram = IntMatrix::from_rows(&[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]]).unwrap();
    let labels = ["A", "B", "ReZ", "ImZ"].map(String::from).to_vec();
    Arc::new(AmbientLattice::with_reference(labels, gram, vec![1.into(), 1.into(), 0.into(), 0.into()]).unwrap())
}

/// The isometry `H -> M^T H M` induced by `M` in `SL_2(Z)`.
pub fn kummer_action(m: &IntMatrix) -> Result<LatticeIsometry> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::UnsupportedSize("expected a 2x2 matrix".into()));
    }
    let det = m.det();
    if !det.is_one() {
        return Err(Error::NotSpecialLinear(det.to_string()));
    }
    let mut cols = Vec::with_capacity(4);
    for j in 0..4 {
        let mut e = vec![BigInt::from(0); 4];
        e[j] = BigInt::one();
        cols.push(HermitianClass::from_vector(&e).transform(m).to_vector());
    }
    let rows = (0..4).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    LatticeIsometry::new(&kummer_lattice(), IntMatrix::from_big_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cremona::{spectral_radius, Lambda};
    use crate::linalg::IntPoly;

    #[test]
    fn model_intersections() {
        let a = HermitianClass::new(1, 0, 0, 0);
        let diag = HermitianClass::new(1, 1, 1, 0);
        let l = kummer_lattice();
        assert_eq!(super::super::dot(&l.gram, &a.to_vector(), &HermitianClass::new(0, 1, 0, 0).to_vector()), 1.into());
        assert_eq!(super::super::dot(&l.gram, &diag.to_vector(), &a.to_vector()), 1.into());
        assert_eq!(diag.square(), 0.into());
        assert_eq!(l.signature(), (1, 3));
    }

    #[test]
    fn trace_three() {
        let m = IntMatrix::from_rows(&[[2, 1], [1, 1]]).unwrap();
        let g = kummer_action(&m).unwrap();
        assert!(g.matrix.charpoly().div_exact(&IntPoly::from_i64(&[1, -7, 1])).is_some());
        assert_eq!(spectral_radius(&g.matrix, 128).unwrap(), Lambda::Exact("7/2 + 3/2*sqrt(5)".parse().unwrap()));
        assert!(g.fixed_rank() >= 2);
        let h = HermitianClass::new(3, -2, 5, 7);
        assert_eq!(h.transform(&m).square(), h.square());
        assert!(matches!(kummer_action(&IntMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap()), Err(Error::NotSpecialLinear(_))));
        let m = IntMatrix::from_rows(&[[1, 2], [2, 5]]).unwrap();
        let g = kummer_action(&m).unwrap();
        assert_eq!(spectral_radius(&g.matrix, 128).unwrap(), Lambda::Exact("17 + 12*sqrt(2)".parse().unwrap()));
        assert_eq!(kummer_action(&IntMatrix::identity(2)).unwrap(), LatticeIsometry::identity(&kummer_lattice()));
    }
}
