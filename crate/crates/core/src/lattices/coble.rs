//! A Coble surface model: the blow-up of the plane in ten points, with two
//! classes `D1, D2` of square 2 spanning a hyperbolic plane inside `K^perp`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{dot, int_class, BinaryForm, LatticeIsometry};
use crate::cremona::growth::spectral_radius;
use crate::cremona::Lambda;
use crate::error::{domain, Result};
use crate::linalg::{IntMatrix, RatMatrix};
use crate::picard_manin::{AmbientLattice, PicManClass};
use crate::scalar::{Rational, DEFAULT_PRECISION};

#[derive(Clone, Debug)]
pub struct CobleRecord {
    /// `Z H + Z E1 + ... + Z E10`, `H^2 = 1`, `Ei^2 = -1`
    pub lattice: Arc<AmbientLattice>,
    pub k: PicManClass,
    pub d1: PicManClass,
    pub d2: PicManClass,
    /// `(u D1 + v D2)^2`
    pub q: BinaryForm,
    /// action on `V = <D1, D2>` in the basis `(D1, D2)`, columns are images
    pub phi: IntMatrix,
    /// `phi^2` on `V` and the identity on `V^perp`, in the standard basis
    pub g: LatticeIsometry,
    /// the same map on the finite-index sublattice `V + V^perp`
    pub g_adapted: LatticeIsometry,
    pub lambda: Lambda,
}

fn vector(coeffs: &[i64]) -> Vec<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

fn classes() -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let k = vector(&[-3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
    let d1 = vector(&[6, -2, -2, -2, -2, -2, -2, -2, -2, -1, -1]);
    let d2 = vector(&[6, -2, -2, -2, -2, -2, -2, -1, -1, -2, -2]);
    (k, d1, d2)
}

pub fn coble_lattice() -> Arc<AmbientLattice> {
    let mut labels = vec!["H".to_string()];
    labels.extend((1..=10).map(|i| format!("E{i}")));
    let mut d = vec![-1; 11];
    d[0] = 1;
    Arc::new(AmbientLattice::new(labels, IntMatrix::diagonal(&d), 0).unwrap())
}

/// The map acting by `a` on `span(basis)` and trivially on its orthogonal
/// complement, if it is integral.
fn extend_by_identity(gram: &IntMatrix, basis: &[Vec<BigInt>], a: &IntMatrix) -> Result<IntMatrix> {
    let n = gram.rows();
    let r = basis.len();
    let gv = IntMatrix::from_big_rows(basis.iter().map(|u| basis.iter().map(|v| dot(gram, u, v)).collect()).collect())?;
    // x -> x + B (A - I) G_V^-1 (B^T G x)
    let mut aug = RatMatrix::zeros(r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            aug.set(i, j, gv.get(i, j).clone().into());
        }
        aug.set(i, r + i, Rational::one());
    }
    aug.rref();
    let inv: Vec<Vec<Rational>> = (0..r).map(|i| (0..r).map(|j| aug.get(i, r + j).clone()).collect()).collect();
    let am = a.sub(&IntMatrix::identity(r));
    let coef: Vec<Vec<Rational>> = (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| Rational::from_integer(am.get(i, k).clone()) * &inv[k][j]).sum()).collect())
        .collect();
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for col in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[col] = BigInt::one();
        let pairing: Vec<BigInt> = basis.iter().map(|u| dot(gram, u, &e)).collect();
        for (row, out) in rows.iter_mut().enumerate() {
            let mut v = Rational::from_integer(e[row].clone());
            for i in 0..r {
                let c: Rational = (0..r).map(|j| &coef[i][j] * Rational::from_integer(pairing[j].clone())).sum();
                v += c * Rational::from_integer(basis[i][row].clone());
            }
            if !v.is_integer() {
                return Err(domain("the extension by the identity is not integral"));
            }
            out[col] = v.to_integer();
        }
    }
    IntMatrix::from_big_rows(rows)
}

/// Lattice with basis `(D1, D2, w1, ..., w9)`, the `wi` spanning `V^perp`.
fn adapted_lattice(gram: &IntMatrix, d1: &[BigInt], d2: &[BigInt]) -> Result<Arc<AmbientLattice>> {
    let n = gram.rows();
    let mut cond = RatMatrix::zeros(2, n);
    for (i, d) in [d1, d2].into_iter().enumerate() {
        let gd = gram.mul_vec(d);
        for (j, c) in gd.into_iter().enumerate() {
            cond.set(i, j, c.into());
        }
    }
    let mut basis = vec![d1.to_vec(), d2.to_vec()];
    basis.extend(cond.kernel());
    let g = IntMatrix::from_big_rows(basis.iter().map(|u| basis.iter().map(|v| dot(gram, u, v)).collect()).collect())?;
    let mut labels = vec!["D1".to_string(), "D2".to_string()];
    labels.extend((1..basis.len() - 1).map(|i| format!("w{i}")));
    Ok(Arc::new(AmbientLattice::new(labels, g, 0)?))
}

pub fn coble_construction() -> Result<CobleRecord> {
    let lattice = coble_lattice();
    let (k, d1, d2) = classes();
    let gram = &lattice.gram;
    let q = BinaryForm {
        a: dot(gram, &d1, &d1),
        b: BigInt::from(2) * dot(gram, &d1, &d2),
        c: dot(gram, &d2, &d2),
    };
    let phi = IntMatrix::from_rows(&[[4, 1], [-1, 0]])?;
    let phi2 = phi.mul(&phi)?;
    let g = LatticeIsometry::new(&lattice, extend_by_identity(gram, &[d1.clone(), d2.clone()], &phi2)?)?;
    let adapted = adapted_lattice(gram, &d1, &d2)?;
    let g_adapted = LatticeIsometry::new(&adapted, phi2.direct_sum(&IntMatrix::identity(adapted.rank() - 2)))?;
    let lambda = spectral_radius(&g.matrix, DEFAULT_PRECISION)?;
    Ok(CobleRecord {
        k: int_class(&lattice, &k),
        d1: int_class(&lattice, &d1),
        d2: int_class(&lattice, &d2),
        lattice,
        q,
        phi,
        g,
        g_adapted,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::lattices::{ample_cone_member, mod2_congruence, pell_isometry};

    #[test]
    fn record() {
        let c = coble_construction().unwrap();
        assert_eq!(c.k.square().unwrap().to_f64(), -1.0);
        assert!(c.d1.intersect(&c.k).unwrap().is_zero() && c.d2.intersect(&c.k).unwrap().is_zero());
        assert_eq!(c.q, BinaryForm::new(2, 8, 2));
        let gv = IntMatrix::from_rows(&[[2, 4], [4, 2]]).unwrap();
        assert_eq!(c.phi.transpose().mul(&gv).unwrap().mul(&c.phi).unwrap(), gv);
        assert_eq!(c.lambda, Lambda::Exact("7 + 4*sqrt(3)".parse().unwrap()));
        assert!(mod2_congruence(&c.g_adapted));
        assert!(!mod2_congruence(&c.g));
        assert_eq!(c.g_adapted.lattice.signature(), (1, 10));
        // phi itself is not congruent to the identity
        let a = c.g_adapted.lattice.clone();
        let p = LatticeIsometry::new(&a, c.phi.direct_sum(&IntMatrix::identity(9))).unwrap();
        assert!(!mod2_congruence(&p));
        let h = PicManClass::h(&c.lattice);
        assert!(ample_cone_member(&h, &c.d1, Some(&c.k)).unwrap());
        assert_eq!(ample_cone_member(&h, &c.k, Some(&c.k)), Err(Error::NotInW));
        assert_eq!(pell_isometry(&c.q).unwrap().lambda.pow(2), *c.lambda.as_exact().unwrap());
        assert_eq!(c.phi.trace(), BigInt::from(4));
        assert!(extend_by_identity(&c.lattice.gram, &[classes().1, classes().2], &c.phi).is_err());
    }
}
