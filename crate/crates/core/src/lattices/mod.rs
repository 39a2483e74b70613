//! Neron-Severi lattices of a few surfaces and their integer isometries.

pub mod coble;
pub mod kummer;
pub mod pell;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cremona::growth::classify_matrix;
use crate::cremona::IsometryClass;
use crate::error::{domain, Error, Result};
use crate::linalg::{signature, IntMatrix};
use crate::picard_manin::{AmbientLattice, PicManClass};
use crate::scalar::{QuadScalar, DEFAULT_PRECISION};

pub use coble::{coble_construction, CobleRecord};
pub use kummer::{kummer_action, kummer_lattice, HermitianClass};
pub use pell::{pell_isometry, BinaryForm, PellSolution};

/// An integer matrix preserving a lattice's form; columns are images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIsometry {
    pub lattice: Arc<AmbientLattice>,
    pub matrix: IntMatrix,
}

impl LatticeIsometry {
    pub fn new(lattice: &Arc<AmbientLattice>, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != lattice.rank() || matrix.cols() != lattice.rank() {
            return Err(Error::Incompatible("matrix size differs from the lattice rank".into()));
        }
        if matrix.transpose().mul(&lattice.gram)?.mul(&matrix)? != lattice.gram {
            return Err(domain("matrix does not preserve the intersection form"));
        }
        Ok(LatticeIsometry { lattice: lattice.clone(), matrix })
    }

    pub fn identity(lattice: &Arc<AmbientLattice>) -> Self {
        LatticeIsometry { lattice: lattice.clone(), matrix: IntMatrix::identity(lattice.rank()) }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(v)
    }

    /// Rank of the fixed sublattice.
    pub fn fixed_rank(&self) -> usize {
        let n = self.lattice.rank();
        n - self.matrix.sub(&IntMatrix::identity(n)).rank()
    }
}

/// Exact signature of a symmetric integer matrix.
pub fn lattice_signature(gram: &IntMatrix) -> Result<(usize, usize)> {
    signature(gram)
}

pub fn classify_lattice_isometry(iso: &LatticeIsometry) -> Result<IsometryClass> {
    let (p, q) = iso.lattice.signature();
    if p != 1 {
        return Err(domain(format!("signature ({p}, {q}) is not hyperbolic")));
    }
    classify_matrix(&iso.matrix, DEFAULT_PRECISION)
}

/// `v^2 > 0` and `v . h > 0`, after checking `v . K = 0` when `K` is given.
pub fn ample_cone_member(h: &PicManClass, v: &PicManClass, k: Option<&PicManClass>) -> Result<bool> {
    if let Some(k) = k {
        if !v.intersect(k)?.is_zero() {
            return Err(Error::NotInW);
        }
    }
    Ok(v.square()?.is_positive() && v.intersect(h)?.is_positive())
}

/// Whether the matrix is the identity modulo 2.
pub fn mod2_congruence(iso: &LatticeIsometry) -> bool {
    iso.matrix.sub(&IntMatrix::identity(iso.lattice.rank())).reduce(2).is_zero()
}

pub(crate) fn int_class(lattice: &Arc<AmbientLattice>, v: &[BigInt]) -> PicManClass {
    let coeffs = v.iter().map(|c| QuadScalar::rational(c.clone().into())).collect();
    PicManClass::from_lattice_vector(lattice, coeffs).unwrap()
}

pub(crate) fn dot(gram: &IntMatrix, u: &[BigInt], v: &[BigInt]) -> BigInt {
    let gv = gram.mul_vec(v);
    u.iter().zip(&gv).map(|(a, b)| a * b).sum()
}
