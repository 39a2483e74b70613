//! The hyperboloid model of hyperbolic n-space with certified coordinates.

use std::cmp::Ordering;

use crate::error::{domain, Error, Result};
use crate::scalar::{HPReal, Rational};

/// `H^n` inside Minkowski space `R^(1,n)`, computed at `prec` bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperboloid {
    dim: usize,
    prec: u32,
}

/// `x0 y0 - sum xi yi`.
pub fn lorentz(x: &[HPReal], y: &[HPReal]) -> HPReal {
    let mut acc = x[0].mul(&y[0]);
    for (a, b) in x[1..].iter().zip(&y[1..]) {
        acc = acc.sub(&a.mul(b));
    }
    acc
}

fn lin(a: &HPReal, x: &[HPReal], b: &HPReal, y: &[HPReal]) -> Vec<HPReal> {
    x.iter().zip(y).map(|(p, q)| a.mul(p).add(&b.mul(q))).collect()
}

fn scale(a: &HPReal, x: &[HPReal]) -> Vec<HPReal> {
    x.iter().map(|p| a.mul(p)).collect()
}

/// Unit-speed geodesic `t -> cosh t p + sinh t v` from `p`, of length `len`.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub p: Vec<HPReal>,
    /// Unit tangent, or `None` for a degenerate segment.
    pub v: Option<Vec<HPReal>>,
    pub len: HPReal,
}

impl Geodesic {
    pub fn at(&self, t: &HPReal) -> Result<Vec<HPReal>> {
        match &self.v {
            None => Ok(self.p.clone()),
            Some(v) => Ok(lin(&t.cosh()?, &self.p, &t.sinh()?, v)),
        }
    }
}

impl Hyperboloid {
    pub fn new(dim: usize, prec: u32) -> Result<Self> {
        if dim < 2 {
            return Err(domain("hyperboloid dimension must be at least 2"));
        }
        Ok(Hyperboloid { dim, prec })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    fn int(&self, n: i64) -> HPReal {
        HPReal::from_int(n, self.prec)
    }

    /// The base vector `u = (1, 0, ..., 0)`.
    pub fn origin(&self) -> Vec<HPReal> {
        let mut x = vec![self.int(0); self.dim + 1];
        x[0] = self.int(1);
        x
    }

    /// Lifts a spatial vector `v` to `(sqrt(1 + |v|^2), v)`.
    pub fn from_spatial(&self, v: &[HPReal]) -> Result<Vec<HPReal>> {
        if v.len() != self.dim {
            return Err(domain("spatial vector of wrong length"));
        }
        let mut n = self.int(1);
        for c in v {
            n = n.add(&c.sqr());
        }
        let mut x = vec![n.sqrt()?];
        x.extend(v.iter().cloned());
        Ok(x)
    }

    pub fn from_rational_spatial(&self, v: &[Rational]) -> Result<Vec<HPReal>> {
        let v: Vec<_> = v.iter().map(|q| HPReal::from_rational(q, self.prec)).collect();
        self.from_spatial(&v)
    }

    /// Point at distance `r` from the origin in the unit direction `dir`.
    pub fn polar(&self, dir: &[Rational], r: &HPReal) -> Result<Vec<HPReal>> {
        if dir.len() != self.dim {
            return Err(domain("direction of wrong length"));
        }
        let (c, s) = (r.cosh()?, r.sinh()?);
        let mut x = vec![c];
        x.extend(dir.iter().map(|q| s.mul(&HPReal::from_rational(q, self.prec))));
        Ok(x)
    }

    /// Membership: `<x|x> = 1` up to the coordinate error, and `x0 > 0`.
    pub fn check(&self, x: &[HPReal]) -> Result<()> {
        if x.len() != self.dim + 1 {
            return Err(domain(format!("expected {} coordinates, got {}", self.dim + 1, x.len())));
        }
        if x[0].sign() != Some(Ordering::Greater) {
            return Err(domain("point is not on the upper sheet"));
        }
        let q = lorentz(x, x).sub(&self.int(1));
        if q.sign().is_some_and(|s| s != Ordering::Equal) && q.abs().to_f64() > self.tolerance() {
            return Err(domain(format!("<x|x> - 1 = {q} is not zero")));
        }
        Ok(())
    }

    /// Residual `|<x|x> - 1|` accepted for points with no certified enclosure of 1.
    pub fn tolerance(&self) -> f64 {
        2f64.powi(-(self.prec as i32) / 2)
    }

    pub fn norm_defect(&self, x: &[HPReal]) -> HPReal {
        lorentz(x, x).sub(&self.int(1))
    }

    pub fn distance(&self, x: &[HPReal], y: &[HPReal]) -> Result<HPReal> {
        self.check(x)?;
        self.check(y)?;
        lorentz(x, y).acosh()
    }

    pub fn geodesic(&self, p: &[HPReal], q: &[HPReal]) -> Result<Geodesic> {
        self.check(p)?;
        self.check(q)?;
        let c = lorentz(p, q);
        let len = c.acosh()?;
        let s2 = c.sqr().sub(&self.int(1));
        if s2.sign() != Some(Ordering::Greater) {
            return Ok(Geodesic { p: p.to_vec(), v: None, len });
        }
        let s = s2.sqrt()?;
        let w = lin(&self.int(1), q, &c.neg(), p);
        let v = scale(&s.recip()?, &w);
        Ok(Geodesic { p: p.to_vec(), v: Some(v), len })
    }

    /// Closest point of the full geodesic line through `a` and `b`, with the
    /// coefficients of the unnormalized foot `c1 a + c2 b`.
    pub fn project_to_line(
        &self,
        x: &[HPReal],
        a: &[HPReal],
        b: &[HPReal],
    ) -> Result<(Vec<HPReal>, HPReal, HPReal)> {
        self.check(x)?;
        self.check(a)?;
        self.check(b)?;
        let c = lorentz(a, b);
        let det = self.int(1).sub(&c.sqr());
        if det.sign() != Some(Ordering::Less) {
            return Err(domain("degenerate geodesic: endpoints coincide"));
        }
        let (xa, xb) = (lorentz(x, a), lorentz(x, b));
        let c1 = xa.sub(&c.mul(&xb)).div(&det)?;
        let c2 = xb.sub(&c.mul(&xa)).div(&det)?;
        let w = lin(&c1, a, &c2, b);
        let n = lorentz(&w, &w).sqrt()?;
        Ok((scale(&n.recip()?, &w), c1, c2))
    }

    /// Closest point of the segment `[a, b]`.
    pub fn project_to_segment(&self, x: &[HPReal], a: &[HPReal], b: &[HPReal]) -> Result<Vec<HPReal>> {
        let (z, c1, c2) = match self.project_to_line(x, a, b) {
            Ok(v) => v,
            Err(Error::DomainError(_)) => return Ok(a.to_vec()),
            Err(e) => return Err(e),
        };
        // Distance to the line is convex along it, so off-segment feet clamp to the
        // nearer endpoint, which is the one with the positive coefficient.
        if c1.sign() == Some(Ordering::Less) {
            return Ok(b.to_vec());
        }
        if c2.sign() == Some(Ordering::Less) {
            return Ok(a.to_vec());
        }
        Ok(z)
    }

    /// Lorentz-orthonormal basis of the tangent space at `x`: the images of the
    /// coordinate vectors under the pure boost taking the origin to `x`.
    pub fn tangent_basis(&self, x: &[HPReal]) -> Result<Vec<Vec<HPReal>>> {
        self.check(x)?;
        let scale = x[0].add(&self.int(1)).recip()?;
        let mut basis = Vec::with_capacity(self.dim);
        for k in 1..=self.dim {
            let f = x[k].mul(&scale);
            let mut b = vec![x[k].clone()];
            for i in 1..=self.dim {
                let mut c = f.mul(&x[i]);
                if i == k {
                    c = c.add(&self.int(1));
                }
                b.push(c);
            }
            basis.push(b);
        }
        Ok(basis)
    }

    /// `exp_x(r * sum dir_i e_i)` for the tangent basis at `x` and a unit `dir`.
    pub fn exp_map(&self, x: &[HPReal], dir: &[Rational], r: &HPReal) -> Result<Vec<HPReal>> {
        let basis = self.tangent_basis(x)?;
        let mut v = vec![self.int(0); self.dim + 1];
        for (d, b) in dir.iter().zip(&basis) {
            v = lin(&self.int(1), &v, &HPReal::from_rational(d, self.prec), b);
        }
        Ok(lin(&r.cosh()?, x, &r.sinh()?, &v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::{int, rat};

    fn h2() -> Hyperboloid {
        Hyperboloid::new(2, 128).unwrap()
    }

    #[test]
    fn unit_geodesic_distance() {
        let h = h2();
        let one = HPReal::from_int(1, 128);
        let y = h.polar(&[int(1), int(0)], &one).unwrap();
        let d = h.distance(&h.origin(), &y).unwrap();
        assert!(d.contains(&int(1)));
        assert!(d.error_f64() < 1e-30);
    }

    #[test]
    fn lorentz_product_two() {
        // <u|y> = 2 for y = (2, sqrt 3, 0)
        let h = h2();
        let y = h.from_rational_spatial(&[int(0), int(0)]).unwrap();
        assert!(h.distance(&y, &y).unwrap().to_f64().abs() < 1e-15);
        let s3 = HPReal::from_int(3, 128).sqrt().unwrap();
        let y = h.from_spatial(&[s3, HPReal::from_int(0, 128)]).unwrap();
        let d = h.distance(&h.origin(), &y).unwrap();
        assert!((d.to_f64() - 1.3169578969248166).abs() < 1e-15);
    }

    #[test]
    fn geodesic_endpoints() {
        let h = h2();
        let p = h.from_rational_spatial(&[rat(1, 2), int(2)]).unwrap();
        let q = h.from_rational_spatial(&[int(-3), rat(1, 7)]).unwrap();
        let g = h.geodesic(&p, &q).unwrap();
        let end = g.at(&g.len).unwrap();
        assert!(h.distance(&end, &q).unwrap().to_f64() < 1e-12);
        let half = g.at(&g.len.shl(-1)).unwrap();
        let d1 = h.distance(&p, &half).unwrap();
        assert!(d1.sub(&g.len.shl(-1)).abs().to_f64() < 1e-20);
    }

    #[test]
    fn symmetric_projection_is_midpoint() {
        let h = h2();
        let r = HPReal::from_int(2, 128);
        let a = h.polar(&[int(1), int(0)], &r).unwrap();
        let b = h.polar(&[int(-1), int(0)], &r).unwrap();
        let x = h.polar(&[int(0), int(1)], &HPReal::from_int(3, 128)).unwrap();
        let z = h.project_to_segment(&x, &a, &b).unwrap();
        assert!(h.distance(&z, &h.origin()).unwrap().to_f64() < 1e-15);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let h = Hyperboloid::new(3, 128).unwrap();
        let x = h.from_rational_spatial(&[int(1), int(-2), rat(1, 3)]).unwrap();
        let b = h.tangent_basis(&x).unwrap();
        for i in 0..3 {
            assert!(lorentz(&b[i], &x).abs().to_f64() < 1e-30);
            for j in 0..3 {
                let want = HPReal::from_int(if i == j { -1 } else { 0 }, 128);
                assert!(lorentz(&b[i], &b[j]).sub(&want).abs().to_f64() < 1e-30);
            }
        }
    }

    #[test]
    fn rejects_off_sheet() {
        let h = h2();
        let bad = vec![HPReal::from_int(2, 128), HPReal::from_int(0, 128), HPReal::from_int(0, 128)];
        assert!(h.distance(&bad, &h.origin()).is_err());
        let neg = h.origin().iter().map(|c| c.neg()).collect::<Vec<_>>();
        assert!(h.check(&neg).is_err());
    }
}
