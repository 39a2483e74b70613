//! The two concrete metric spaces behind the geometry checks.

use std::cmp::Ordering;

use crate::error::{domain, Result};
use crate::scalar::{HPReal, Rational, Real};

use super::hyperboloid::Hyperboloid;
use super::tree::{FiniteTree, TreePoint};

#[derive(Clone, Debug)]
pub enum MetricSpaceBackend {
    FiniteTree(FiniteTree),
    Hyperboloid(Hyperboloid),
}

#[derive(Clone, Debug)]
pub enum HypPoint {
    Tree(TreePoint),
    Hyp(Vec<HPReal>),
}

impl HypPoint {
    pub fn vertex(v: usize) -> Self {
        HypPoint::Tree(TreePoint::Vertex(v))
    }
}

impl MetricSpaceBackend {
    pub fn hyperboloid(dim: usize, prec: u32) -> Result<Self> {
        Ok(MetricSpaceBackend::Hyperboloid(Hyperboloid::new(dim, prec)?))
    }

    fn prec(&self) -> u32 {
        match self {
            MetricSpaceBackend::FiniteTree(_) => crate::scalar::DEFAULT_PRECISION,
            MetricSpaceBackend::Hyperboloid(h) => h.precision(),
        }
    }

    /// Hyperbolicity constant: 0 for trees, `log 3` for `H^n`.
    pub fn delta(&self) -> Real {
        match self {
            MetricSpaceBackend::FiniteTree(_) => Real::zero(),
            MetricSpaceBackend::Hyperboloid(h) => Real::ln_int(3, h.precision()).expect("ln 3"),
        }
    }

    /// `4 delta`.
    pub fn theta(&self) -> Real {
        self.delta().scale(4)
    }

    fn tree(&self, p: &HypPoint) -> Result<(&FiniteTree, TreePoint)> {
        match (self, p) {
            (MetricSpaceBackend::FiniteTree(t), HypPoint::Tree(tp)) => Ok((t, t.normalize(tp)?)),
            _ => Err(domain("point does not belong to this tree")),
        }
    }

    fn hyp<'a>(&'a self, p: &'a HypPoint) -> Result<(&'a Hyperboloid, &'a [HPReal])> {
        match (self, p) {
            (MetricSpaceBackend::Hyperboloid(h), HypPoint::Hyp(x)) => Ok((h, x)),
            _ => Err(domain("point does not belong to this hyperboloid")),
        }
    }

    pub fn check(&self, p: &HypPoint) -> Result<()> {
        match self {
            MetricSpaceBackend::FiniteTree(_) => self.tree(p).map(|_| ()),
            MetricSpaceBackend::Hyperboloid(_) => {
                let (h, x) = self.hyp(p)?;
                h.check(x)
            }
        }
    }

    pub fn distance(&self, x: &HypPoint, y: &HypPoint) -> Result<Real> {
        match self {
            MetricSpaceBackend::FiniteTree(t) => {
                let (_, a) = self.tree(x)?;
                let (_, b) = self.tree(y)?;
                Ok(Real::Exact(t.distance(&a, &b)?))
            }
            MetricSpaceBackend::Hyperboloid(h) => {
                let (_, a) = self.hyp(x)?;
                let (_, b) = self.hyp(y)?;
                Ok(Real::Approx(h.distance(a, b)?))
            }
        }
    }

    /// `(y|z)_x = (d(y,x) + d(z,x) - d(y,z)) / 2`.
    pub fn gromov_product(&self, y: &HypPoint, z: &HypPoint, x: &HypPoint) -> Result<Real> {
        let s = self.distance(y, x)?.add(&self.distance(z, x)?).sub(&self.distance(y, z)?);
        s.div(&Real::int(2))
    }

    /// Smallest `delta` for which the four-point inequality holds on this quadruple.
    pub fn four_point_defect(&self, w: &HypPoint, x: &HypPoint, y: &HypPoint, z: &HypPoint) -> Result<Real> {
        let d = |a, b| self.distance(a, b);
        let lhs = d(w, x)?.add(&d(y, z)?);
        let c1 = d(w, y)?.add(&d(x, z)?);
        let c2 = d(w, z)?.add(&d(x, y)?);
        Ok(lhs.sub(&c1.max(&c2)).max(&Real::zero()))
    }

    /// The point of `[a, b]` at distance `s` from `a`. Trees need an exact `s`.
    pub fn point_at_distance(&self, a: &HypPoint, b: &HypPoint, s: &Real) -> Result<HypPoint> {
        match self {
            MetricSpaceBackend::FiniteTree(t) => {
                let (_, p) = self.tree(a)?;
                let (_, q) = self.tree(b)?;
                let s = s.as_exact().ok_or_else(|| domain("tree parameters must be exact"))?;
                Ok(HypPoint::Tree(t.point_along(&p, &q, s)?))
            }
            MetricSpaceBackend::Hyperboloid(h) => {
                let (_, p) = self.hyp(a)?;
                let (_, q) = self.hyp(b)?;
                let g = h.geodesic(p, q)?;
                Ok(HypPoint::Hyp(g.at(&s.to_hp(h.precision()))?))
            }
        }
    }

    /// The point of `[a, b]` at fraction `f` of its length from `a`.
    pub fn segment_point(&self, a: &HypPoint, b: &HypPoint, f: &Rational) -> Result<HypPoint> {
        let len = self.distance(a, b)?;
        let s = len.mul(&Real::Exact(f.clone()));
        // Keep the last sample exactly at the far endpoint.
        if *f == Rational::from_integer(1.into()) {
            return Ok(b.clone());
        }
        self.point_at_distance(a, b, &s)
    }

    /// Projection onto the geodesic through `a` and `b`. In a finite tree the
    /// geodesic is the segment itself.
    pub fn project_to_geodesic(&self, x: &HypPoint, a: &HypPoint, b: &HypPoint) -> Result<HypPoint> {
        match self {
            MetricSpaceBackend::FiniteTree(_) => {
                if self.distance(a, b)?.cmp_certain(&Real::zero()) == Some(Ordering::Equal) {
                    return Err(domain("degenerate geodesic"));
                }
                self.project_to_segment(x, a, b)
            }
            MetricSpaceBackend::Hyperboloid(h) => {
                let (_, xx) = self.hyp(x)?;
                let (_, aa) = self.hyp(a)?;
                let (_, bb) = self.hyp(b)?;
                Ok(HypPoint::Hyp(h.project_to_line(xx, aa, bb)?.0))
            }
        }
    }

    pub fn project_to_segment(&self, x: &HypPoint, a: &HypPoint, b: &HypPoint) -> Result<HypPoint> {
        match self {
            MetricSpaceBackend::FiniteTree(_) => {
                let t = self.gromov_product(x, b, a)?;
                self.point_at_distance(a, b, &t)
            }
            MetricSpaceBackend::Hyperboloid(h) => {
                let (_, xx) = self.hyp(x)?;
                let (_, aa) = self.hyp(a)?;
                let (_, bb) = self.hyp(b)?;
                Ok(HypPoint::Hyp(h.project_to_segment(xx, aa, bb)?))
            }
        }
    }

    pub fn distance_to_segment(&self, x: &HypPoint, a: &HypPoint, b: &HypPoint) -> Result<Real> {
        let z = self.project_to_segment(x, a, b)?;
        self.distance(x, &z)
    }

    pub fn is_tree(&self) -> bool {
        matches!(self, MetricSpaceBackend::FiniteTree(_))
    }

    pub fn precision(&self) -> u32 {
        self.prec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational::int;

    #[test]
    fn tree_products_and_defect() {
        let t = FiniteTree::star(&[int(2), int(3), int(5), int(1)]).unwrap();
        let s = MetricSpaceBackend::FiniteTree(t);
        let v = HypPoint::vertex;
        assert_eq!(s.gromov_product(&v(1), &v(2), &v(0)).unwrap().as_exact(), Some(&int(0)));
        assert_eq!(s.gromov_product(&v(1), &v(1), &v(3)).unwrap().as_exact(), Some(&int(7)));
        let d = s.four_point_defect(&v(1), &v(2), &v(3), &v(4)).unwrap();
        assert_eq!(d.as_exact(), Some(&int(0)));
        assert_eq!(s.four_point_defect(&v(1), &v(1), &v(1), &v(1)).unwrap().as_exact(), Some(&int(0)));
    }

    #[test]
    fn tree_projection() {
        let t = FiniteTree::star(&[int(2), int(3), int(5)]).unwrap();
        let s = MetricSpaceBackend::FiniteTree(t);
        let v = HypPoint::vertex;
        let z = s.project_to_geodesic(&v(3), &v(1), &v(2)).unwrap();
        assert_eq!(s.distance(&z, &v(0)).unwrap().as_exact(), Some(&int(0)));
        assert!(s.project_to_geodesic(&v(3), &v(1), &v(1)).is_err());
    }
}
