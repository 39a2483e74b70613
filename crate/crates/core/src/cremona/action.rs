//! Cremona transformations acting on Picard-Manin classes.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::linalg::IntMatrix;
use crate::picard_manin::{AmbientLattice, BasePoint, PicManClass, PointKind, PointRegistry};
use crate::scalar::QuadScalar;

use super::monomial::monomial_degree;

#[derive(Clone, Debug)]
pub enum Variant {
    /// Generic quadratic map with base points `p` and `q` for its inverse;
    /// `p_i` is blown up onto the line through the two `q`s other than `q_i`.
    Quadratic { p: [BasePoint; 3], q: [BasePoint; 3] },
    /// Generic de Jonquieres map of degree `d`: multiplicity `d - 1` at
    /// `p[0]` and `q[0]`, 1 at the other `2d - 2` points.
    DeJonquieres { d: u32, p: Vec<BasePoint>, q: Vec<BasePoint> },
    /// Henon-type map of degree `d`: same multiplicities, with base points
    /// arranged in chains of infinitely near points.
    Henon { d: u32, p: Vec<BasePoint>, q: Vec<BasePoint> },
    /// `(x, y) -> (x^a y^b, x^c y^d)`.
    Monomial(IntMatrix),
    /// An isometry of a lattice, acting on coordinate vectors by `v -> M v`.
    Lattice { lattice: Arc<AmbientLattice>, matrix: IntMatrix },
    /// `[a, b, c]` is `a o b o c`: the last factor acts first.
    Composite(Vec<CremonaAction>),
}

#[derive(Clone)]
pub struct CremonaAction {
    variant: Variant,
    registry: PointRegistry,
    tag: u32,
    inverse: bool,
}

impl fmt::Debug for CremonaAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Base-locus data of a symbolic variant, oriented for the direction of action.
pub(crate) struct Symbolic<'a> {
    pub d: u32,
    /// `Ind(f)`
    pub src: &'a [BasePoint],
    /// `Ind(f^-1)`
    pub dst: &'a [BasePoint],
    pub mult: Vec<u32>,
    /// orbit step: +1 for the map, -1 for its inverse
    pub step: i64,
    pub quadratic: bool,
}

fn distinct(points: &[&BasePoint]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[..i].contains(a) {
            return Err(domain(format!("base point {} is repeated", a.label)));
        }
    }
    Ok(())
}

impl CremonaAction {
    fn wrap(variant: Variant, registry: &PointRegistry) -> Self {
        CremonaAction { variant, registry: registry.clone(), tag: registry.new_map_tag(), inverse: false }
    }

    pub fn quadratic(reg: &PointRegistry, p: [BasePoint; 3], q: [BasePoint; 3]) -> Result<Self> {
        let all: Vec<&BasePoint> = p.iter().chain(&q).collect();
        distinct(&all)?;
        if all.iter().any(|b| b.registry != reg.id()) {
            return Err(Error::Incompatible("base point from another registry".into()));
        }
        Ok(Self::wrap(Variant::Quadratic { p, q }, reg))
    }

    /// Quadratic map with fresh named base points `p1..p3`, `q1..q3`.
    pub fn quadratic_generic(reg: &PointRegistry) -> Self {
        let p = [1, 2, 3].map(|i| reg.named(&format!("p{i}")));
        let q = [1, 2, 3].map(|i| reg.named(&format!("q{i}")));
        Self::quadratic(reg, p, q).unwrap()
    }

    pub fn de_jonquieres(reg: &PointRegistry, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(domain("de Jonquieres maps need degree at least 2"));
        }
        let n = 2 * d - 1;
        let p = (0..n).map(|i| reg.named(&format!("p{i}"))).collect();
        let q = (0..n).map(|i| reg.named(&format!("q{i}"))).collect();
        Ok(Self::wrap(Variant::DeJonquieres { d, p, q }, reg))
    }

    pub fn henon(reg: &PointRegistry, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(domain("Henon maps need degree at least 2"));
        }
        let chain = |name: &str| -> Result<Vec<BasePoint>> {
            let mut v = vec![reg.named(name)];
            for _ in 1..2 * d - 1 {
                let parent = v.last().unwrap().id;
                v.push(reg.fresh_point(PointKind::InfinitelyNear { parent })?);
            }
            Ok(v)
        };
        let p = chain("p0")?;
        let q = chain("q0")?;
        Ok(Self::wrap(Variant::Henon { d, p, q }, reg))
    }

    pub fn monomial(reg: &PointRegistry, m: IntMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::UnsupportedSize("monomial maps use 2x2 matrices".into()));
        }
        let det = m.det();
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(domain(format!("monomial matrix has determinant {det}")));
        }
        Ok(Self::wrap(Variant::Monomial(m), reg))
    }

    pub fn lattice_automorphism(reg: &PointRegistry, lattice: &Arc<AmbientLattice>, m: IntMatrix) -> Result<Self> {
        if m.rows() != lattice.rank() || m.cols() != lattice.rank() {
            return Err(Error::Incompatible("matrix size differs from the lattice rank".into()));
        }
        if m.transpose().mul(&lattice.gram)?.mul(&m)? != lattice.gram {
            return Err(domain("matrix does not preserve the intersection form"));
        }
        if m.det().is_zero() {
            return Err(domain("singular matrix"));
        }
        Ok(Self::wrap(Variant::Lattice { lattice: lattice.clone(), matrix: m }, reg))
    }

    pub fn identity(reg: &PointRegistry) -> Self {
        Self::wrap(Variant::Composite(Vec::new()), reg)
    }

    pub fn variant(&self) -> &Variant {
        &self.variant
    }

    pub fn registry(&self) -> &PointRegistry {
        &self.registry
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub(crate) fn symbolic(&self) -> Option<Symbolic<'_>> {
        let (d, p, q, quadratic) = match &self.variant {
            Variant::Quadratic { p, q } => (2, &p[..], &q[..], true),
            Variant::DeJonquieres { d, p, q } | Variant::Henon { d, p, q } => (*d, &p[..], &q[..], false),
            _ => return None,
        };
        let mult = (0..p.len()).map(|i| if i == 0 && !quadratic { d - 1 } else { 1 }).collect();
        let (src, dst, step) = if self.inverse { (q, p, -1) } else { (p, q, 1) };
        Some(Symbolic { d, src, dst, mult, step, quadratic })
    }

    pub fn inverse(&self) -> Result<Self> {
        let variant = match &self.variant {
            Variant::Monomial(m) => Variant::Monomial(m.inverse_unimodular()?),
            Variant::Lattice { lattice, matrix } => {
                Variant::Lattice { lattice: lattice.clone(), matrix: matrix.inverse_unimodular()? }
            }
            Variant::Composite(v) => Variant::Composite(v.iter().rev().map(|a| a.inverse()).collect::<Result<_>>()?),
            _ => return Ok(CremonaAction { inverse: !self.inverse, ..self.clone() }),
        };
        Ok(CremonaAction { variant, ..self.clone() })
    }

    fn factors(&self) -> Vec<CremonaAction> {
        match &self.variant {
            Variant::Composite(v) => v.iter().flat_map(|a| a.factors()).collect(),
            _ => vec![self.clone()],
        }
    }

    /// `self o other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !self.registry.same(&other.registry) {
            return Err(Error::Incompatible("actions use different registries".into()));
        }
        let mut v = self.factors();
        v.extend(other.factors());
        Ok(CremonaAction { variant: Variant::Composite(v), registry: self.registry.clone(), tag: self.tag, inverse: false })
    }

    pub fn power(&self, n: i64) -> Result<Self> {
        if n == 1 {
            return Ok(self.clone());
        }
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let k = n.unsigned_abs();
        let variant = match &base.variant {
            Variant::Monomial(m) => Variant::Monomial(m.pow(k)),
            Variant::Lattice { lattice, matrix } => Variant::Lattice { lattice: lattice.clone(), matrix: matrix.pow(k) },
            _ => {
                let f = base.factors();
                Variant::Composite((0..k).flat_map(|_| f.iter().cloned()).collect())
            }
        };
        Ok(CremonaAction { variant, ..base })
    }

    /// The integer matrix of a monomial map or lattice isometry, composites included.
    pub fn matrix(&self) -> Option<IntMatrix> {
        match &self.variant {
            Variant::Monomial(m) | Variant::Lattice { matrix: m, .. } => Some(m.clone()),
            Variant::Composite(v) if !v.is_empty() => {
                let mut it = v.iter().map(|a| a.matrix());
                let first = it.next()??;
                it.try_fold(first, |acc, m| acc.mul(&m?).ok())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        match &self.variant {
            Variant::Monomial(_) => true,
            Variant::Composite(v) => !v.is_empty() && v.iter().all(|a| a.is_monomial()),
            _ => false,
        }
    }

    pub fn is_lattice(&self) -> bool {
        match &self.variant {
            Variant::Lattice { .. } => true,
            Variant::Composite(v) => !v.is_empty() && v.iter().all(|a| a.is_lattice()),
            _ => false,
        }
    }

    /// The lattice whose distinguished class measures degrees.
    pub fn ambient(&self) -> Arc<AmbientLattice> {
        match &self.variant {
            Variant::Lattice { lattice, .. } => lattice.clone(),
            Variant::Composite(v) => v.first().map_or_else(AmbientLattice::plane, |a| a.ambient()),
            _ => AmbientLattice::plane(),
        }
    }

    /// Image of a point not in `Ind(f)` under a symbolic variant.
    pub(crate) fn image_point(&self, s: &Symbolic<'_>, r: &BasePoint) -> Result<BasePoint> {
        match self.registry.orbit_position(r, self.tag) {
            Some((seed, k)) => self.registry.orbit(&seed, self.tag, k + s.step),
            None => self.registry.orbit(r, self.tag, s.step),
        }
    }

    pub fn pushforward(&self, c: &PicManClass) -> Result<PicManClass> {
        if let Some(r) = c.registry() {
            if r != self.registry.id() {
                return Err(Error::Incompatible("class uses another registry".into()));
            }
        }
        match &self.variant {
            Variant::Composite(v) => v.iter().rev().try_fold(c.clone(), |acc, a| a.pushforward(&acc)),
            Variant::Monomial(_) => Err(Error::UnsupportedClass("monomial maps act on degrees only".into())),
            Variant::Lattice { lattice, matrix } => {
                if **lattice != **c.lattice() {
                    return Err(Error::Incompatible("class lives over another lattice".into()));
                }
                if !c.exceptional_part().is_empty() {
                    return Err(Error::UnsupportedClass("lattice isometries act on lattice parts only".into()));
                }
                let x = c.lattice_part();
                let mut out = Vec::with_capacity(x.len());
                for i in 0..x.len() {
                    let mut acc = QuadScalar::zero();
                    for (j, xj) in x.iter().enumerate() {
                        let mij = matrix.get(i, j);
                        if !mij.is_zero() && !xj.is_zero() {
                            acc = acc.try_add(&xj.scale(&mij.clone().into()))?;
                        }
                    }
                    out.push(acc);
                }
                PicManClass::from_lattice_vector(lattice, out)
            }
            _ => self.push_symbolic(c),
        }
    }

    fn push_symbolic(&self, c: &PicManClass) -> Result<PicManClass> {
        let s = self.symbolic().unwrap();
        let plane = AmbientLattice::plane();
        if **c.lattice() != *plane {
            return Err(Error::Incompatible("Cremona maps act over the plane lattice".into()));
        }
        let h = PicManClass::h(&plane);
        let mut out = PicManClass::zero(&plane);
        // f_*[H] = d[H] - sum m_i [E_{q_i}]
        let push_h = {
            let mut img = h.scale(&QuadScalar::int(s.d as i64))?;
            for (q, m) in s.dst.iter().zip(&s.mult) {
                img.add_exceptional(q, &QuadScalar::int(-(*m as i64)))?;
            }
            img
        };
        let ch = &c.lattice_part()[0];
        if !ch.is_zero() {
            out = out.try_add(&push_h.scale(ch)?)?;
        }
        for (id, coeff) in c.exceptional_part() {
            let r = self.registry.get(*id).ok_or_else(|| domain("unknown point"))?;
            if let Some(i) = s.src.iter().position(|p| *p == r) {
                if !s.quadratic {
                    return Err(Error::UnsupportedClass(format!(
                        "no pushforward rule for E[{}] at an indeterminacy point",
                        r.label
                    )));
                }
                // the line through the other two base points of f^-1
                let mut img = h.clone();
                for (j, q) in s.dst.iter().enumerate() {
                    if j != i {
                        img.add_exceptional(q, &QuadScalar::int(-1))?;
                    }
                }
                out = out.try_add(&img.scale(coeff)?)?;
            } else {
                let img = self.image_point(&s, &r)?;
                out.add_exceptional(&img, coeff)?;
            }
        }
        Ok(out)
    }

    pub fn degree(&self) -> Result<QuadScalar> {
        if self.is_monomial() {
            return Ok(QuadScalar::rational(monomial_degree(&self.matrix().unwrap())?.into()));
        }
        let l = self.ambient();
        let h = PicManClass::h(&l);
        self.pushforward(&h)?.intersect(&h)
    }

    /// `deg(f^k)` for `k = 1..n`.
    pub fn degree_sequence(&self, n: usize) -> Result<Vec<QuadScalar>> {
        if let Some(m) = self.matrix() {
            if self.is_monomial() {
                let mut acc = m.clone();
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    out.push(QuadScalar::rational(monomial_degree(&acc)?.into()));
                    acc = acc.mul(&m)?;
                }
                return Ok(out);
            }
        }
        let l = self.ambient();
        let h = PicManClass::h(&l);
        let mut c = h.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            c = self.pushforward(&c)?;
            out.push(c.intersect(&h)?);
        }
        Ok(out)
    }
}

impl fmt::Display for CremonaAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inv = if self.inverse { "^-1" } else { "" };
        match &self.variant {
            Variant::Quadratic { .. } => write!(f, "quadratic{inv}"),
            Variant::DeJonquieres { d, .. } => write!(f, "dejonquieres(d={d}){inv}"),
            Variant::Henon { d, .. } => write!(f, "henon(d={d}){inv}"),
            Variant::Monomial(m) => write!(f, "monomial({m})"),
            Variant::Lattice { matrix, .. } => write!(f, "lattice({matrix})"),
            Variant::Composite(v) if v.is_empty() => f.write_str("identity"),
            Variant::Composite(v) => {
                let parts: Vec<String> = v.iter().map(|a| a.to_string()).collect();
                write!(f, "compose({})", parts.join("; "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> PicManClass {
        PicManClass::h(&AmbientLattice::plane())
    }

    #[test]
    fn quadratic_rules() {
        let reg = PointRegistry::new();
        let f = CremonaAction::quadratic_generic(&reg);
        let img = f.pushforward(&h()).unwrap();
        assert_eq!(img.render(Some(&reg)), "2*H - E[q1] - E[q2] - E[q3]");
        let Variant::Quadratic { p, .. } = f.variant().clone() else { unreachable!() };
        let e1 = PicManClass::e(&AmbientLattice::plane(), &p[0]);
        assert_eq!(f.pushforward(&e1).unwrap().render(Some(&reg)), "H - E[q2] - E[q3]");
        assert_eq!(f.degree().unwrap(), QuadScalar::int(2));
        assert_eq!(f.power(2).unwrap().degree().unwrap(), QuadScalar::int(4));
        let id = f.compose(&f.inverse().unwrap()).unwrap();
        assert_eq!(id.pushforward(&h()).unwrap(), h());
        let seq = f.degree_sequence(5).unwrap();
        assert_eq!(seq, [2, 4, 8, 16, 32].map(QuadScalar::int));
    }

    #[test]
    fn regular_points_follow_orbits() {
        let reg = PointRegistry::new();
        let f = CremonaAction::quadratic_generic(&reg);
        let Variant::Quadratic { q, .. } = f.variant().clone() else { unreachable!() };
        let e = PicManClass::e(&AmbientLattice::plane(), &q[0]);
        let once = f.pushforward(&e).unwrap();
        let back = f.inverse().unwrap().pushforward(&once).unwrap();
        assert_eq!(back, e);
        let twice = f.pushforward(&once).unwrap();
        assert_eq!(twice.render(Some(&reg)), format!("E[g{}^2(q1)]", f.tag()));
    }

    #[test]
    fn de_jonquieres_rules() {
        let reg = PointRegistry::new();
        let f = CremonaAction::de_jonquieres(&reg, 3).unwrap();
        let img = f.pushforward(&h()).unwrap();
        assert_eq!(img.render(Some(&reg)), "3*H - 2*E[q0] - E[q1] - E[q2] - E[q3] - E[q4]");
        let Variant::DeJonquieres { p, .. } = f.variant().clone() else { unreachable!() };
        let e = PicManClass::e(&AmbientLattice::plane(), &p[1]);
        assert!(matches!(f.pushforward(&e), Err(Error::UnsupportedClass(_))));
        assert_eq!(f.degree_sequence(4).unwrap(), [3, 9, 27, 81].map(QuadScalar::int));
    }

    #[test]
    fn henon_degrees() {
        let reg = PointRegistry::new();
        let f = CremonaAction::henon(&reg, 4).unwrap();
        assert_eq!(f.degree_sequence(3).unwrap(), [4, 16, 64].map(QuadScalar::int));
    }

    #[test]
    fn monomial_degrees() {
        let reg = PointRegistry::new();
        let s = CremonaAction::monomial(&reg, IntMatrix::from_rows(&[[-1, 0], [0, -1]]).unwrap()).unwrap();
        assert_eq!(s.degree_sequence(4).unwrap(), [2, 1, 2, 1].map(QuadScalar::int));
        assert!(CremonaAction::monomial(&reg, IntMatrix::from_rows(&[[2, 0], [0, 1]]).unwrap()).is_err());
        let id = CremonaAction::identity(&reg);
        assert_eq!(id.degree_sequence(3).unwrap(), [1, 1, 1].map(QuadScalar::int));
    }

    #[test]
    fn registry_mismatch() {
        let a = CremonaAction::quadratic_generic(&PointRegistry::new());
        let b = CremonaAction::quadratic_generic(&PointRegistry::new());
        assert!(matches!(a.compose(&b), Err(Error::Incompatible(_))));
    }
}
