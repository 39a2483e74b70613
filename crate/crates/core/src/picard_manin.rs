//! Classes in the Picard-Manin space of a surface: a finite-rank lattice part
//! plus finitely many exceptional classes `[E_p]` over a registry of symbolic
//! base points.
//!
//! The exceptional classes are mutually orthogonal with self-intersection -1
//! and orthogonal to the lattice part, whatever the nearness relations between
//! points are.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::linalg::{signature, IntMatrix};
use crate::scalar::{acosh_hp, HPReal, QuadScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub u32);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How a base point was introduced. Orbit points remember the map (by its
/// registry tag) that produced them; `k` counts iterations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointKind {
    Named(String),
    ForwardOrbit { seed: PointId, k: u32, map: u32 },
    BackwardOrbit { seed: PointId, k: u32, map: u32 },
    InfinitelyNear { parent: PointId },
}

#[derive(Clone, Debug)]
pub struct BasePoint {
    pub id: PointId,
    pub registry: u64,
    pub kind: PointKind,
    pub label: String,
}

impl PartialEq for BasePoint {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id && self.registry == o.registry
    }
}

impl Eq for BasePoint {}

static NEXT_REGISTRY: AtomicU64 = AtomicU64::new(1);

#[derive(Debug)]
struct RegistryInner {
    id: u64,
    points: Vec<BasePoint>,
    orbits: HashMap<(u32, PointId, i64), PointId>,
    maps: u32,
}

/// Shared handle to a point registry. Cloning shares the registry; it must stay
/// on one thread.
#[derive(Clone, Debug)]
pub struct PointRegistry(Rc<RefCell<RegistryInner>>);

impl Default for PointRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl PointRegistry {
    pub fn new() -> Self {
        let id = NEXT_REGISTRY.fetch_add(1, AtomicOrdering::Relaxed);
        PointRegistry(Rc::new(RefCell::new(RegistryInner {
            id,
            points: Vec::new(),
            orbits: HashMap::new(),
            maps: 0,
        })))
    }

    pub fn id(&self) -> u64 {
        self.0.borrow().id
    }

    pub fn same(&self, o: &Self) -> bool {
        Rc::ptr_eq(&self.0, &o.0)
    }

    pub fn len(&self) -> usize {
        self.0.borrow().points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, id: PointId) -> Option<BasePoint> {
        self.0.borrow().points.get(id.0 as usize).cloned()
    }

    pub fn label(&self, id: PointId) -> String {
        self.get(id).map_or_else(|| format!("#{id}"), |p| p.label)
    }

    /// A fresh tag for orbit bookkeeping of a new map.
    pub fn new_map_tag(&self) -> u32 {
        let mut r = self.0.borrow_mut();
        r.maps += 1;
        r.maps
    }

    /// Creates a new point. Orbit kinds created here are not interned; use
    /// [`PointRegistry::orbit`] to get the canonical orbit symbol.
    pub fn fresh_point(&self, kind: PointKind) -> Result<BasePoint> {
        let label = match &kind {
            PointKind::Named(s) => s.clone(),
            PointKind::ForwardOrbit { seed, k, map } => {
                self.check(*seed)?;
                format!("g{map}^{k}({})", self.label(*seed))
            }
            PointKind::BackwardOrbit { seed, k, map } => {
                self.check(*seed)?;
                format!("g{map}^-{k}({})", self.label(*seed))
            }
            PointKind::InfinitelyNear { parent } => {
                self.check(*parent)?;
                format!("{}'", self.label(*parent))
            }
        };
        if matches!(kind, PointKind::ForwardOrbit { k: 0, .. } | PointKind::BackwardOrbit { k: 0, .. }) {
            return Err(domain("orbit points need k >= 1"));
        }
        let mut r = self.0.borrow_mut();
        let p = BasePoint { id: PointId(r.points.len() as u32), registry: r.id, kind, label };
        r.points.push(p.clone());
        Ok(p)
    }

    pub fn named(&self, label: &str) -> BasePoint {
        self.fresh_point(PointKind::Named(label.into())).unwrap()
    }

    fn check(&self, id: PointId) -> Result<()> {
        if (id.0 as usize) < self.len() {
            Ok(())
        } else {
            Err(domain(format!("point {id} is not in the registry")))
        }
    }

    /// `g^k(seed)` for the map tagged `map`, interned so that the same orbit
    /// position always gives the same point. `k = 0` is the seed itself.
    pub fn orbit(&self, seed: &BasePoint, map: u32, k: i64) -> Result<BasePoint> {
        if seed.registry != self.id() {
            return Err(Error::Incompatible("point from another registry".into()));
        }
        if k == 0 {
            return Ok(seed.clone());
        }
        if let Some(id) = self.0.borrow().orbits.get(&(map, seed.id, k)) {
            return Ok(self.get(*id).unwrap());
        }
        let kind = if k > 0 {
            PointKind::ForwardOrbit { seed: seed.id, k: k as u32, map }
        } else {
            PointKind::BackwardOrbit { seed: seed.id, k: (-k) as u32, map }
        };
        let p = self.fresh_point(kind)?;
        self.0.borrow_mut().orbits.insert((map, seed.id, k), p.id);
        Ok(p)
    }

    /// Seed and signed position of an orbit point of `map`, if it is one.
    pub fn orbit_position(&self, p: &BasePoint, map: u32) -> Option<(BasePoint, i64)> {
        match &p.kind {
            PointKind::ForwardOrbit { seed, k, map: m } if *m == map => Some((self.get(*seed)?, *k as i64)),
            PointKind::BackwardOrbit { seed, k, map: m } if *m == map => Some((self.get(*seed)?, -(*k as i64))),
            _ => None,
        }
    }
}

/// A finite-rank lattice with an integer Gram matrix of signature `(1, r - 1)`
/// and a distinguished reference class of positive square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientLattice {
    pub labels: Vec<String>,
    pub gram: IntMatrix,
    pub reference: Vec<BigInt>,
}

impl AmbientLattice {
    /// Lattice whose reference class is the `positive`-th basis vector.
    pub fn new(labels: Vec<String>, gram: IntMatrix, positive: usize) -> Result<Self> {
        if positive >= labels.len() {
            return Err(domain("distinguished index out of range"));
        }
        let mut h = vec![BigInt::zero(); labels.len()];
        h[positive] = BigInt::one();
        Self::with_reference(labels, gram, h)
    }

    pub fn with_reference(labels: Vec<String>, gram: IntMatrix, reference: Vec<BigInt>) -> Result<Self> {
        if gram.rows() != labels.len() || reference.len() != labels.len() {
            return Err(domain("labels, Gram matrix and reference class disagree"));
        }
        if gram.transpose() != gram {
            return Err(domain("Gram matrix is not symmetric"));
        }
        let (p, q) = signature(&gram)?;
        if p != 1 {
            return Err(domain(format!("signature ({p}, {q}) is not hyperbolic")));
        }
        let h2: BigInt = (0..reference.len())
            .flat_map(|i| (0..reference.len()).map(move |j| (i, j)))
            .map(|(i, j)| &reference[i] * gram.get(i, j) * &reference[j])
            .sum();
        if !h2.is_positive() {
            return Err(domain("reference class must have positive square"));
        }
        Ok(AmbientLattice { labels, gram, reference })
    }

    /// The Neron-Severi lattice of the plane: `Z [H]` with `[H]^2 = 1`.
    pub fn plane() -> Arc<Self> {
        Arc::new(AmbientLattice { labels: vec!["H".into()], gram: IntMatrix::identity(1), reference: vec![BigInt::one()] })
    }

    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram).expect("validated at construction")
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn is_plane(&self) -> bool {
        self.rank() == 1 && self.gram.get(0, 0).is_one()
    }
}

/// A finitely supported Picard-Manin class.
#[derive(Clone, Debug)]
pub struct PicManClass {
    lattice: Arc<AmbientLattice>,
    registry: Option<u64>,
    lat: Vec<QuadScalar>,
    exc: BTreeMap<PointId, QuadScalar>,
}

impl PartialEq for PicManClass {
    fn eq(&self, o: &Self) -> bool {
        *self.lattice == *o.lattice && self.lat == o.lat && self.exc == o.exc
    }
}

impl PicManClass {
    pub fn zero(lattice: &Arc<AmbientLattice>) -> Self {
        PicManClass {
            lattice: lattice.clone(),
            registry: None,
            lat: vec![QuadScalar::zero(); lattice.rank()],
            exc: BTreeMap::new(),
        }
    }

    /// The `i`-th basis class of the lattice part.
    pub fn basis(lattice: &Arc<AmbientLattice>, i: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.lat[i] = QuadScalar::one();
        c
    }

    /// The reference class, `[H]` for the plane.
    pub fn h(lattice: &Arc<AmbientLattice>) -> Self {
        let v = lattice.reference.iter().map(|c| QuadScalar::rational(c.clone().into())).collect();
        Self::from_lattice_vector(lattice, v).unwrap()
    }

    pub fn from_integers(lattice: &Arc<AmbientLattice>, v: &[i64]) -> Result<Self> {
        Self::from_lattice_vector(lattice, v.iter().map(|&c| QuadScalar::int(c)).collect())
    }

    pub fn e(lattice: &Arc<AmbientLattice>, p: &BasePoint) -> Self {
        let mut c = Self::zero(lattice);
        c.registry = Some(p.registry);
        c.exc.insert(p.id, QuadScalar::one());
        c
    }

    pub fn from_lattice_vector(lattice: &Arc<AmbientLattice>, v: Vec<QuadScalar>) -> Result<Self> {
        if v.len() != lattice.rank() {
            return Err(Error::Incompatible("vector length differs from the lattice rank".into()));
        }
        Ok(PicManClass { lattice: lattice.clone(), registry: None, lat: v, exc: BTreeMap::new() })
    }

    pub fn lattice(&self) -> &Arc<AmbientLattice> {
        &self.lattice
    }

    pub fn registry(&self) -> Option<u64> {
        self.registry
    }

    pub fn lattice_part(&self) -> &[QuadScalar] {
        &self.lat
    }

    pub fn exceptional_part(&self) -> &BTreeMap<PointId, QuadScalar> {
        &self.exc
    }

    pub fn coefficient(&self, p: PointId) -> QuadScalar {
        self.exc.get(&p).cloned().unwrap_or_else(QuadScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.exc.is_empty() && self.lat.iter().all(QuadScalar::is_zero)
    }

    fn compatible(&self, o: &Self) -> Result<Option<u64>> {
        if *self.lattice != *o.lattice {
            return Err(Error::Incompatible("classes live over different lattices".into()));
        }
        match (self.registry, o.registry) {
            (Some(a), Some(b)) if a != b => Err(Error::Incompatible("classes use different registries".into())),
            (a, b) => Ok(a.or(b)),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let registry = self.compatible(o)?;
        let lat = self.lat.iter().zip(&o.lat).map(|(a, b)| a.try_add(b)).collect::<Result<_>>()?;
        let mut exc = self.exc.clone();
        for (p, c) in &o.exc {
            let v = exc.get(p).map_or_else(|| Ok(c.clone()), |a| a.try_add(c))?;
            if v.is_zero() {
                exc.remove(p);
            } else {
                exc.insert(*p, v);
            }
        }
        Ok(PicManClass { lattice: self.lattice.clone(), registry, lat, exc })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PicManClass {
            lattice: self.lattice.clone(),
            registry: self.registry,
            lat: self.lat.iter().map(|a| -a).collect(),
            exc: self.exc.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &QuadScalar) -> Result<Self> {
        if k.is_zero() {
            return Ok(Self::zero(&self.lattice));
        }
        let lat = self.lat.iter().map(|a| a.try_mul(k)).collect::<Result<_>>()?;
        let exc = self.exc.iter().map(|(p, c)| Ok((*p, c.try_mul(k)?))).collect::<Result<_>>()?;
        Ok(PicManClass { lattice: self.lattice.clone(), registry: self.registry, lat, exc })
    }

    pub fn scale_rational(&self, k: &Rational) -> Self {
        self.scale(&QuadScalar::rational(k.clone())).unwrap()
    }

    /// Adds `c [E_p]`.
    pub fn add_exceptional(&mut self, p: &BasePoint, c: &QuadScalar) -> Result<()> {
        if self.registry.is_some_and(|r| r != p.registry) {
            return Err(Error::Incompatible("point from another registry".into()));
        }
        self.registry = Some(p.registry);
        let v = self.coefficient(p.id).try_add(c)?;
        if v.is_zero() {
            self.exc.remove(&p.id);
        } else {
            self.exc.insert(p.id, v);
        }
        Ok(())
    }

    /// Lattice Gram product minus the sum over shared points of coefficient products.
    pub fn intersect(&self, o: &Self) -> Result<QuadScalar> {
        self.compatible(o)?;
        let g = &self.lattice.gram;
        let mut acc = QuadScalar::zero();
        for (i, a) in self.lat.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.lat.iter().enumerate() {
                let gij = g.get(i, j);
                if gij.is_zero() || b.is_zero() {
                    continue;
                }
                let t = a.try_mul(b)?.scale(&Rational::from_integer(gij.clone()));
                acc = acc.try_add(&t)?;
            }
        }
        let (small, large) = if self.exc.len() <= o.exc.len() { (self, o) } else { (o, self) };
        for (p, c) in &small.exc {
            if let Some(d) = large.exc.get(p) {
                acc = acc.try_sub(&c.try_mul(d)?)?;
            }
        }
        Ok(acc)
    }

    pub fn square(&self) -> Result<QuadScalar> {
        self.intersect(self)
    }

    pub fn to_json(&self, reg: Option<&PointRegistry>) -> Value {
        let lattice: serde_json::Map<String, Value> = self
            .lattice
            .labels
            .iter()
            .zip(&self.lat)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| (l.clone(), Value::String(c.to_string())))
            .collect();
        let exceptional: Vec<Value> = self
            .exc
            .iter()
            .map(|(p, c)| {
                let mut v = json!({"point": p.0, "coeff": c.to_string()});
                if let Some(r) = reg {
                    v["label"] = Value::String(r.label(*p));
                }
                v
            })
            .collect();
        json!({"lattice": lattice, "exceptional": exceptional})
    }

    /// Human-readable form such as `2*H - E[q1] - E[q2]`.
    pub fn render(&self, reg: Option<&PointRegistry>) -> String {
        let mut terms: Vec<(QuadScalar, String)> = Vec::new();
        for (l, c) in self.lattice.labels.iter().zip(&self.lat) {
            if !c.is_zero() {
                terms.push((c.clone(), l.clone()));
            }
        }
        for (p, c) in &self.exc {
            let name = reg.map_or_else(|| format!("#{p}"), |r| r.label(*p));
            terms.push((c.clone(), format!("E[{name}]")));
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (c, name)) in terms.iter().enumerate() {
            let neg = c.is_rational() && c.signum() == std::cmp::Ordering::Less;
            let mag = if neg { -c } else { c.clone() };
            let coeff = if mag.is_rational() && mag.a().is_one() {
                String::new()
            } else if mag.is_rational() {
                format!("{mag}*")
            } else {
                format!("({mag})*")
            };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&coeff);
            s.push_str(name);
        }
        s
    }
}

/// `u^2 = 1` and `u . [H] > 0`, exactly.
pub fn in_hyperbolic_sheet(u: &PicManClass) -> bool {
    in_sheet_within(u, &Rational::zero())
}

/// `|u^2 - 1| <= tol` and `u . [H] > 0`, exactly.
pub fn in_sheet_within(u: &PicManClass, tol: &Rational) -> bool {
    let h = PicManClass::h(u.lattice());
    let (Ok(sq), Ok(uh)) = (u.square(), u.intersect(&h)) else {
        return false;
    };
    let Ok(defect) = sq.try_sub(&QuadScalar::one()) else {
        return false;
    };
    uh.is_positive() && defect.abs().cmp_exact(&QuadScalar::rational(tol.clone())).is_ok_and(|o| o.is_le())
}

/// `acosh(u . v)` for classes on the sheet.
pub fn hyperbolic_distance(u: &PicManClass, v: &PicManClass, prec: u32) -> Result<HPReal> {
    hyperbolic_distance_within(u, v, &Rational::zero(), prec)
}

/// As [`hyperbolic_distance`], for truncated classes whose squares are within `tol` of 1.
pub fn hyperbolic_distance_within(u: &PicManClass, v: &PicManClass, tol: &Rational, prec: u32) -> Result<HPReal> {
    if !in_sheet_within(u, tol) || !in_sheet_within(v, tol) {
        return Err(domain("class is not on the hyperbolic sheet"));
    }
    acosh_hp(&u.intersect(v)?, prec)
}
