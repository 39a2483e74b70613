//! Orbit checks for strong algebraic stability.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::picard_manin::{BasePoint, PointId};

use super::action::{CremonaAction, Symbolic, Variant};

/// Caller-declared coincidences: `g^k(seed) = target`, with `k < 0` for
/// backward orbits.
#[derive(Clone, Debug, Default)]
pub struct CollisionData {
    pub identifications: Vec<(BasePoint, i64, BasePoint)>,
}

impl CollisionData {
    pub fn declare(&mut self, seed: &BasePoint, k: i64, target: &BasePoint) -> &mut Self {
        self.identifications.push((seed.clone(), k, target.clone()));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: String,
    pub k: i64,
    pub j: i64,
    pub point: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub depth: usize,
    pub violation: Option<Violation>,
}

fn fail(depth: usize, condition: &str, k: i64, j: i64, point: String) -> StabilityVerdict {
    StabilityVerdict { stable: false, depth, violation: Some(Violation { condition: condition.into(), k, j, point }) }
}

/// Checks to `depth` that forward orbits of `Ind(g^-1)` and backward orbits of
/// `Ind(g)` avoid the indeterminacy sets and are pairwise disjoint.
pub fn stability_check(a: &CremonaAction, depth: usize, data: &CollisionData) -> Result<StabilityVerdict> {
    if let Variant::Monomial(m) = a.variant() {
        return Ok(monomial_stability(m, depth));
    }
    let base = repeated_factor(a).ok_or_else(|| Error::Unsupported("stability needs a symbolic map or a power of one".into()))?;
    let s = base.symbolic().unwrap();
    let decl: HashMap<(PointId, i64), BasePoint> = data.identifications.iter().map(|(p, k, t)| ((p.id, *k), t.clone())).collect();

    // first (direction, time) at which each point was reached
    let mut seen: HashMap<PointId, (i64, i64)> = HashMap::new();
    for (dir, seeds, avoid) in [(1i64, s.dst, s.src), (-1, s.src, s.dst)] {
        let step = Symbolic { step: s.step * dir, ..clone_symbolic(&s) };
        for seed in seeds {
            let mut cur = seed.clone();
            for k in 0..=depth as i64 {
                if k > 0 {
                    cur = match decl.get(&(seed.id, dir * k)) {
                        Some(t) => t.clone(),
                        None => base.image_point(&step, &cur)?,
                    };
                }
                if avoid.contains(&cur) {
                    let cond = if dir > 0 { "forward orbit of Ind(g^-1) meets Exc(g)" } else { "backward orbit of Ind(g) meets Exc(g^-1)" };
                    return Ok(fail(depth, cond, dir * k, 0, cur.label));
                }
                match seen.get(&cur.id) {
                    Some(&(d0, j)) if d0 != dir => {
                        return Ok(fail(depth, "forward and backward orbits intersect", dir * k, d0 * j, cur.label));
                    }
                    Some(&(_, j)) if j != k => {
                        let cond = if dir > 0 { "forward orbits of Ind(g^-1) intersect" } else { "backward orbits of Ind(g) intersect" };
                        return Ok(fail(depth, cond, dir * k, dir * j, cur.label));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(cur.id, (dir, k));
                    }
                }
            }
        }
    }
    Ok(StabilityVerdict { stable: true, depth, violation: None })
}

fn clone_symbolic<'a>(s: &Symbolic<'a>) -> Symbolic<'a> {
    Symbolic { d: s.d, src: s.src, dst: s.dst, mult: s.mult.clone(), step: s.step, quadratic: s.quadratic }
}

/// The symbolic map `g` when `a` is `g` or a positive power of it.
fn repeated_factor(a: &CremonaAction) -> Option<&CremonaAction> {
    match a.variant() {
        Variant::Composite(v) => {
            let first = v.first()?;
            first.symbolic()?;
            v.iter().all(|b| b.tag() == first.tag() && b.is_inverse() == first.is_inverse()).then_some(first)
        }
        _ => a.symbolic().map(|_| a),
    }
}

/// Coordinate points as 0/1 patterns `[x:y:z]`.
type Pattern = [bool; 3];

fn homogenized(m: &crate::linalg::IntMatrix) -> Option<[[i64; 3]; 3]> {
    let r = m.to_i64_rows()?;
    // dehomogenized components x^a y^b, x^c y^d, 1, each shifted by a common monomial
    let rows = [[r[0][0], r[0][1]], [r[1][0], r[1][1]], [0, 0]];
    let sx = rows.iter().map(|v| -v[0]).max().unwrap().max(0);
    let sy = rows.iter().map(|v| -v[1]).max().unwrap().max(0);
    let deg = rows.iter().map(|v| v[0] + v[1] + sx + sy).max().unwrap();
    Some(rows.map(|v| [v[0] + sx, v[1] + sy, deg - v[0] - v[1] - sx - sy]))
}

fn eval_pattern(exps: &[[i64; 3]; 3], p: Pattern) -> Pattern {
    exps.map(|e| (0..3).all(|i| e[i] == 0 || p[i]))
}

/// Indeterminacy points of a monomial map lie among the coordinate points;
/// orbits are tracked as support patterns.
fn monomial_stability(m: &crate::linalg::IntMatrix, depth: usize) -> StabilityVerdict {
    let (Some(f), Some(g)) = (homogenized(m), m.inverse_unimodular().ok().and_then(|i| homogenized(&i))) else {
        return fail(depth, "matrix entries too large", 0, 0, String::new());
    };
    let coord = |i: usize| {
        let mut p = [false; 3];
        p[i] = true;
        p
    };
    let ind = |e: &[[i64; 3]; 3]| -> Vec<Pattern> { (0..3).map(coord).filter(|&p| eval_pattern(e, p) == [false; 3]).collect() };
    let (ind_f, ind_g) = (ind(&f), ind(&g));
    let name = |p: Pattern| format!("[{}:{}:{}]", p[0] as u8, p[1] as u8, p[2] as u8);
    for (dir, seeds, avoid, exps) in [(1i64, &ind_g, &ind_f, &f), (-1, &ind_f, &ind_g, &g)] {
        for &seed in seeds {
            let mut cur = seed;
            for k in 0..=depth as i64 {
                if k > 0 {
                    cur = eval_pattern(exps, cur);
                }
                if avoid.contains(&cur) {
                    let cond = if dir > 0 { "forward orbit of Ind(g^-1) meets Exc(g)" } else { "backward orbit of Ind(g) meets Exc(g^-1)" };
                    return fail(depth, cond, dir * k, 0, name(cur));
                }
            }
        }
    }
    StabilityVerdict { stable: true, depth, violation: None }
}
