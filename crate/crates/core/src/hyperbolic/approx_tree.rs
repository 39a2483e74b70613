//! Approximation of at most five points and their base segments by a metric tree.
//!
//! The tree is read off from Gromov products at the base point, closed under
//! chains: `(x|y)' = max over chains x = z0, ..., zk = y of min (zi|zi+1)`. The
//! closed products form an ultrametric on the leaves, which is exactly the data of
//! a rooted tree. Closing only increases products, so tree distances never exceed
//! the original ones.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Real};

use super::space::{HypPoint, MetricSpaceBackend};
use super::tree::{FiniteTree, TreePoint};

#[derive(Clone, Debug)]
pub struct ApproxTree {
    /// Shape of the tree, with edge lengths taken at the midpoints of the certified values.
    pub tree: FiniteTree,
    /// Image of each input point; entry 0 is the root.
    pub images: Vec<TreePoint>,
    /// Vertex path from the root to each image.
    paths: Vec<Vec<usize>>,
    /// Closed Gromov products; the diagonal holds `d(x0, xi)`.
    closed: Vec<Vec<Real>>,
    pub theta: Real,
}

impl ApproxTree {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Height of the branch point of leaves `i` and `j` above the root.
    pub fn branch_height(&self, i: usize, j: usize) -> &Real {
        &self.closed[i][j]
    }

    /// Certified tree distance between the point of `[x0, xi]` at distance `t`
    /// from `x0` and the point of `[x0, xj]` at distance `s`.
    pub fn distance(&self, i: usize, t: &Real, j: usize, s: &Real) -> Real {
        let h = self.closed[i][j].min(t).min(s);
        t.add(s).sub(&h.scale(2))
    }

    pub fn leaf_distance(&self, i: usize, j: usize) -> Real {
        self.distance(i, &self.closed[i][i], j, &self.closed[j][j])
    }

    /// The tree point at height `t` on the root-to-leaf path of `i`.
    pub fn image(&self, i: usize, t: &Rational) -> Result<TreePoint> {
        let path = &self.paths[i];
        let mut h = Rational::zero();
        for w in path.windows(2) {
            let len = self.tree.edge_length(w[0], w[1]).unwrap().clone();
            if t <= &(&h + &len) {
                return self.tree.normalize(&TreePoint::OnEdge { u: w[0], v: w[1], offset: t - &h });
            }
            h += len;
        }
        if t.is_zero() || path.len() == 1 {
            return Ok(TreePoint::Vertex(*path.last().unwrap()));
        }
        Err(Error::DomainError("height beyond the leaf".into()))
    }

    /// `d_T - d` over the inputs and `samples` interior points of each base
    /// segment, together with the largest and smallest values seen.
    pub fn distortion(&self, space: &MetricSpaceBackend, points: &[HypPoint], samples: usize) -> Result<Distortion> {
        let mut marks: Vec<(usize, Real, HypPoint)> = vec![(0, Real::zero(), points[0].clone())];
        for i in 1..points.len() {
            for k in 1..=samples + 1 {
                let f = Rational::new((k as i64).into(), ((samples + 1) as i64).into());
                let p = space.segment_point(&points[0], &points[i], &f)?;
                let t = self.closed[i][i].mul(&Real::Exact(f));
                marks.push((i, t, p));
            }
        }
        let mut out = Distortion { worst_low: None, worst_high: None, pairs: 0 };
        for a in 0..marks.len() {
            for b in a + 1..marks.len() {
                let (i, t, p) = &marks[a];
                let (j, s, q) = &marks[b];
                let d = space.distance(p, q)?;
                let e = self.distance(*i, t, *j, s).sub(&d);
                out.pairs += 1;
                if out.worst_low.as_ref().map_or(true, |w| e.to_f64() < w.to_f64()) {
                    out.worst_low = Some(e.clone());
                }
                if out.worst_high.as_ref().map_or(true, |w| e.to_f64() > w.to_f64()) {
                    out.worst_high = Some(e);
                }
            }
        }
        Ok(out)
    }
}

/// Extremes of `d_T - d` over the sampled pairs.
#[derive(Clone, Debug)]
pub struct Distortion {
    pub worst_low: Option<Real>,
    pub worst_high: Option<Real>,
    pub pairs: usize,
}

impl Distortion {
    /// Every sampled distortion lies in `[-bound, 0]`, unless certainly outside.
    pub fn within(&self, bound: &Real) -> bool {
        let low_ok = self
            .worst_low
            .as_ref()
            .map_or(true, |w| w.cmp_certain(&bound.neg()) != Some(Ordering::Less));
        let high_ok = self
            .worst_high
            .as_ref()
            .map_or(true, |w| w.cmp_certain(&Real::zero()) != Some(Ordering::Greater));
        low_ok && high_ok
    }
}

/// Builds the approximation tree of `points`, based at `points[0]`.
pub fn approximation_tree(space: &MetricSpaceBackend, points: &[HypPoint]) -> Result<ApproxTree> {
    let n = points.len();
    if n > 5 {
        return Err(Error::UnsupportedSize(format!("{n} points; at most 5 are supported")));
    }
    if n < 2 {
        return Err(Error::UnsupportedSize("at least 2 points are needed".into()));
    }
    let x0 = &points[0];
    let mut g = vec![vec![Real::zero(); n]; n];
    for i in 1..n {
        g[i][i] = space.distance(x0, &points[i])?;
        for j in 1..i {
            let p = space.gromov_product(&points[i], &points[j], x0)?;
            g[i][j] = p.clone();
            g[j][i] = p;
        }
    }
    // Max-min closure over the leaves.
    for k in 1..n {
        for i in 1..n {
            for j in (1..n).filter(|&j| j != i) {
                let via = g[i][k].min(&g[k][j]);
                if via.to_f64() > g[i][j].to_f64() {
                    g[i][j] = g[i][j].max(&via);
                }
            }
        }
    }
    let mid = |r: &Real| -> Rational {
        match r {
            Real::Exact(q) => q.clone(),
            Real::Approx(h) => h.midpoint().max(Rational::zero()),
        }
    };
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    let mut paths: Vec<Vec<usize>> = vec![vec![0]];
    let mut heights: Vec<Rational> = vec![Rational::zero()];
    let mut count = 1usize;
    let len_of = |edges: &Vec<(usize, usize, Rational)>, a: usize, b: usize| -> Rational {
        edges.iter().find(|(u, v, _)| (*u == a && *v == b) || (*u == b && *v == a)).unwrap().2.clone()
    };
    for i in 1..n {
        let hi = mid(&g[i][i]);
        // Attach to the earlier leaf sharing the longest stem.
        let (j, h) = if i == 1 {
            (0, Rational::zero())
        } else {
            let j = (1..i).max_by(|&a, &b| mid(&g[i][a]).cmp(&mid(&g[i][b]))).unwrap();
            let h = mid(&g[i][j]).min(heights[j].clone()).min(hi.clone());
            (j, h)
        };
        // Locate height h on the path of j, subdividing an edge if needed.
        let pj = paths[j].clone();
        let mut acc = Rational::zero();
        let mut branch = None;
        let mut prefix = vec![pj[0]];
        if h.is_zero() {
            branch = Some(pj[0]);
        } else {
            for w in pj.windows(2) {
                let len = len_of(&edges, w[0], w[1]);
                let next = &acc + &len;
                if h == next {
                    prefix.push(w[1]);
                    branch = Some(w[1]);
                    break;
                }
                if h < next {
                    let nv = count;
                    count += 1;
                    let off = &h - &acc;
                    edges.retain(|(u, v, _)| !((*u == w[0] && *v == w[1]) || (*u == w[1] && *v == w[0])));
                    edges.push((w[0], nv, off.clone()));
                    edges.push((nv, w[1], &len - &off));
                    for p in paths.iter_mut() {
                        if let Some(pos) = p.windows(2).position(|e| e == [w[0], w[1]]) {
                            p.insert(pos + 1, nv);
                        }
                    }
                    prefix.push(nv);
                    branch = Some(nv);
                    break;
                }
                acc = next;
                prefix.push(w[1]);
            }
        }
        let b = branch.unwrap_or(*pj.last().unwrap());
        let rest = &hi - &h;
        if rest > Rational::zero() {
            let leaf = count;
            count += 1;
            edges.push((b, leaf, rest));
            prefix.push(leaf);
        }
        paths.push(prefix);
        heights.push(hi);
    }
    let tree = FiniteTree::new(count, &edges)?;
    let images = paths.iter().map(|p| TreePoint::Vertex(*p.last().unwrap())).collect();
    Ok(ApproxTree { tree, images, paths, closed: g, theta: space.theta() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::hyperboloid::Hyperboloid;
    use crate::scalar::rational::{int, rat};

    #[test]
    fn tree_inputs_are_reproduced() {
        let t = FiniteTree::new(
            6,
            &[(0, 1, int(2)), (1, 2, int(3)), (1, 3, rat(1, 2)), (0, 4, int(1)), (4, 5, int(4))],
        )
        .unwrap();
        let s = MetricSpaceBackend::FiniteTree(t);
        let pts: Vec<_> = [0, 2, 3, 5, 4].iter().map(|&v| HypPoint::vertex(v)).collect();
        let a = approximation_tree(&s, &pts).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let d = s.distance(&pts[i], &pts[j]).unwrap();
                assert_eq!(a.leaf_distance(i, j).as_exact(), d.as_exact());
                let tij = a.tree.distance(&a.images[i], &a.images[j]).unwrap();
                assert_eq!(Some(&tij), d.as_exact());
            }
        }
        let dist = a.distortion(&s, &pts, 3).unwrap();
        assert!(dist.within(&Real::zero()));
    }

    #[test]
    fn tripod_arms_are_gromov_products() {
        let h = Hyperboloid::new(2, 128).unwrap();
        let s = MetricSpaceBackend::Hyperboloid(h.clone());
        let pts: Vec<_> = [[rat(1, 3), int(2)], [int(-2), int(1)], [int(3), int(-1)]]
            .iter()
            .map(|v| HypPoint::Hyp(h.from_rational_spatial(v).unwrap()))
            .collect();
        let a = approximation_tree(&s, &pts).unwrap();
        let g = s.gromov_product(&pts[1], &pts[2], &pts[0]).unwrap();
        assert!(a.branch_height(1, 2).sub(&g).to_f64().abs() < 1e-20);
        // arm lengths: (x1|x2)_x0, (x0|x2)_x1, (x0|x1)_x2
        let mut arms = vec![
            g,
            s.gromov_product(&pts[0], &pts[2], &pts[1]).unwrap(),
            s.gromov_product(&pts[0], &pts[1], &pts[2]).unwrap(),
        ];
        arms.sort_by(|x, y| x.to_f64().total_cmp(&y.to_f64()));
        let mut lengths: Vec<Rational> = a.tree.edges().into_iter().map(|e| e.2).collect();
        lengths.sort();
        assert_eq!(lengths.len(), 3);
        for (l, w) in lengths.iter().zip(&arms) {
            assert!(w.sub(&Real::Exact(l.clone())).to_f64().abs() < 1e-20);
        }
    }

    #[test]
    fn too_many_points() {
        let t = FiniteTree::star(&vec![int(1); 6]).unwrap();
        let s = MetricSpaceBackend::FiniteTree(t);
        let pts: Vec<_> = (0..6).map(HypPoint::vertex).collect();
        assert!(matches!(approximation_tree(&s, &pts), Err(Error::UnsupportedSize(_))));
    }
}
