//! Finite metric trees with exact rational edge lengths.

use num_traits::{Signed, Zero};

use crate::error::{domain, Result};
use crate::scalar::Rational;

/// A point of a finite tree: a vertex, or an interior point of an edge at
/// `offset` from `u` towards `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreePoint {
    Vertex(usize),
    OnEdge { u: usize, v: usize, offset: Rational },
}

#[derive(Clone, Debug)]
pub struct FiniteTree {
    adj: Vec<Vec<(usize, Rational)>>,
    parent: Vec<Option<(usize, Rational)>>,
    depth: Vec<Rational>,
    level: Vec<usize>,
}

impl FiniteTree {
    /// Builds a tree from an edge list; fails unless the graph is a tree with
    /// positive weights.
    pub fn new(vertices: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        if vertices == 0 {
            return Err(domain("a tree needs at least one vertex"));
        }
        if edges.len() + 1 != vertices {
            return Err(domain(format!(
                "{} edges cannot form a tree on {vertices} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); vertices];
        for (u, v, w) in edges {
            if *u >= vertices || *v >= vertices || u == v {
                return Err(domain(format!("bad edge ({u}, {v})")));
            }
            if !w.is_positive() {
                return Err(domain(format!("edge ({u}, {v}) has nonpositive length")));
            }
            adj[*u].push((*v, w.clone()));
            adj[*v].push((*u, w.clone()));
        }
        let mut parent = vec![None; vertices];
        let mut depth = vec![Rational::zero(); vertices];
        let mut level = vec![0; vertices];
        let mut seen = vec![false; vertices];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for (v, w) in &adj[u] {
                if !seen[*v] {
                    seen[*v] = true;
                    parent[*v] = Some((u, w.clone()));
                    depth[*v] = &depth[u] + w;
                    level[*v] = level[u] + 1;
                    stack.push(*v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(domain("tree is not connected"));
        }
        Ok(FiniteTree { adj, parent, depth, level })
    }

    /// A star with one center (vertex 0) and the given arm lengths.
    pub fn star(arms: &[Rational]) -> Result<Self> {
        let edges: Vec<_> = arms.iter().enumerate().map(|(i, w)| (0, i + 1, w.clone())).collect();
        Self::new(arms.len() + 1, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for (v, w) in nb {
                if u < *v {
                    out.push((u, *v, w.clone()));
                }
            }
        }
        out
    }

    pub fn edge_length(&self, u: usize, v: usize) -> Option<&Rational> {
        self.adj.get(u)?.iter().find(|(x, _)| *x == v).map(|(_, w)| w)
    }

    fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.level[u] > self.level[v] {
            u = self.parent[u].as_ref().unwrap().0;
        }
        while self.level[v] > self.level[u] {
            v = self.parent[v].as_ref().unwrap().0;
        }
        while u != v {
            u = self.parent[u].as_ref().unwrap().0;
            v = self.parent[v].as_ref().unwrap().0;
        }
        u
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> Rational {
        let w = self.lca(u, v);
        &self.depth[u] + &self.depth[v] - &self.depth[w] * Rational::from_integer(2.into())
    }

    /// Vertices on the path from `u` to `v`, both included.
    pub fn vertex_path(&self, u: usize, v: usize) -> Vec<usize> {
        let w = self.lca(u, v);
        let mut left = vec![u];
        let mut x = u;
        while x != w {
            x = self.parent[x].as_ref().unwrap().0;
            left.push(x);
        }
        let mut right = Vec::new();
        let mut y = v;
        while y != w {
            right.push(y);
            y = self.parent[y].as_ref().unwrap().0;
        }
        left.extend(right.into_iter().rev());
        left
    }

    /// Validates a point and brings it to canonical form.
    pub fn normalize(&self, p: &TreePoint) -> Result<TreePoint> {
        match p {
            TreePoint::Vertex(u) if *u < self.vertex_count() => Ok(p.clone()),
            TreePoint::Vertex(u) => Err(domain(format!("vertex {u} not in tree"))),
            TreePoint::OnEdge { u, v, offset } => {
                let len = self
                    .edge_length(*u, *v)
                    .ok_or_else(|| domain(format!("({u}, {v}) is not an edge")))?;
                if offset.is_negative() || offset > len {
                    return Err(domain("edge offset out of range"));
                }
                if offset.is_zero() {
                    Ok(TreePoint::Vertex(*u))
                } else if offset == len {
                    Ok(TreePoint::Vertex(*v))
                } else {
                    Ok(p.clone())
                }
            }
        }
    }

    /// Endpoints of the edge carrying `p`, with the distance from `p` to each.
    fn anchors(&self, p: &TreePoint) -> Vec<(usize, Rational)> {
        match p {
            TreePoint::Vertex(u) => vec![(*u, Rational::zero())],
            TreePoint::OnEdge { u, v, offset } => {
                let len = self.edge_length(*u, *v).unwrap();
                vec![(*u, offset.clone()), (*v, len - offset)]
            }
        }
    }

    fn same_edge(&self, p: &TreePoint, q: &TreePoint) -> Option<Rational> {
        if let (
            TreePoint::OnEdge { u, v, offset: s },
            TreePoint::OnEdge { u: u2, v: v2, offset: t },
        ) = (p, q)
        {
            if u == u2 && v == v2 {
                return Some((s - t).abs());
            }
            if u == v2 && v == u2 {
                let len = self.edge_length(*u, *v).unwrap();
                return Some((s - (len - t)).abs());
            }
        }
        None
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Result<Rational> {
        let p = self.normalize(p)?;
        let q = self.normalize(q)?;
        if let Some(d) = self.same_edge(&p, &q) {
            return Ok(d);
        }
        let mut best: Option<Rational> = None;
        for (a, da) in self.anchors(&p) {
            for (b, db) in self.anchors(&q) {
                let d = &da + self.vertex_distance(a, b) + &db;
                if best.as_ref().map_or(true, |x| &d < x) {
                    best = Some(d);
                }
            }
        }
        Ok(best.unwrap())
    }

    /// The point of the segment `[p, q]` at distance `s` from `p`.
    pub fn point_along(&self, p: &TreePoint, q: &TreePoint, s: &Rational) -> Result<TreePoint> {
        let p = self.normalize(p)?;
        let q = self.normalize(q)?;
        let total = self.distance(&p, &q)?;
        if s.is_negative() || s > &total {
            return Err(domain("parameter outside the segment"));
        }
        if let (Some(_), TreePoint::OnEdge { u, v, offset }) = (self.same_edge(&p, &q), &p) {
            let target = match &q {
                TreePoint::OnEdge { u: u2, offset: t, .. } if u2 == u => t.clone(),
                TreePoint::OnEdge { offset: t, .. } => self.edge_length(*u, *v).unwrap() - t,
                TreePoint::Vertex(_) => unreachable!(),
            };
            let off = if &target >= offset { offset + s } else { offset - s };
            return self.normalize(&TreePoint::OnEdge { u: *u, v: *v, offset: off });
        }
        // Anchor vertices realizing the distance on each side.
        let mut choice = None;
        for (a, da) in self.anchors(&p) {
            for (b, db) in self.anchors(&q) {
                if &da + self.vertex_distance(a, b) + &db == total {
                    choice = Some((a, da.clone(), b, db.clone()));
                }
            }
        }
        let (a, da, b, db) = choice.unwrap();
        if s <= &da {
            return self.toward(&p, a, s);
        }
        let mut walked = da;
        let path = self.vertex_path(a, b);
        for w in path.windows(2) {
            let len = self.edge_length(w[0], w[1]).unwrap().clone();
            if s <= &(&walked + &len) {
                let off = s - &walked;
                return self.normalize(&TreePoint::OnEdge { u: w[0], v: w[1], offset: off });
            }
            walked += len;
        }
        let remaining = &total - s;
        debug_assert!(remaining <= db);
        self.toward(&q, b, &remaining)
    }

    /// From `p` move `s` towards the endpoint `a` of its edge.
    fn toward(&self, p: &TreePoint, a: usize, s: &Rational) -> Result<TreePoint> {
        match p {
            TreePoint::Vertex(_) => Ok(p.clone()),
            TreePoint::OnEdge { u, v, offset } => {
                let off = if *u == a { offset - s } else { offset + s };
                self.normalize(&TreePoint::OnEdge { u: *u, v: *v, offset: off })
            }
        }
    }
}
