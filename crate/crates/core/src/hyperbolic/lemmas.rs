//! Checkers for the thin-geometry lemmas: canoeing chains, obtuse projections,
//! shortening and weak convexity.
//!
//! All conditions are closed inequalities, so a condition counts as failed only
//! when its failure is certified. Segment conditions are tested on evenly
//! spaced samples.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{domain, Result};
use crate::scalar::{Rational, Real};

use super::space::{HypPoint, MetricSpaceBackend};

/// Default number of interior samples per segment.
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaId {
    Canoeing,
    Obtuse,
    ShorterCloser,
    WeakConvexity,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::Canoeing => "canoeing",
            LemmaId::Obtuse => "obtuse",
            LemmaId::ShorterCloser => "shorter_closer",
            LemmaId::WeakConvexity => "weak_convexity",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LemmaVerdict {
    pub lemma: LemmaId,
    pub hypotheses_hold: bool,
    /// `None` when the hypotheses fail and the conclusions were not evaluated.
    pub conclusions_hold: Option<bool>,
    /// Smallest slack seen for each named inequality (negative = violated).
    pub margins: Vec<(String, Real)>,
    pub failure: Option<String>,
}

impl LemmaVerdict {
    fn new(lemma: LemmaId) -> Self {
        LemmaVerdict { lemma, hypotheses_hold: false, conclusions_hold: None, margins: Vec::new(), failure: None }
    }

    fn reject(mut self, why: impl Into<String>) -> Self {
        self.hypotheses_hold = false;
        self.conclusions_hold = None;
        self.failure = Some(why.into());
        self
    }

    /// Hypotheses held and no conclusion was certainly violated.
    pub fn passed(&self) -> bool {
        self.hypotheses_hold && self.conclusions_hold == Some(true)
    }
}

/// Closed hypotheses must not be certainly violated.
fn hyp_ok(x: &Real) -> bool {
    !certainly_neg(x)
}

fn certainly_neg(x: &Real) -> bool {
    x.cmp_certain(&Real::zero()) == Some(Ordering::Less)
}

/// Running minimum of a slack, keyed by name.
struct Slack {
    name: String,
    min: Option<Real>,
    violated: Option<String>,
}

impl Slack {
    fn new(name: &str) -> Self {
        Slack { name: name.into(), min: None, violated: None }
    }

    fn push(&mut self, v: Real, at: impl FnOnce() -> String) {
        if certainly_neg(&v) && self.violated.is_none() {
            self.violated = Some(format!("{} fails at {}", self.name, at()));
        }
        if self.min.as_ref().map_or(true, |m| v.to_f64() < m.to_f64()) {
            self.min = Some(v);
        }
    }
}

fn finish(mut v: LemmaVerdict, slacks: Vec<Slack>) -> LemmaVerdict {
    v.hypotheses_hold = true;
    let mut ok = true;
    for s in slacks {
        if let Some(msg) = s.violated {
            ok = false;
            v.failure.get_or_insert(msg);
        }
        if let Some(m) = s.min {
            v.margins.push((s.name, m));
        }
    }
    v.conclusions_hold = Some(ok);
    v
}

fn fractions(samples: usize) -> impl Iterator<Item = Rational> {
    let n = samples as i64 + 1;
    (0..=n).map(move |k| Rational::new(k.into(), n.into()))
}

/// Canoeing: long legs with small turning products never fold back.
pub fn verify_canoeing(space: &MetricSpaceBackend, chain: &[HypPoint], theta: &Real) -> LemmaVerdict {
    let v = LemmaVerdict::new(LemmaId::Canoeing);
    match canoeing_inner(space, chain, theta, v.clone()) {
        Ok(v) => v,
        Err(e) => v.reject(e.to_string()),
    }
}

fn canoeing_inner(
    space: &MetricSpaceBackend,
    chain: &[HypPoint],
    theta: &Real,
    mut v: LemmaVerdict,
) -> Result<LemmaVerdict> {
    let n = chain.len();
    if n < 2 {
        return Ok(v.reject("chain needs at least two points"));
    }
    let legs: Vec<Real> = (1..n).map(|i| space.distance(&chain[i], &chain[i - 1])).collect::<Result<_>>()?;
    let ten = theta.scale(10);
    for (i, l) in legs.iter().enumerate() {
        if !hyp_ok(&l.sub(&ten)) {
            return Ok(v.reject(format!("leg {} is shorter than 10 theta", i + 1)));
        }
    }
    let three = theta.scale(3);
    for i in 1..n - 1 {
        let g = space.gromov_product(&chain[i + 1], &chain[i - 1], &chain[i])?;
        if !hyp_ok(&three.sub(&g)) {
            return Ok(v.reject(format!("turn at {i} exceeds 3 theta")));
        }
        v.margins.push((format!("turn_{i}"), three.sub(&g)));
    }
    v.margins.clear();
    let mut monotone = Slack::new("d(y0,yj) >= d(y0,yj-1) + 2 theta");
    let mut additive = Slack::new("d(y0,yj) >= sum (legs - 7 theta)");
    let mut close = Slack::new("d(yj,[y0,yn]) <= 5 theta");
    let seven = theta.scale(7);
    let five = theta.scale(5);
    let mut prev = Real::zero();
    let mut sum = Real::zero();
    for j in 1..n {
        let d = space.distance(&chain[0], &chain[j])?;
        monotone.push(d.sub(&prev).sub(&theta.scale(2)), || format!("j={j}"));
        sum = sum.add(&legs[j - 1].sub(&seven));
        additive.push(d.sub(&sum), || format!("j={j}"));
        prev = d;
    }
    for (j, y) in chain.iter().enumerate() {
        let dj = space.distance_to_segment(y, &chain[0], &chain[n - 1])?;
        close.push(five.sub(&dj), || format!("j={j}"));
    }
    Ok(finish(v, vec![monotone, additive, close]))
}

/// Points and segments for the three segment lemmas.
#[derive(Clone, Debug)]
pub enum SegmentConfig {
    /// `a` is claimed to be the projection of `x` on the geodesic through `a` and `b`.
    Obtuse { x: HypPoint, a: HypPoint, b: HypPoint },
    ShorterCloser { x: HypPoint, y: HypPoint, x2: HypPoint, y2: HypPoint, beta: Real },
    WeakConvexity { x: HypPoint, y: HypPoint, x2: HypPoint, y2: HypPoint, beta: Real },
}

pub fn verify_segment_lemma(
    space: &MetricSpaceBackend,
    config: &SegmentConfig,
    theta: &Real,
    samples: usize,
) -> Result<LemmaVerdict> {
    match config {
        SegmentConfig::Obtuse { x, a, b } => obtuse(space, x, a, b, theta, samples),
        SegmentConfig::ShorterCloser { x, y, x2, y2, beta } => {
            shorter_closer(space, [x, y, x2, y2], beta, theta, samples)
        }
        SegmentConfig::WeakConvexity { x, y, x2, y2, beta } => {
            weak_convexity(space, [x, y, x2, y2], beta, theta, samples)
        }
    }
}

fn obtuse(
    space: &MetricSpaceBackend,
    x: &HypPoint,
    a: &HypPoint,
    b: &HypPoint,
    theta: &Real,
    samples: usize,
) -> Result<LemmaVerdict> {
    let v = LemmaVerdict::new(LemmaId::Obtuse);
    let foot = match space.project_to_geodesic(x, a, b) {
        Ok(f) => f,
        Err(_) => return Ok(v.reject("degenerate geodesic")),
    };
    // a must realize the distance to the line; equality is accepted unless certainly false.
    let gap = space.distance(x, a)?.sub(&space.distance(x, &foot)?);
    if gap.cmp_certain(&Real::zero()) == Some(Ordering::Greater) {
        return Ok(v.reject("a is not the projection of x"));
    }
    let mut s = Slack::new("(x|b)_c <= 2 theta");
    let two = theta.scale(2);
    for f in fractions(samples) {
        let c = space.segment_point(a, b, &f)?;
        let g = space.gromov_product(x, b, &c)?;
        s.push(two.sub(&g), || format!("c at fraction {f}"));
    }
    Ok(finish(v, vec![s]))
}

fn endpoint_hypotheses(
    space: &MetricSpaceBackend,
    [x, y, x2, y2]: [&HypPoint; 4],
    beta: &Real,
) -> Result<std::result::Result<(), String>> {
    if !hyp_ok(&beta.sub(&space.distance(x, x2)?)) {
        return Ok(Err("d(x,x') exceeds beta".into()));
    }
    if !hyp_ok(&beta.sub(&space.distance(y, y2)?)) {
        return Ok(Err("d(y,y') exceeds beta".into()));
    }
    Ok(Ok(()))
}

fn shorter_closer(
    space: &MetricSpaceBackend,
    pts: [&HypPoint; 4],
    beta: &Real,
    theta: &Real,
    samples: usize,
) -> Result<LemmaVerdict> {
    let v = LemmaVerdict::new(LemmaId::ShorterCloser);
    let [x, y, x2, y2] = pts;
    if let Err(why) = endpoint_hypotheses(space, pts, beta)? {
        return Ok(v.reject(why));
    }
    let need = beta.scale(2).add(&theta.scale(4));
    if !hyp_ok(&space.distance(x, y)?.sub(&need)) {
        return Ok(v.reject("d(x,y) is below 2 beta + 4 theta"));
    }
    let trim = beta.add(theta);
    let len2 = space.distance(x2, y2)?;
    let inner = len2.sub(&trim.scale(2));
    let mut s = Slack::new("trimmed [x',y'] within 2 theta of [x,y]");
    if inner.cmp_certain(&Real::zero()) == Some(Ordering::Less) {
        // The trimmed segment is empty.
        return Ok(finish(v, vec![s]));
    }
    let two = theta.scale(2);
    for f in fractions(samples) {
        let t = trim.add(&inner.mul(&Real::Exact(f.clone())));
        let z = space.point_at_distance(x2, y2, &t)?;
        let d = space.distance_to_segment(&z, x, y)?;
        s.push(two.sub(&d), || format!("fraction {f}"));
    }
    Ok(finish(v, vec![s]))
}

fn weak_convexity(
    space: &MetricSpaceBackend,
    pts: [&HypPoint; 4],
    beta: &Real,
    theta: &Real,
    samples: usize,
) -> Result<LemmaVerdict> {
    let v = LemmaVerdict::new(LemmaId::WeakConvexity);
    let [x, y, x2, y2] = pts;
    if let Err(why) = endpoint_hypotheses(space, pts, beta)? {
        return Ok(v.reject(why));
    }
    let bound = beta.add(&theta.scale(2));
    let mut s = Slack::new("[x',y'] within beta + 2 theta of [x,y]");
    for f in fractions(samples) {
        let z = space.segment_point(x2, y2, &f)?;
        let d = space.distance_to_segment(&z, x, y)?;
        s.push(bound.sub(&d), || format!("fraction {f}"));
    }
    Ok(finish(v, vec![s]))
}

/// Verdict for a malformed request, for callers that build configs from text.
pub fn malformed(lemma: LemmaId, why: &str) -> crate::error::Error {
    domain(format!("{lemma}: {why}"))
}
