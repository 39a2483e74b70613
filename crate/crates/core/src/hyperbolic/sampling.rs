//! Seeded generators of random points, canoe chains and lemma configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::scalar::rational::rat;
use crate::scalar::{HPReal, Rational, Real};

use super::hyperboloid::Hyperboloid;
use super::lemmas::SegmentConfig;
use super::space::HypPoint;

pub struct Sampler {
    pub h: Hyperboloid,
    rng: ChaCha8Rng,
}

/// A rational point of the unit sphere `S^(n-1)`, by inverse stereographic projection.
fn sphere_point(t: &[Rational]) -> Vec<Rational> {
    let one = Rational::from_integer(1.into());
    let n2: Rational = t.iter().map(|x| x * x).sum();
    let den = &n2 + &one;
    let mut out = vec![(&n2 - &one) / &den];
    out.extend(t.iter().map(|x| x * Rational::from_integer(2.into()) / &den));
    out
}

fn lin(a: &HPReal, x: &[HPReal], b: &HPReal, y: &[HPReal]) -> Vec<HPReal> {
    x.iter().zip(y).map(|(p, q)| a.mul(p).add(&b.mul(q))).collect()
}

impl Sampler {
    pub fn new(dim: usize, prec: u32, seed: u64) -> Result<Self> {
        Ok(Sampler { h: Hyperboloid::new(dim, prec)?, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    fn unit_rational(&mut self, k: i64) -> Rational {
        rat(self.rng.gen_range(0..=k), k)
    }

    fn signed_rational(&mut self, bound: i64, k: i64) -> Rational {
        rat(self.rng.gen_range(-bound * k..=bound * k), k)
    }

    /// A uniformly spread rational unit direction in `R^dim`.
    pub fn direction(&mut self) -> Vec<Rational> {
        let n = self.h.dim();
        // Squash a Gaussian-ish spread so that the sphere is covered evenly enough.
        let t: Vec<Rational> = (0..n - 1).map(|_| self.signed_rational(3, 1000)).collect();
        sphere_point(&t)
    }

    /// Point at a random distance in `[0, radius]` from the origin.
    pub fn point(&mut self, radius: f64) -> Result<Vec<HPReal>> {
        let dir = self.direction();
        let r = HPReal::from_f64(self.rng.gen::<f64>() * radius, self.h.precision());
        self.h.polar(&dir, &r)
    }

    pub fn points(&mut self, count: usize, radius: f64) -> Result<Vec<HypPoint>> {
        (0..count).map(|_| self.point(radius).map(HypPoint::Hyp)).collect()
    }

    /// Point at distance `r` from `x` in a random direction.
    pub fn near(&mut self, x: &[HPReal], r: &HPReal) -> Result<Vec<HPReal>> {
        let dir = self.direction();
        self.h.exp_map(x, &dir, r)
    }

    /// A chain in `H^2` with legs in `[10 theta, 12 theta]` and bounded turning,
    /// built out from the origin in both directions.
    pub fn canoe_chain(&mut self, len: usize, theta: &Real) -> Result<Vec<HypPoint>> {
        let prec = self.h.precision();
        let theta = theta.to_hp(prec);
        let z = HPReal::zero(prec);
        let o = HPReal::from_int(1, prec);
        let p = self.h.origin();
        let v = vec![z.clone(), o.clone(), z.clone()];
        let w = vec![z.clone(), z.clone(), o.clone()];
        let back = len / 2;
        let fwd = len - 1 - back;
        let mut a = self.walk((p.clone(), v.clone(), w.clone()), fwd, &theta)?;
        let flip = |x: &[HPReal]| x.iter().map(|c| c.neg()).collect::<Vec<_>>();
        let start = self.turn((p.clone(), flip(&v), flip(&w)))?;
        let b = self.walk(start, back, &theta)?;
        let mut chain: Vec<HypPoint> = b.into_iter().rev().map(HypPoint::Hyp).collect();
        chain.push(HypPoint::Hyp(p));
        chain.append(&mut a.drain(..).map(HypPoint::Hyp).collect());
        Ok(chain)
    }

    fn turn(&mut self, (p, v, w): Frame) -> Result<Frame> {
        let prec = self.h.precision();
        // stereographic angle parameter; |s| <= 20 keeps the turn away from a full reversal
        let s = self.signed_rational(20, 1000);
        let one = Rational::from_integer(1.into());
        let d = &one + &s * &s;
        let c = HPReal::from_rational(&((&one - &s * &s) / &d), prec);
        let sn = HPReal::from_rational(&(&s * Rational::from_integer(2.into()) / &d), prec);
        let v2 = lin(&c, &v, &sn, &w);
        let w2 = lin(&sn.neg(), &v, &c, &w);
        Ok((p, v2, w2))
    }

    fn walk(&mut self, mut f: Frame, steps: usize, theta: &HPReal) -> Result<Vec<Vec<HPReal>>> {
        let mut out = Vec::new();
        for k in 0..steps {
            if k > 0 {
                f = self.turn(f)?;
            }
            let u = rat(self.rng.gen_range(1..=1000), 1000);
            let l = theta.mul(&HPReal::from_rational(&(u * Rational::from_integer(2.into()) + Rational::from_integer(10.into())), theta.precision()));
            let (ch, sh) = (l.cosh()?, l.sinh()?);
            let (p, v, w) = f;
            let p2 = lin(&ch, &p, &sh, &v);
            let v2 = lin(&sh, &p, &ch, &v);
            out.push(p2.clone());
            f = (p2, v2, w);
        }
        Ok(out)
    }

    /// Random instance for the obtuse-angle lemma: `x` sits on a perpendicular
    /// to the line `(a, b)` through `a`.
    pub fn obtuse_instance(&mut self, radius: f64) -> Result<SegmentConfig> {
        let prec = self.h.precision();
        let a = self.point(radius)?;
        let basis = self.h.tangent_basis(&a)?;
        let dir = self.direction();
        let mut v = vec![HPReal::zero(prec); self.h.dim() + 1];
        for (d, e) in dir.iter().zip(&basis) {
            v = lin(&HPReal::from_int(1, prec), &v, &HPReal::from_rational(d, prec), e);
        }
        // a unit normal to v at a, in the plane of the first two directions
        let n = {
            let (c, s) = (HPReal::from_rational(&dir[0], prec), HPReal::from_rational(&dir[1], prec));
            let n = lin(&s.neg(), &basis[0], &c, &basis[1]);
            let k = c.sqr().add(&s.sqr()).sqrt()?.recip()?;
            n.iter().map(|t| t.mul(&k)).collect::<Vec<_>>()
        };
        let lb = HPReal::from_f64(0.5 + self.rng.gen::<f64>() * radius, prec);
        let b = lin(&lb.cosh()?, &a, &lb.sinh()?, &v);
        let lx = HPReal::from_f64(self.rng.gen::<f64>() * radius, prec);
        let x = lin(&lx.cosh()?, &a, &lx.sinh()?, &n);
        Ok(SegmentConfig::Obtuse { x: HypPoint::Hyp(x), a: HypPoint::Hyp(a), b: HypPoint::Hyp(b) })
    }

    /// Random `(x, y, x', y', beta)` with `x', y'` within `beta` of `x, y`.
    /// For the shortening lemma `x` and `y` are put at least `2 beta + 4 theta` apart.
    pub fn endpoint_instance(&mut self, theta: &Real, shorter: bool) -> Result<SegmentConfig> {
        let prec = self.h.precision();
        let th = theta.to_f64();
        let beta = self.rng.gen::<f64>() * 3.0 * th;
        let beta = Real::Approx(HPReal::from_f64(beta, prec));
        let x = self.point(2.0)?;
        let len = if shorter {
            beta.to_f64() * 2.0 + 4.0 * th + 0.01 + self.rng.gen::<f64>() * 4.0 * th
        } else {
            self.rng.gen::<f64>() * 8.0 * th
        };
        let y = self.near(&x, &HPReal::from_f64(len, prec))?;
        let rx = beta.to_hp(prec).mul(&HPReal::from_rational(&self.unit_rational(100), prec)).mul(&HPReal::from_f64(0.99, prec));
        let ry = beta.to_hp(prec).mul(&HPReal::from_rational(&self.unit_rational(100), prec)).mul(&HPReal::from_f64(0.99, prec));
        let x2 = self.near(&x, &rx)?;
        let y2 = self.near(&y, &ry)?;
        let (x, y, x2, y2) = (HypPoint::Hyp(x), HypPoint::Hyp(y), HypPoint::Hyp(x2), HypPoint::Hyp(y2));
        Ok(if shorter {
            SegmentConfig::ShorterCloser { x, y, x2, y2, beta }
        } else {
            SegmentConfig::WeakConvexity { x, y, x2, y2, beta }
        })
    }
}

type Frame = (Vec<HPReal>, Vec<HPReal>, Vec<HPReal>);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::hyperboloid::lorentz;

    #[test]
    fn sphere_points_are_unit() {
        for t in [vec![rat(1, 2)], vec![rat(-3, 7), rat(2, 1)]] {
            let p = sphere_point(&t);
            let n: Rational = p.iter().map(|x| x * x).sum();
            assert_eq!(n, Rational::from_integer(1.into()));
        }
    }

    #[test]
    fn sampled_points_lie_on_the_sheet() {
        let mut s = Sampler::new(3, 128, 7).unwrap();
        for _ in 0..20 {
            let p = s.point(5.0).unwrap();
            s.h.check(&p).unwrap();
            let q = s.near(&p, &HPReal::from_int(2, 128)).unwrap();
            let d = s.h.distance(&p, &q).unwrap();
            assert!(d.sub(&HPReal::from_int(2, 128)).abs().to_f64() < 1e-20);
            let r = lorentz(&q, &q).sub(&HPReal::from_int(1, 128));
            assert!(r.abs().to_f64() < 1e-18, "{r}");
        }
    }
}
