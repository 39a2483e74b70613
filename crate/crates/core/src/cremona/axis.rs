//! Truncated end points of the axis of a generic symbolic map.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::picard_manin::{AmbientLattice, PicManClass};
use crate::scalar::{QuadScalar, Rational};

use super::action::CremonaAction;

#[derive(Clone, Debug)]
pub struct AxisData {
    /// repelling end, built from backward images of `E+`
    pub alpha: PicManClass,
    /// attracting end, built from forward images of `E-`
    pub omega: PicManClass,
    /// `(alpha + omega) / sqrt(2)`, the point of the axis closest to `[H]`
    pub p: PicManClass,
    pub depth: usize,
    pub degree: u32,
    /// Bounds the three defects `|alpha.omega - 1|`, `|alpha^2|`, `|p^2 - 1|`.
    pub tail_bound: Rational,
}

/// `alpha_N = [H] - sum_{i=1..N} (g^-1)_*^{i-1} [E+] / d^i` and the mirror
/// series for `omega_N`. Each level carries `(d-1)^2 + 2d - 2` units of
/// exceptional mass at scale `d^-2i`, so the defects are bounded by `d^-2N`.
pub fn axis_truncation(a: &CremonaAction, depth: usize) -> Result<AxisData> {
    let s = a.symbolic().ok_or_else(|| domain("axis truncation needs a generic symbolic map of degree >= 2"))?;
    let plane = AmbientLattice::plane();
    let h = PicManClass::h(&plane);
    let d = s.d;
    let ends = |pts: &[crate::picard_manin::BasePoint]| -> Result<PicManClass> {
        let mut e = PicManClass::zero(&plane);
        for (p, m) in pts.iter().zip(&s.mult) {
            e.add_exceptional(p, &QuadScalar::int(*m as i64))?;
        }
        Ok(e)
    };
    let inv = a.inverse()?;
    let series = |start: PicManClass, step: &CremonaAction| -> Result<PicManClass> {
        let mut acc = h.clone();
        let mut level = start;
        let mut scale = Rational::one();
        for i in 1..=depth {
            scale /= Rational::from_integer(BigInt::from(d));
            acc = acc.try_sub(&level.scale_rational(&scale))?;
            if i < depth {
                level = step.pushforward(&level)?;
            }
        }
        Ok(acc)
    };
    let alpha = series(ends(s.src)?, &inv)?;
    let omega = series(ends(s.dst)?, a)?;
    let r = QuadScalar::new(Rational::zero(), Rational::new(BigInt::one(), BigInt::from(2)), 2);
    let p = alpha.try_add(&omega)?.scale(&r)?;
    let tail_bound = Rational::new(BigInt::one(), BigInt::from(d).pow(2 * depth as u32));
    Ok(AxisData { alpha, omega, p, depth, degree: d, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard_manin::{in_hyperbolic_sheet, in_sheet_within, PointRegistry};

    #[test]
    fn quadratic_axis_identities() {
        let reg = PointRegistry::new();
        let f = CremonaAction::quadratic_generic(&reg);
        let h = PicManClass::h(&AmbientLattice::plane());
        for n in [0, 1, 3, 8] {
            let ax = axis_truncation(&f, n).unwrap();
            assert_eq!(ax.p.intersect(&h).unwrap(), QuadScalar::sqrt(2));
            assert_eq!(ax.alpha.intersect(&ax.omega).unwrap(), QuadScalar::one());
            let t = QuadScalar::rational(ax.tail_bound.clone());
            assert_eq!(ax.alpha.square().unwrap(), t);
            assert_eq!(ax.p.square().unwrap(), QuadScalar::one().try_add(&t).unwrap());
            assert!(in_sheet_within(&ax.p, &ax.tail_bound));
            assert!(!in_hyperbolic_sheet(&ax.p));
        }
        assert_eq!(axis_truncation(&f, 0).unwrap().alpha, h);
    }

    #[test]
    fn equivariance() {
        let reg = PointRegistry::new();
        for g in [CremonaAction::quadratic_generic(&reg), CremonaAction::de_jonquieres(&reg, 3).unwrap()] {
            let d = QuadScalar::int(g.symbolic().unwrap().d as i64);
            for n in 1..6 {
                let a = axis_truncation(&g, n).unwrap();
                let b = axis_truncation(&g, n + 1).unwrap();
                assert_eq!(g.pushforward(&a.omega).unwrap(), b.omega.scale(&d).unwrap());
                assert_eq!(g.inverse().unwrap().pushforward(&a.alpha).unwrap(), b.alpha.scale(&d).unwrap());
            }
        }
    }
}
