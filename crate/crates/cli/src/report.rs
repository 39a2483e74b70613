//! JSON reports for each subcommand, and their text rendering.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use picman::cremona::{
    axis_truncation, classify_isometry, dynamical_degree, spectral_radius, stability_check, CollisionData, IsometryClass, Lambda,
    DEFAULT_HORIZON,
};
use picman::hyperbolic::{approximation_tree, verify_canoeing, MetricSpaceBackend, Sampler};
use picman::lattices::{
    ample_cone_member, classify_lattice_isometry, coble_construction, kummer_action, mod2_congruence, pell_isometry, BinaryForm,
};
use picman::linalg::{IntMatrix, IntPoly};
use picman::picard_manin::{AmbientLattice, PicManClass, PointRegistry};
use picman::scalar::rational::fmt_rational;
use picman::scalar::{golden_eigenvalue, HPReal, QuadScalar, Rational, Real};
use picman::tightness::{
    axis_rigidity_from_displacement, cremona_k_bound, epsilon0_certificate, tightness_constants, CAT_READING,
};
use picman::{Error, Result};

use crate::spec::{parse_map_spec, parse_matrix};

pub fn error_kind(e: &Error) -> String {
    let d = format!("{e:?}");
    d.split(|c: char| !c.is_ascii_alphanumeric()).next().unwrap_or_default().to_string()
}

fn int(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

/// Integers as JSON numbers, everything else as its exact rendering.
fn quad(q: &QuadScalar) -> Value {
    if q.is_integer() {
        return int(&q.a().to_integer());
    }
    Value::String(q.to_string())
}

fn hp(x: &HPReal) -> Value {
    Value::String(x.to_string())
}

fn real(x: &Real) -> Value {
    match x {
        Real::Exact(q) => Value::String(fmt_rational(q)),
        Real::Approx(h) => hp(h),
    }
}

fn rows(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(int).collect())).collect())
}

fn lambda(l: &Lambda, prec: u32) -> Value {
    json!({
        "exact": l.as_exact().map(|q| Value::String(q.to_string())).unwrap_or(Value::Null),
        "approx": hp(&l.to_hp(prec)),
    })
}

fn isometry(c: &IsometryClass, prec: u32) -> Value {
    match c {
        IsometryClass::Elliptic => json!({"type": "elliptic"}),
        IsometryClass::Parabolic { growth } => json!({"type": "parabolic", "growth": growth.to_string()}),
        IsometryClass::Hyperbolic { lambda: l } => json!({"type": "hyperbolic", "lambda": lambda(l, prec)}),
    }
}

/// Keeps a report going past a failed sub-analysis. Precision failures still abort.
fn soft<T>(r: Result<T>, f: impl FnOnce(T) -> Result<Value>) -> Result<Value> {
    match r {
        Ok(v) => f(v),
        Err(e @ Error::PrecisionFailure(_)) => Err(e),
        Err(e) => Ok(json!({"error": e.to_string()})),
    }
}

pub fn analyze(text: &str, iterates: usize, depth: usize, prec: u32) -> Result<Value> {
    let reg = PointRegistry::new();
    let a = parse_map_spec(text, &reg)?;
    let seq = a.degree_sequence(iterates)?;
    let lam = dynamical_degree(&a);
    let translation = match &lam {
        Ok(l) if l.exceeds_one() => hp(&l.log(prec)?),
        Ok(_) => Value::String("0".into()),
        Err(e) => json!({"error": e.to_string()}),
    };
    let axis = soft(axis_truncation(&a, depth), |ax| {
        let h = PicManClass::h(&AmbientLattice::plane());
        Ok(json!({
            "depth": ax.depth,
            "tail_bound": fmt_rational(&ax.tail_bound),
            "p_dot_h": ax.p.intersect(&h)?.to_string(),
            "p_square_minus_one": ax.p.square()?.try_sub(&QuadScalar::one())?.to_string(),
        }))
    })?;
    let stability = soft(stability_check(&a, depth, &CollisionData::default()), |v| {
        Ok(json!({
            "stable": v.stable,
            "depth": v.depth,
            "violation": v.violation.map(|x| json!({"condition": x.condition, "k": x.k, "j": x.j, "point": x.point})),
        }))
    })?;
    Ok(json!({
        "input": text,
        "iterates": iterates,
        "degree_sequence": seq.iter().map(quad).collect::<Vec<_>>(),
        "dynamical_degree": soft(lam, |l| Ok(lambda(&l, prec)))?,
        "isometry_type": soft(classify_isometry(&a, DEFAULT_HORIZON), |c| Ok(isometry(&c, prec)))?,
        "translation_length": translation,
        "axis": axis,
        "stability": stability,
    }))
}

pub fn axis(text: &str, depth: usize) -> Result<Value> {
    let reg = PointRegistry::new();
    let a = parse_map_spec(text, &reg)?;
    let ax = axis_truncation(&a, depth)?;
    let h = PicManClass::h(&AmbientLattice::plane());
    let class = |c: &PicManClass| json!({"render": c.render(Some(&reg)), "class": c.to_json(Some(&reg))});
    Ok(json!({
        "input": text,
        "depth": depth,
        "degree": ax.degree,
        "tail_bound": fmt_rational(&ax.tail_bound),
        "alpha": class(&ax.alpha),
        "omega": class(&ax.omega),
        "p": class(&ax.p),
        "identities": {
            "p_dot_h": ax.p.intersect(&h)?.to_string(),
            "alpha_dot_omega": ax.alpha.intersect(&ax.omega)?.to_string(),
            "alpha_square": ax.alpha.square()?.to_string(),
            "omega_square": ax.omega.square()?.to_string(),
            "p_square": ax.p.square()?.to_string(),
        },
    }))
}

pub fn kummer(text: &str, prec: u32) -> Result<Value> {
    let m = parse_matrix(text, 0)?;
    let iso = kummer_action(&m)?;
    let tr = m.trace();
    let lam = spectral_radius(&iso.matrix, prec)?;
    let cp = iso.matrix.charpoly();
    let expected = tr.to_i64().filter(|t| t.abs() >= 3).map(|t| {
        let a = t * t - 2;
        let factor = cp.div_exact(&IntPoly::from_i64(&[1, -a, 1])).is_some();
        json!({"lambda": golden_eigenvalue(a).map(|q| q.to_string()).unwrap_or_default(), "charpoly_has_factor": factor})
    });
    Ok(json!({
        "matrix": rows(&m),
        "trace": int(&tr),
        "action": rows(&iso.matrix),
        "form_preserved": true,
        "signature": iso.lattice.signature(),
        "charpoly": cp.to_string(),
        "lambda": lam.as_exact().map(|q| Value::String(q.to_string())).unwrap_or(Value::Null),
        "lambda_approx": hp(&lam.to_hp(prec)),
        "expected": expected,
        "fixed_rank": iso.fixed_rank(),
        "isometry_type": isometry(&classify_lattice_isometry(&iso)?, prec),
    }))
}

pub fn coble(prec: u32) -> Result<Value> {
    let c = coble_construction()?;
    let s = |x: QuadScalar| quad(&x);
    let gv = IntMatrix::from_big_rows(vec![
        vec![BigInt::from(2) * &c.q.a, c.q.b.clone()],
        vec![c.q.b.clone(), BigInt::from(2) * &c.q.c],
    ])?;
    let phi_ok = c.phi.transpose().mul(&gv)?.mul(&c.phi)? == gv;
    let h = PicManClass::h(&c.lattice);
    let lam = c.lambda.as_exact().ok_or_else(|| Error::PrecisionFailure("Coble dynamical degree not exact".into()))?;
    Ok(json!({
        "lattice": {"rank": c.lattice.rank(), "signature": c.lattice.signature(), "labels": c.lattice.labels},
        "K": c.k.render(None),
        "D1": c.d1.render(None),
        "D2": c.d2.render(None),
        "intersections": {
            "D1.D1": s(c.d1.square()?),
            "D2.D2": s(c.d2.square()?),
            "D1.D2": s(c.d1.intersect(&c.d2)?),
            "D1.K": s(c.d1.intersect(&c.k)?),
            "D2.K": s(c.d2.intersect(&c.k)?),
            "K.K": s(c.k.square()?),
        },
        "Q": {"A": int(&c.q.a), "B": int(&c.q.b), "C": int(&c.q.c), "discriminant": int(&c.q.discriminant())},
        "phi": rows(&c.phi),
        "phi_preserves_Q": phi_ok,
        "phi_lambda": spectral_radius(&c.phi, prec)?.to_string(),
        "g": rows(&c.g.matrix),
        "mod2": {"standard_basis": mod2_congruence(&c.g), "adapted_sublattice": mod2_congruence(&c.g_adapted)},
        "lambda": lam.to_string(),
        "lambda_approx": hp(&c.lambda.to_hp(prec)),
        "isometry_type": isometry(&classify_lattice_isometry(&c.g)?, prec),
        "ample_in_W": {"D1": ample_cone_member(&h, &c.d1, Some(&c.k))?, "D2": ample_cone_member(&h, &c.d2, Some(&c.k))?},
        "pell_lambda": pell_isometry(&c.q)?.lambda.to_string(),
    }))
}

pub fn constants(length: Option<&str>, degree: Option<u32>, prec: u32) -> Result<Value> {
    let l = match (length, degree) {
        (Some(s), _) => Real::parse(s).ok_or_else(|| Error::Parse { pos: 0, msg: format!("bad length {s:?}") })?,
        (None, Some(d)) if d >= 2 => Real::ln_int(d as i64, prec)?,
        (None, Some(d)) => return Err(Error::DomainError(format!("degree {d} has zero translation length"))),
        (None, None) => return Err(Error::DomainError("give --length or --degree".into())),
    };
    let kb = cremona_k_bound(&l)?;
    let tc = tightness_constants(&l)?;
    let k = Real::Exact(Rational::from_integer(kb.k.clone()));
    let slack = k.mul(&l).sub(&tc.theta.scale(1200).add(&kb.b.scale(40)));
    if slack.is_negative_certain() {
        return Err(Error::PrecisionFailure("k L fell below the threshold".into()));
    }
    let eps0 = Rational::new(289.into(), 1000.into());
    let cert = epsilon0_certificate(&eps0)?;
    let rig = axis_rigidity_from_displacement(&Real::Exact(eps0.clone()), &l)?;
    Ok(json!({
        "L": real(&l),
        "delta": real(&tc.delta),
        "theta": real(&tc.theta),
        "B": real(&kb.b),
        "k": int(&kb.k),
        "n_min": int(&tc.n_min),
        "intermediates": {"c1": int(&kb.c1), "c2": int(&kb.c2)},
        "margins": {
            "kL_minus_threshold": real(&slack),
            "epsilon0": {
                "eps": fmt_rational(&eps0),
                "holds": cert.holds,
                "degree": hp(&cert.degree_margin),
                "shift": hp(&cert.shift_margin),
                "order": hp(&cert.order_margin),
                "precision": cert.precision,
            },
        },
        "axis_rigidity": {"epsilon": real(&rig.epsilon), "B": real(&rig.b)},
        "promotion_reading": CAT_READING,
    }))
}

pub fn hypcheck(dim: usize, samples: usize, seed: u64, prec: u32) -> Result<Value> {
    let space = MetricSpaceBackend::hyperboloid(dim, prec)?;
    let mut s = Sampler::new(dim, prec, seed)?;
    let (delta, theta) = (space.delta(), space.theta());
    let mut worst = Real::zero();
    let mut four_ok = true;
    for _ in 0..samples {
        let p = s.points(4, 6.0)?;
        let d = space.four_point_defect(&p[0], &p[1], &p[2], &p[3])?;
        four_ok &= d.cmp_certain(&delta) != Some(Ordering::Greater);
        worst = worst.max(&d);
    }
    let trees = (samples / 10).max(1);
    let mut tree_ok = true;
    for _ in 0..trees {
        let p = s.points(5, 6.0)?;
        tree_ok &= approximation_tree(&space, &p)?.distortion(&space, &p, 4)?.within(&theta);
    }
    let mut canoe = json!(null);
    if dim == 2 {
        // long chains lose many bits in the exponential map
        let cp = prec.max(1024);
        let (cspace, mut cs) = (MetricSpaceBackend::hyperboloid(2, cp)?, Sampler::new(2, cp, seed)?);
        let ctheta = cspace.theta();
        let mut ok = true;
        for k in 0..trees {
            let chain = cs.canoe_chain(3 + k % 4, &ctheta)?;
            ok &= verify_canoeing(&cspace, &chain, &ctheta).passed();
        }
        canoe = json!({"samples": trees, "passed": ok});
    }
    Ok(json!({
        "dim": dim,
        "seed": seed,
        "delta": real(&delta),
        "four_point": {"samples": samples, "max_defect": real(&worst), "within_delta": four_ok},
        "approximation_trees": {"samples": trees, "bound": real(&theta), "within": tree_ok},
        "canoeing": canoe,
    }))
}

pub fn pell(text: &str, prec: u32) -> Result<Value> {
    let c: Vec<i64> = text
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse { pos: 0, msg: "expected 'A,B,C'".into() })?;
    let [a, b, cc] = c[..] else {
        return Err(Error::Parse { pos: 0, msg: "expected three coefficients".into() });
    };
    let q = BinaryForm::new(a, b, cc);
    let sol = pell_isometry(&q)?;
    let p = q.primitive();
    Ok(json!({
        "form": {"A": a, "B": b, "C": cc},
        "discriminant": int(&q.discriminant()),
        "primitive": {"A": int(&p.a), "B": int(&p.b), "C": int(&p.c)},
        "matrix": rows(&sol.matrix),
        "determinant": int(&sol.matrix.det()),
        "preserves_form": q.preserves(&sol.matrix),
        "t": int(&sol.t),
        "s": int(&sol.s),
        "lambda": sol.lambda.to_string(),
        "lambda_approx": hp(&picman::scalar::embed(&sol.lambda, prec)),
        "method": sol.method,
    }))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        x => out.push((prefix.to_string(), x.to_string())),
    }
}

/// One `key  value` line per leaf, keys padded to a common width.
pub fn to_text(v: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", v, &mut lines);
    let w = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines.into_iter().map(|(k, x)| format!("{k:<w$}  {x}\n")).collect()
}
