//! The map specification language.
//!
//! ```text
//! spec := "quadratic" [labels "/" labels]
//!       | "dejonquieres" "d=" n
//!       | "henon" "d=" n
//!       | "monomial" int "," int ";" int "," int
//!       | "compose(" spec ";" spec { ";" spec } ")"
//! ```
//!
//! Inside `compose(...)` a `;` followed by a digit or `-` belongs to a monomial
//! matrix; any other `;` separates factors.

use std::collections::HashMap;

use picman::cremona::{CremonaAction, Variant};
use picman::linalg::IntMatrix;
use picman::picard_manin::{BasePoint, PointKind, PointRegistry};
use picman::{Error, Result};

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Parser<'a> {
    reg: &'a PointRegistry,
    named: HashMap<String, BasePoint>,
}

impl Parser<'_> {
    fn point(&mut self, label: &str) -> BasePoint {
        if let Some(p) = self.named.get(label) {
            return p.clone();
        }
        let p = self.reg.named(label);
        self.named.insert(label.to_string(), p.clone());
        p
    }

    fn labels(&mut self, s: &str, off: usize) -> Result<[BasePoint; 3]> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 || parts.iter().any(|p| p.is_empty() || !p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')) {
            return Err(err(off, "expected three comma-separated point labels"));
        }
        let mut seen = parts.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != 3 {
            return Err(Error::DomainError(format!("duplicate base point in {s:?}")));
        }
        Ok([self.point(parts[0]), self.point(parts[1]), self.point(parts[2])])
    }

    fn spec(&mut self, s: &str, off: usize) -> Result<CremonaAction> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let off = off + lead;
        let (word, rest) = t.split_at(t.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(t.len()));
        let rest_off = off + word.len();
        match word {
            "quadratic" => {
                if rest.trim().is_empty() {
                    return Ok(CremonaAction::quadratic_generic(self.reg));
                }
                let slash = rest.find('/').ok_or_else(|| err(rest_off, "expected 'p1,p2,p3 / q1,q2,q3'"))?;
                let p = self.labels(&rest[..slash], rest_off)?;
                let q = self.labels(&rest[slash + 1..], rest_off + slash + 1)?;
                CremonaAction::quadratic(self.reg, p, q)
            }
            "dejonquieres" | "henon" => {
                let r = rest.trim_start();
                let r_off = rest_off + rest.len() - r.len();
                let n = r.strip_prefix("d=").ok_or_else(|| err(r_off, "expected 'd=<n>'"))?;
                let d: u32 = n.trim().parse().map_err(|_| err(r_off + 2, "expected a positive integer"))?;
                if word == "henon" {
                    CremonaAction::henon(self.reg, d)
                } else {
                    CremonaAction::de_jonquieres(self.reg, d)
                }
            }
            "monomial" => {
                let m = parse_matrix(rest, rest_off)?;
                CremonaAction::monomial(self.reg, m)
            }
            "compose" => {
                let r = rest.trim_start();
                let r_off = rest_off + rest.len() - r.len();
                let inner = r.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| err(r_off, "expected 'compose(a; b)'"))?;
                let parts = split_factors(inner, r_off + 1)?;
                if parts.len() < 2 {
                    return Err(err(r_off, "compose needs at least two factors"));
                }
                let mut acc: Option<CremonaAction> = None;
                for (piece, at) in parts {
                    let a = self.spec(piece, at)?;
                    acc = Some(match acc {
                        None => a,
                        Some(x) => x.compose(&a)?,
                    });
                }
                Ok(acc.unwrap())
            }
            "" => Err(err(off, "expected a map name")),
            w => Err(err(off, format!("unknown map {w:?}"))),
        }
    }
}

/// Splits at top-level `;` that do not continue a monomial matrix.
fn split_factors(s: &str, off: usize) -> Result<Vec<(&str, usize)>> {
    let b = s.as_bytes();
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for i in 0..b.len() {
        match b[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b';' if depth == 0 => {
                let next = s[i + 1..].trim_start().bytes().next();
                if !matches!(next, Some(c) if c.is_ascii_digit() || c == b'-') {
                    out.push((&s[start..i], off + start));
                    start = i + 1;
                }
            }
            _ => {}
        }
        if depth < 0 {
            return Err(err(off + i, "unbalanced ')'"));
        }
    }
    if depth != 0 {
        return Err(err(off + s.len(), "unbalanced '('"));
    }
    out.push((&s[start..], off + start));
    Ok(out)
}

/// `a,b;c,d` as a 2x2 integer matrix.
pub fn parse_matrix(s: &str, off: usize) -> Result<IntMatrix> {
    let rows: Vec<&str> = s.split(';').collect();
    let mut out = Vec::new();
    let mut at = off;
    for r in &rows {
        let mut row = Vec::new();
        for x in r.split(',') {
            let lead = x.len() - x.trim_start().len();
            row.push(x.trim().parse::<i64>().map_err(|_| err(at + lead, "expected an integer"))?);
            at += x.len() + 1;
        }
        out.push(row);
    }
    if out.len() != 2 || out.iter().any(|r| r.len() != 2) {
        return Err(err(off, "expected a 2x2 matrix 'a,b;c,d'"));
    }
    IntMatrix::from_rows(&out)
}

/// Parses a specification over `reg`; repeated labels name the same point.
pub fn parse_map_spec(text: &str, reg: &PointRegistry) -> Result<CremonaAction> {
    Parser { reg, named: HashMap::new() }.spec(text, 0)
}

/// Inverse of [`parse_map_spec`] for actions it can produce.
pub fn render_spec(a: &CremonaAction) -> Result<String> {
    if a.is_inverse() {
        return Err(Error::Unsupported("inverses have no specification".into()));
    }
    let reg = a.registry();
    Ok(match a.variant() {
        Variant::Quadratic { p, q } => {
            let named = p.iter().chain(q).all(|x| matches!(x.kind, PointKind::Named(_)));
            if !named {
                return Err(Error::Unsupported("quadratic map with orbit base points".into()));
            }
            let l = |v: &[BasePoint; 3]| v.iter().map(|x| reg.label(x.id)).collect::<Vec<_>>().join(",");
            format!("quadratic {} / {}", l(p), l(q))
        }
        Variant::DeJonquieres { d, .. } => format!("dejonquieres d={d}"),
        Variant::Henon { d, .. } => format!("henon d={d}"),
        Variant::Monomial(m) => {
            let r = m.to_i64_rows().ok_or_else(|| Error::UnsupportedSize("matrix entries too large".into()))?;
            format!("monomial {},{};{},{}", r[0][0], r[0][1], r[1][0], r[1][1])
        }
        Variant::Composite(v) if v.len() >= 2 => {
            let parts = v.iter().map(render_spec).collect::<Result<Vec<_>>>()?;
            format!("compose({})", parts.join("; "))
        }
        _ => return Err(Error::Unsupported("no specification for this action".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use picman::picard_manin::{AmbientLattice, PicManClass};

    #[test]
    fn grammar() {
        let reg = PointRegistry::new();
        let a = parse_map_spec("dejonquieres d=3", &reg).unwrap();
        assert!(matches!(a.variant(), Variant::DeJonquieres { d: 3, .. }));
        assert_eq!(reg.len(), 10);
        assert!(parse_map_spec("monomial 2,1;1,1", &reg).unwrap().is_monomial());
        assert!(parse_map_spec("monomial 2,2;1,1", &reg).is_err());
        assert!(matches!(parse_map_spec("monomial 2,x;1,1", &reg), Err(Error::Parse { pos: 11, .. })));
        assert!(matches!(parse_map_spec("frobnicate", &reg), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_map_spec("quadratic a,a,b / c,d,e", &reg), Err(Error::DomainError(_))));
        let c = parse_map_spec("compose(monomial 0,1;-1,0; quadratic; henon d=2)", &reg).unwrap();
        assert!(matches!(c.variant(), Variant::Composite(v) if v.len() == 3));
    }

    #[test]
    fn round_trip() {
        for text in ["quadratic a,b,c / x,y,z", "dejonquieres d=4", "henon d=3", "monomial 2,1;1,1", "compose(quadratic a,b,c / x,y,z; quadratic x,y,z / a,b,c)"] {
            let (r1, r2) = (PointRegistry::new(), PointRegistry::new());
            let a = parse_map_spec(text, &r1).unwrap();
            let again = parse_map_spec(&render_spec(&a).unwrap(), &r2).unwrap();
            if a.is_monomial() {
                assert_eq!(a.matrix(), again.matrix());
                continue;
            }
            let h = PicManClass::h(&AmbientLattice::plane());
            let (x, y) = (a.pushforward(&h).unwrap(), again.pushforward(&h).unwrap());
            assert_eq!(x.render(Some(&r1)), y.render(Some(&r2)), "{text}");
        }
    }
}
