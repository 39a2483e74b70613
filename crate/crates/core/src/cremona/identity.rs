//! Probabilistic identity checks between words in explicit birational maps.
//!
//! Words are read as compositions: in `a b` the right factor `b` acts first.
//! Both sides are evaluated exactly at random rational points; points where
//! either side hits a pole are skipped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Rational;

use super::formula::RationalMap;

pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Clone, Debug)]
pub struct Generator {
    pub map: RationalMap,
    pub inverse: Option<RationalMap>,
}

/// Named generators available to words.
#[derive(Clone, Debug, Default)]
pub struct Generators(BTreeMap<String, Generator>);

impl Generators {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, map: &str, inverse: Option<&str>) -> Result<&mut Self> {
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse { pos: 0, msg: format!("bad generator name {name:?}") });
        }
        let g = Generator { map: RationalMap::parse(map)?, inverse: inverse.map(RationalMap::parse).transpose()? };
        self.0.insert(name.to_string(), g);
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.0.get(name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Word {
    Gen(String),
    /// `[a, b]` is `a o b`
    Product(Vec<Word>),
    Pow(Box<Word>, i64),
}

impl Word {
    /// Parses juxtaposed generator names, parentheses and integer powers, e.g.
    /// `(h s) h (h s)^-1`. Names are matched longest first; `id` is the identity.
    pub fn parse(s: &str, gens: &Generators) -> Result<Word> {
        let mut names: Vec<&str> = gens.0.keys().map(String::as_str).collect();
        names.sort_by_key(|n| std::cmp::Reverse(n.len()));
        let mut p = WordParser { s: s.as_bytes(), pos: 0, names };
        let w = p.product()?;
        p.skip();
        if p.pos < p.s.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(w)
    }

    fn inverse_steps<'a>(&'a self, gens: &'a Generators, inverse: bool, out: &mut Vec<&'a RationalMap>) -> Result<()> {
        match self {
            Word::Gen(n) => {
                let g = gens.get(n).ok_or_else(|| Error::DomainError(format!("unknown generator {n}")))?;
                if inverse {
                    out.push(g.inverse.as_ref().ok_or_else(|| Error::NotApplicable(format!("no inverse given for {n}")))?);
                } else {
                    out.push(&g.map);
                }
            }
            Word::Product(v) => {
                // the rightmost factor acts first; under inversion the order flips
                let mut order: Vec<&Word> = v.iter().collect();
                if !inverse {
                    order.reverse();
                }
                for w in order {
                    w.inverse_steps(gens, inverse, out)?;
                }
            }
            Word::Pow(w, n) => {
                for _ in 0..n.unsigned_abs() {
                    w.inverse_steps(gens, inverse ^ (*n < 0), out)?;
                }
            }
        }
        Ok(())
    }

    /// Maps in the order they act.
    fn steps<'a>(&'a self, gens: &'a Generators) -> Result<Vec<&'a RationalMap>> {
        let mut out = Vec::new();
        self.inverse_steps(gens, false, &mut out)?;
        Ok(out)
    }
}

struct WordParser<'a> {
    s: &'a [u8],
    pos: usize,
    names: Vec<&'a str>,
}

impl WordParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_whitespace() || self.s[self.pos] == b'*') {
            self.pos += 1;
        }
    }

    fn product(&mut self) -> Result<Word> {
        let mut factors = Vec::new();
        loop {
            self.skip();
            match self.s.get(self.pos) {
                None | Some(b')') => break,
                _ => factors.push(self.factor()?),
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Word::Product(factors) })
    }

    fn factor(&mut self) -> Result<Word> {
        let base = if self.s[self.pos] == b'(' {
            self.pos += 1;
            let w = self.product()?;
            self.skip();
            if self.s.get(self.pos) != Some(&b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
            w
        } else if self.s[self.pos..].starts_with(b"id") && !self.names.contains(&"id") {
            self.pos += 2;
            Word::Product(Vec::new())
        } else {
            let rest = &self.s[self.pos..];
            let name = self.names.iter().find(|n| rest.starts_with(n.as_bytes())).ok_or_else(|| self.err("unknown generator"))?;
            self.pos += name.len();
            Word::Gen(name.to_string())
        };
        if self.s.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let start = self.pos;
            if self.s.get(self.pos) == Some(&b'-') {
                self.pos += 1;
            }
            while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let n: i64 = std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(Word::Pow(base.into(), n));
        }
        Ok(base)
    }
}

fn apply(steps: &[&RationalMap], p: &(Rational, Rational)) -> Option<(Rational, Rational)> {
    steps.iter().try_fold(p.clone(), |acc, m| m.eval(&acc))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityVerdict {
    pub equal: bool,
    pub samples: usize,
    pub skipped: usize,
    /// a point where the two sides differ, with both values
    pub witness: Option<[(Rational, Rational); 3]>,
}

fn random_point(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    let mut coord = || Rational::new(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)), BigInt::from(rng.gen_range(1i64..=1000)));
    (coord(), coord())
}

/// Compares two words at `samples` random rational points.
pub fn rational_map_identity_check(gens: &Generators, lhs: &str, rhs: &str, samples: usize, seed: u64) -> Result<IdentityVerdict> {
    let (l, r) = (Word::parse(lhs, gens)?, Word::parse(rhs, gens)?);
    let (ls, rs) = (l.steps(gens)?, r.steps(gens)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut used, mut skipped) = (0, 0);
    let budget = 20 * samples.max(1);
    while used < samples && used + skipped < budget {
        let p = random_point(&mut rng);
        match (apply(&ls, &p), apply(&rs, &p)) {
            (Some(a), Some(b)) => {
                used += 1;
                if a != b {
                    return Ok(IdentityVerdict { equal: false, samples: used, skipped, witness: Some([p, a, b]) });
                }
            }
            _ => skipped += 1,
        }
    }
    if used == 0 {
        return Err(Error::SamplingFailure(format!("all {skipped} sample points hit a pole")));
    }
    Ok(IdentityVerdict { equal: true, samples: used, skipped, witness: None })
}
