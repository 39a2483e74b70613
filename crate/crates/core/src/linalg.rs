//! Exact integer and rational linear algebra for small matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Dense square-or-rectangular integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        if rows.iter().any(|x| x.as_ref().len() != c) {
            return Err(Error::DomainError("ragged matrix".into()));
        }
        let data = rows.iter().flat_map(|x| x.as_ref().iter().map(|&v| BigInt::from(v))).collect();
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DomainError("ragged matrix".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, BigInt::from(v));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Incompatible(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j) + a * o.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        IntMatrix { data, ..*self }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        IntMatrix { data, ..*self }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix { data: self.data.iter().map(|a| a * k).collect(), ..*self }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    /// Entrywise reduction modulo `k` into `[0, k)`.
    pub fn reduce(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        IntMatrix { data: self.data.iter().map(|a| a.mod_floor(&k)).collect(), ..*self }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| Rational::from_integer(a.clone())).collect(),
        }
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Characteristic polynomial `det(t I - A)`, coefficients from the constant term up.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square());
        let n = self.rows;
        // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let am = self.mul(&m).unwrap();
            m = am.add(&Self::identity(n).scale(&coeffs[n - k + 1]));
            let t = self.mul(&m).unwrap().trace();
            coeffs[n - k] = -t / BigInt::from(k);
        }
        IntPoly::new(coeffs)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }

    /// Inverse of a matrix with determinant `+-1`.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Incompatible("inverse of a non-square matrix".into()));
        }
        let d = self.det();
        if d.abs() != BigInt::one() {
            return Err(Error::DomainError(format!("determinant {d} is not a unit")));
        }
        let n = self.rows;
        let mut aug = RatMatrix { rows: n, cols: 2 * n, data: vec![Rational::zero(); 2 * n * n] };
        for i in 0..n {
            for j in 0..n {
                *aug.at(i, j) = Rational::from_integer(self.get(i, j).clone());
            }
            *aug.at(i, n + i) = Rational::one();
        }
        aug.rref();
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).to_integer());
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    /// Reduced row echelon form, returning the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(p * self.cols + j, r * self.cols + j);
            }
            let inv = self.get(r, c).recip();
            for j in 0..self.cols {
                *self.at(r, j) *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.get(i, c).is_zero() {
                    let f = self.get(i, c).clone();
                    for j in 0..self.cols {
                        let v = self.get(r, j) * &f;
                        *self.at(i, j) -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, scaled to primitive integer vectors.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, f).clone();
                }
                primitive(&v)
            })
            .collect()
    }
}

/// Clears denominators and common factors of a rational vector.
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Signature `(positive, negative)` of a symmetric matrix, by exact congruence
/// diagonalization. Fails on a degenerate form.
pub fn signature(gram: &IntMatrix) -> Result<(usize, usize)> {
    if !gram.is_square() || gram.transpose() != *gram {
        return Err(Error::DomainError("Gram matrix must be square and symmetric".into()));
    }
    let n = gram.rows();
    let mut a: Vec<Vec<Rational>> =
        (0..n).map(|i| gram.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k <- e_k + e_j makes the pivot 2 a_kj (a_jj = 0 here)
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            } else {
                return Err(Error::Degenerate("Gram matrix is singular".into()));
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
            for r in 0..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    Ok((pos, neg))
}

/// Integer polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Division by a monic polynomial; `None` unless it divides exactly.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_monic(d);
        r.0.iter().all(Zero::is_zero).then_some(q)
    }

    fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.0.last().is_some_and(One::is_one), "divisor must be monic");
        let dd = d.degree();
        if self.degree() < dd {
            return (IntPoly::from_i64(&[0]), self.clone());
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            q[k] = c;
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Integer roots (the polynomial is monic in every use here).
    pub fn integer_roots(&self) -> Vec<BigInt> {
        let c0 = self.0.iter().find(|c| !c.is_zero()).cloned().unwrap_or_default();
        let mut out = Vec::new();
        if self.0[0].is_zero() {
            out.push(BigInt::zero());
        }
        let n = c0.abs();
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                for cand in [d.clone(), &n / &d] {
                    for s in [cand.clone(), -cand] {
                        if !out.contains(&s) && self.eval(&Rational::from_integer(s.clone())).is_zero() {
                            out.push(s);
                        }
                    }
                }
            }
            d += 1;
        }
        out.sort();
        out
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: i64) -> usize {
        let lin = IntPoly::from_i64(&[-r, 1]);
        let mut p = self.clone();
        let mut k = 0;
        while p.degree() > 0 {
            match p.div_exact(&lin) {
                Some(q) => {
                    p = q;
                    k += 1;
                }
                None => break,
            }
        }
        k
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                1 if mag.is_one() => "t".into(),
                1 => format!("{mag}*t"),
                _ if mag.is_one() => format!("t^{k}"),
                _ => format!("{mag}*t^{k}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (sign, body)) in terms.iter().enumerate() {
            if i == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            s.push_str(body);
        }
        f.write_str(&s)
    }
}
