//! Univariate polynomials over the scalar field: just enough for eigenvalue
//! searches and for the Kronecker family `k[x]/⟨p⟩`.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Coefficients from the constant term upwards; never has trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// No factor found by the available tests (degree ≥ 4 over ℚ).
    Trusted,
}

impl Poly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Poly {
        let mut p = Poly { field, coeffs: coeffs.iter().map(|c| field.normalize(c)).collect() };
        p.trim();
        p
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn x(field: Field) -> Poly {
        Poly::from_i64(field, &[0, 1])
    }

    pub fn constant(field: Field, c: Scalar) -> Poly {
        Poly::new(field, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lead());
        Poly::new(self.field, self.coeffs.iter().map(|c| self.field.mul(c, &inv)).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = f.zero();
        Poly::new(f, (0..n).map(|i| f.add(self.coeffs.get(i).unwrap_or(&z), o.coeffs.get(i).unwrap_or(&z))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = f.zero();
        Poly::new(f, (0..n).map(|i| f.sub(self.coeffs.get(i).unwrap_or(&z), o.coeffs.get(i).unwrap_or(&z))).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let f = self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::new(f, vec![]);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Euclidean division; panics when dividing by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let f = self.field;
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        if r.len() < dl {
            return (Poly::new(f, vec![]), self.clone());
        }
        let inv = f.inv(&d.lead());
        let mut q = vec![f.zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dl - 1], &inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, dc));
            }
            q[k] = c;
        }
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: BigInt, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field, self.field.one()).rem(m);
        let two = BigInt::from(2);
        while e.is_positive() {
            if e.is_odd() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e /= &two;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &f.from_i64(i as i64))).collect())
    }

    /// The distinct roots lying in the field, in increasing order of their
    /// canonical representatives.
    pub fn roots(&self) -> Vec<Scalar> {
        if self.degree() == 0 {
            return vec![];
        }
        let mut out = match self.field {
            Field::Rational => rational_roots(self),
            Field::Prime(p) => prime_roots(self, p),
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn irreducibility(&self) -> Irreducibility {
        let n = self.degree();
        if self.is_zero() || n == 0 {
            return Irreducibility::Reducible;
        }
        if n == 1 {
            return Irreducibility::Irreducible;
        }
        match self.field {
            Field::Prime(p) => {
                // Rabin: no common factor with x^(p^i) − x for i ≤ n/2.
                let f = self.monic();
                let x = Poly::x(self.field);
                let mut xp = x.clone();
                for _ in 1..=n / 2 {
                    xp = xp.powmod(BigInt::from(p), &f);
                    if f.gcd(&xp.sub(&x)).degree() > 0 {
                        return Irreducibility::Reducible;
                    }
                }
                Irreducibility::Irreducible
            }
            Field::Rational => {
                if !self.roots().is_empty() {
                    Irreducibility::Reducible
                } else if n <= 3 {
                    Irreducibility::Irreducible
                } else {
                    Irreducibility::Trusted
                }
            }
        }
    }

    /// Companion matrix: ones on the subdiagonal, `−c_i` in the last column.
    pub fn companion(&self) -> Matrix {
        let f = self.field;
        let m = self.monic();
        let n = m.degree();
        let mut c = Matrix::zeros(f, n, n);
        for i in 1..n {
            c.set(i, i - 1, f.one());
        }
        for i in 0..n {
            c.set(i, n - 1, f.neg(&m.coeffs[i]));
        }
        c
    }

    /// Parses expressions like `x^2+x+1`, `x-1`, `2*x^3 - 5`, `x`.
    pub fn parse(field: Field, s: &str) -> Result<Poly> {
        let err = || Error::Parse(format!("bad polynomial `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in t.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));
        let mut acc: Vec<BigInt> = Vec::new();
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(err());
            }
            let (coef, deg) = match term.find('x') {
                None => (term.parse::<BigInt>().map_err(|_| err())?, 0usize),
                Some(pos) => {
                    let c = term[..pos].trim_end_matches('*');
                    let coef = if c.is_empty() { BigInt::one() } else { c.parse::<BigInt>().map_err(|_| err())? };
                    let rest = &term[pos + 1..];
                    let deg = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(err)?.parse::<usize>().map_err(|_| err())?
                    };
                    (coef, deg)
                }
            };
            if acc.len() <= deg {
                acc.resize(deg + 1, BigInt::zero());
            }
            acc[deg] += if neg { -coef } else { coef };
        }
        Ok(Poly::new(field, acc.into_iter().map(Scalar::from_integer).collect()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coef = !a.is_one() || i == 0;
            if show_coef {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coef { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coef { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let v = n.to_u64()?;
    if v > 1u64 << 44 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    // Clear denominators, strip the factor x^k.
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p.coeffs.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let mut out = Vec::new();
    if ints[0].is_zero() {
        out.push(Scalar::zero());
        while ints.first().is_some_and(|c| c.is_zero()) {
            ints.remove(0);
        }
    }
    if ints.len() <= 1 {
        return out;
    }
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let (Some(num), Some(den)) = (divisors(&a0), divisors(&an)) else {
        // Too large to factor: fall back to small candidates.
        for q in 1..=50i64 {
            for n in -200i64..=200 {
                let c = Scalar::new(BigInt::from(n), BigInt::from(q));
                if p.eval(&c).is_zero() {
                    out.push(c);
                }
            }
        }
        return out;
    };
    for n in &num {
        for d in &den {
            for c in [Scalar::new(n.clone(), d.clone()), Scalar::new(-n.clone(), d.clone())] {
                if p.eval(&c).is_zero() {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn prime_roots(p: &Poly, q: u64) -> Vec<Scalar> {
    let f = p.field;
    if q <= 1 << 16 {
        return (0..q as i64).map(|v| f.from_i64(v)).filter(|c| p.eval(c).is_zero()).collect();
    }
    // g = gcd(p, x^q − x) is the product of the distinct linear factors.
    let x = Poly::x(f);
    let g = p.monic().gcd(&x.powmod(BigInt::from(q), &p.monic()).sub(&x));
    let mut out = Vec::new();
    split_linear(&g, q, 0, &mut out);
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct linear factors, with
/// deterministic shifts `x + a`.
fn split_linear(g: &Poly, q: u64, mut a: i64, out: &mut Vec<Scalar>) {
    let f = g.field;
    match g.degree() {
        0 => {}
        1 => out.push(f.neg(&g.monic().coeffs[0])),
        _ => loop {
            let shift = Poly::from_i64(f, &[a, 1]);
            let h = shift.powmod(BigInt::from((q - 1) / 2), g).sub(&Poly::constant(f, f.one()));
            let d = g.gcd(&h);
            a += 1;
            if d.degree() > 0 && d.degree() < g.degree() {
                let other = g.divrem(&d).0;
                split_linear(&d, q, a, out);
                split_linear(&other, q, a, out);
                return;
            }
        },
    }
}

/// Minimal polynomial of a square matrix, via the Krylov sequence of powers
/// (vectorised) — cheap for the small algebras this is used on.
pub fn min_poly(m: &Matrix) -> Poly {
    let f = m.field();
    let n = m.rows();
    let mut powers: Vec<Matrix> = vec![Matrix::identity(f, n)];
    loop {
        let k = powers.len();
        let cols: Vec<Vec<Scalar>> =
            powers.iter().map(|p| (0..n * n).map(|i| p.get(i / n, i % n).clone()).collect()).collect();
        let a = Matrix::from_columns(f, n * n, &cols);
        let next = powers.last().unwrap().mul(m);
        let target: Vec<Scalar> = (0..n * n).map(|i| next.get(i / n, i % n).clone()).collect();
        let b = Matrix::from_columns(f, n * n, &[target]);
        if let Some(sol) = a.solve(&b) {
            let mut c: Vec<Scalar> = (0..k).map(|i| f.neg(sol.get(i, 0))).collect();
            c.push(f.one());
            return Poly::new(f, c);
        }
        powers.push(next);
    }
}
