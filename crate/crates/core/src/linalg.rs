//! Exact dense linear algebra over ℚ and prime fields.
//!
//! Entries are stored as [`BigRational`]; over `F_p` every entry is kept as a
//! canonical integer in `[0, p)`. Over ℚ, row reduction is fraction-free
//! (Bareiss) on integer-scaled rows, with a single normalisation pass at the
//! end; over `F_p` it is ordinary Gauss–Jordan on machine words.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Scalar = BigRational;

/// The coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Parses `Q` or `Fp:<prime>`.
    pub fn parse(s: &str) -> Option<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Some(Field::Rational);
        }
        let p: u64 = s.strip_prefix("Fp:").or_else(|| s.strip_prefix("fp:"))?.parse().ok()?;
        (p >= 2 && is_prime(p) && p < (1 << 31)).then_some(Field::Prime(p))
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::from_integer(BigInt::from(v)),
            Field::Prime(p) => small(v.rem_euclid(p as i64) as u64),
        }
    }

    /// Brings an arbitrary rational into canonical form for this field.
    pub fn normalize(self, a: &Scalar) -> Scalar {
        match self {
            Field::Rational => a.clone(),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = a.numer().mod_floor(&pb).to_u64().unwrap();
                let d = a.denom().mod_floor(&pb).to_u64().unwrap();
                assert!(d != 0, "denominator divisible by the characteristic");
                small(mulmod(n, invmod(d, p), p))
            }
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a + b,
            Field::Prime(p) => small((word(a) + word(b)) % p),
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a - b,
            Field::Prime(p) => small((word(a) + p - word(b)) % p),
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match self {
            Field::Rational => -a,
            Field::Prime(p) => small((p - word(a)) % p),
        }
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Field::Rational => a * b,
            Field::Prime(p) => small(mulmod(word(a), word(b), p)),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => small(invmod(word(a), p)),
        }
    }

    /// Enumerates the field elements 0, 1, -1, 2, -2, ... (at most `n` of them,
    /// and at most `p` over `F_p`).
    pub fn small_elements(self, n: usize) -> Vec<Scalar> {
        let mut out = vec![self.zero()];
        let mut k = 1i64;
        while out.len() < n {
            for v in [k, -k] {
                let s = self.from_i64(v);
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            if let Field::Prime(p) = self {
                if out.len() as u64 >= p {
                    break;
                }
            }
            k += 1;
        }
        out.truncate(n);
        out
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn small(v: u64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

fn word(a: &Scalar) -> u64 {
    a.numer().to_u64().expect("F_p entry out of range")
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero");
    powmod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of a row reduction: reduced row echelon form and pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.normalize(&f(i, j)));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        let v = self.field.normalize(&v);
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let f = self.field;
        let s = f.normalize(s);
        let data = self.data.iter().map(|a| f.mul(a, &s)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.field.from_i64(-1))
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(Matrix::rows).sum();
        let c: usize = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    /// Reduced row echelon form with pivot columns.
    pub fn echelon(&self) -> Echelon {
        match self.field {
            Field::Rational => self.echelon_rational(),
            Field::Prime(p) => self.echelon_prime(p),
        }
    }

    fn echelon_prime(&self, p: u64) -> Echelon {
        let (rows, cols) = self.shape();
        let mut a: Vec<u64> = self.data.iter().map(word).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
            for j in 0..cols {
                a.swap(r * cols + j, pr * cols + j);
            }
            let inv = invmod(a[r * cols + c], p);
            for j in 0..cols {
                a[r * cols + j] = mulmod(a[r * cols + j], inv, p);
            }
            for i in 0..rows {
                let f = a[i * cols + c];
                if i != r && f != 0 {
                    for j in 0..cols {
                        let t = mulmod(f, a[r * cols + j], p);
                        a[i * cols + j] = (a[i * cols + j] + p - t) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let data = a.into_iter().map(small).collect();
        Echelon { rref: Matrix { field: self.field, rows, cols, data }, pivots }
    }

    #[allow(clippy::needless_range_loop)]
    fn echelon_rational(&self) -> Echelon {
        let (rows, cols) = self.shape();
        // Clear denominators row by row, then eliminate fraction-free (Bareiss).
        let mut a: Vec<Vec<BigInt>> = (0..rows)
            .map(|i| {
                let row = &self.data[i * cols..(i + 1) * cols];
                let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, pr);
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    for j in c + 1..cols {
                        a[i][j] = &a[i][j] * &a[r][c] / &prev;
                    }
                    continue;
                }
                for j in c + 1..cols {
                    let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        // Back substitution to reduced form over ℚ.
        let mut q: Vec<Vec<Scalar>> = a
            .into_iter()
            .map(|row| {
                let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                row.into_iter()
                    .map(|x| if g.is_zero() { Scalar::zero() } else { Scalar::from_integer(x / &g) })
                    .collect()
            })
            .collect();
        for (k, &c) in pivots.iter().enumerate().rev() {
            let piv = q[k][c].clone();
            for x in q[k].iter_mut() {
                *x = &*x / &piv;
            }
            for i in 0..k {
                let f = q[i][c].clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let t = &f * &q[k][j];
                    q[i][j] = &q[i][j] - t;
                }
            }
        }
        let data = q.into_iter().flatten().collect();
        Echelon { rref: Matrix { field: self.field, rows, cols, data }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Rank and an echelon-normalised kernel basis (as columns of a matrix).
    ///
    /// For every free column `f` (ascending) the basis vector has a 1 in
    /// position `f`, zeros in the other free positions, and the negated RREF
    /// entries in the pivot positions.
    pub fn rank_kernel(&self) -> (usize, Matrix) {
        let e = self.echelon();
        let f = self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (r, &pc) in e.pivots.iter().enumerate() {
                let v = e.rref.get(r, fc);
                if !v.is_zero() {
                    k.set(pc, j, f.neg(v));
                }
            }
        }
        debug_assert_eq!(e.pivots.len() + free.len(), self.cols, "rank-nullity");
        (e.pivots.len(), k)
    }

    pub fn kernel(&self) -> Matrix {
        self.rank_kernel().1
    }

    /// A basis of the column space, as the pivot columns of `self`.
    pub fn image_basis(&self) -> Matrix {
        let e = self.echelon();
        self.select_cols(&e.pivots)
    }

    /// Functionals spanning the annihilator of the image: a `(rows − rank) × rows`
    /// matrix `C` of full row rank with `C · self = 0`. Its rows form a basis of
    /// the dual of the cokernel; as a map it is the projection onto the cokernel.
    pub fn cokernel(&self) -> Matrix {
        self.transpose().kernel().transpose()
    }

    /// Solves `self · X = b`; `None` when inconsistent. Free variables are zero.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve shape mismatch");
        let aug = self.hstack(b);
        let e = aug.echelon();
        if e.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &c) in e.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, e.rref.get(r, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.field, self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Extends the (independent) columns of `self` to a basis of the ambient space
    /// by standard basis vectors; returns the indices of the added unit vectors.
    pub fn complement_units(&self) -> Vec<usize> {
        let n = self.rows;
        let mut cur = self.clone();
        let mut rank = cur.rank();
        let mut added = Vec::new();
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = Matrix::zeros(self.field, n, 1);
            e.set(i, 0, self.field.one());
            let next = cur.hstack(&e);
            let r = next.rank();
            if r > rank {
                cur = next;
                rank = r;
                added.push(i);
            }
        }
        added
    }

    pub fn trace(&self) -> Scalar {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Entries as strings, row-major (for JSON export).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|x| x.to_string()).collect()).collect()
    }

    pub fn entries_abs_max_bits(&self) -> u64 {
        self.data.iter().map(|x| x.numer().abs().bits().max(x.denom().bits())).max().unwrap_or(0)
    }
}
