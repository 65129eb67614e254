//! Exact dense linear algebra over `ℚ` or `ℤ/p`.
//!
//! Scalars are `BigRational` in both cases; over `ℤ/p` every stored value
//! is an integer in `0..p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if crate::group::is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NonFieldCoefficients(format!("Z/{p} is not a field")))
        }
    }

    pub fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    pub fn one(&self) -> BigRational {
        BigRational::one()
    }

    pub fn from_i64(&self, v: i64) -> BigRational {
        self.reduce_int(BigInt::from(v))
    }

    fn reduce_int(&self, v: BigInt) -> BigRational {
        match self {
            Field::Rational => BigRational::from_integer(v),
            Field::Prime(p) => BigRational::from_integer(v.mod_floor(&BigInt::from(*p))),
        }
    }

    /// Maps a rational into the field; over `ℤ/p` the denominator must be a unit.
    pub fn embed(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            Field::Rational => Ok(x.clone()),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let den = x.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::CoefficientMismatch(format!("{x} has denominator divisible by {p}")));
                }
                let inv = den.modpow(&(&pb - BigInt::from(2)), &pb);
                Ok(BigRational::from_integer((x.numer().mod_floor(&pb) * inv).mod_floor(&pb)))
            }
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.fix(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.fix(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.fix(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.fix(-a)
    }

    pub fn inv(&self, a: &BigRational) -> BigRational {
        match self {
            Field::Rational => a.recip(),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                BigRational::from_integer(a.numer().modpow(&(&pb - BigInt::from(2)), &pb))
            }
        }
    }

    fn fix(&self, v: BigRational) -> BigRational {
        match self {
            Field::Rational => v,
            Field::Prime(_) => self.reduce_int(v.to_integer()),
        }
    }
}

/// Dense row-major matrix over a [`Field`]. A map `M(X) → M(Y)` is a
/// `dim Y × dim X` matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut m = Self::zeros(field, r, cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, field.fix(v));
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigRational) {
        let cur = self.get(r, c).clone();
        let s = self.field.add(&cur, v);
        self.set(r, c, s);
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.field, other.field, "field mismatch in product");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
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
                    out.data[idx] = self.field.add(&out.data[idx], &self.field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(BigRational::zero(), |acc, (a, b)| self.field.add(&acc, &self.field.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &BigRational) -> Matrix {
        let s = self.field.fix(s.clone());
        let data = self.data.iter().map(|a| self.field.mul(a, &s)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Stacks rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, r * m.cols + k);
                }
            }
            let inv = f.inv(m.get(r, c));
            for k in c..m.cols {
                let v = f.mul(m.get(r, k), &inv);
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for k in c..m.cols {
                    let v = f.sub(m.get(i, k), &f.mul(&factor, m.get(r, k)));
                    m.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}` as the columns of the result.
    pub fn kernel(&self) -> Matrix {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(&self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, BigRational::one());
            for (i, &pc) in pivots.iter().enumerate() {
                let v = self.field.neg(rref.get(i, fc));
                k.set(pc, j, v);
            }
        }
        k
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, BigRational::one());
        }
        let (rref, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] >= n) {
            return None;
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, rref.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// For a matrix with independent columns, a matrix `P` with `P·self = I`.
    pub fn left_inverse(&self) -> Matrix {
        let k = self.cols;
        let (_, pivots) = self.transpose().rref();
        assert_eq!(pivots.len(), k, "columns are not independent");
        let mut sub = Matrix::zeros(&self.field, k, k);
        for (i, &r) in pivots.iter().enumerate() {
            for c in 0..k {
                sub.set(i, c, self.get(r, c).clone());
            }
        }
        let sinv = sub.inverse().expect("pivot rows are independent");
        let mut p = Matrix::zeros(&self.field, k, self.rows);
        for i in 0..k {
            for (j, &r) in pivots.iter().enumerate() {
                p.set(i, r, sinv.get(i, j).clone());
            }
        }
        p
    }

    /// Exact rational CSV, one row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Rank of an integer matrix, computed over `ℚ`.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let data = rows.iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
    Matrix::from_rows(&Field::Rational, data, cols).rank()
}

pub fn is_integer(x: &BigRational) -> bool {
    x.is_integer()
}

pub fn to_i64(x: &BigRational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn abs_is_one(x: &BigRational) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn kernel_and_rank() {
        let f = Field::Rational;
        let m = Matrix::from_rows(&f, vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]], 3);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn inverse_and_left_inverse() {
        let f = Field::Rational;
        let m = Matrix::from_rows(&f, vec![vec![q(2), q(1)], vec![q(1), q(1)]], 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&f, 2));
        let tall = Matrix::from_rows(&f, vec![vec![q(1), q(0)], vec![q(1), q(1)], vec![q(0), q(3)]], 2);
        assert_eq!(tall.left_inverse().mul(&tall), Matrix::identity(&f, 2));
        let singular = Matrix::from_rows(&f, vec![vec![q(1), q(1)], vec![q(1), q(1)]], 2);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_rows(&f, vec![vec![q(2), q(3)], vec![q(1), q(4)]], 2);
        // det = 8 - 3 = 5 = 0 mod 5
        assert_eq!(m.rank(), 1);
        assert_eq!(f.embed(&BigRational::new(BigInt::from(1), BigInt::from(2))).unwrap(), q(3));
        assert!(f.embed(&BigRational::new(BigInt::from(1), BigInt::from(5))).is_err());
        assert!(Field::prime(6).is_err());
    }
}
