use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{common_denominator, IntPoly, Poly, RatPoly, Scalar};
use crate::{Error, Result};

/// Dense row-major matrix over an exact ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMat = Matrix<BigInt>;
pub type RatMat = Matrix<BigRational>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for tests and literals. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    pub fn scalar(n: usize, s: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Assemble `(a b; c d)` from four equally sized square blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        let n = a.rows;
        for blk in [a, b, c, d] {
            if blk.rows != n || blk.cols != n {
                return Err(Error::Dimension("blocks must be square of equal size".into()));
            }
        }
        let mut out = Self::zeros(2 * n, 2 * n);
        out.set_block(0, 0, a);
        out.set_block(0, n, b);
        out.set_block(n, 0, c);
        out.set_block(n, n, d);
        Ok(out)
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::Dimension("ragged columns".into()));
        }
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Select the given columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<T>> = idx.iter().map(|&j| self.column(j)).collect();
        let mut m = Self::from_columns(&cols).expect("uniform columns");
        if idx.is_empty() {
            m.rows = self.rows;
        }
        m
    }

    /// Entries at the given rows and columns, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == -&self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Evaluate a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly(&self, p: &Poly<T>) -> Self {
        let n = self.rows;
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zeros(n, n), |acc, c| &(&acc * self) + &Self::scalar(n, c.clone()))
    }

    /// The standard symplectic matrix `J = (0 I; -I 0)` of size `2n`.
    pub fn standard_j(n: usize) -> Self {
        let mut j = Self::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = T::one();
            j[(n + i, i)] = -T::one();
        }
        j
    }

    /// The standard involution `diag(-I, I)` of size `2n`.
    pub fn standard_tau(n: usize) -> Self {
        let mut t = Self::identity(2 * n);
        for i in 0..n {
            t[(i, i)] = -T::one();
        }
        t
    }
}

impl IntMat {
    pub fn to_rat(&self) -> RatMat {
        self.map(|v| BigRational::from_integer(v.clone()))
    }

    pub fn determinant(&self) -> Result<BigInt> {
        Ok(self.to_rat().determinant()?.to_integer())
    }

    /// Faddeev-LeVerrier with exact integer division.
    pub fn charpoly(&self) -> IntPoly {
        assert!(self.is_square(), "characteristic polynomial of non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = &(self * &m) + &Self::scalar(n, coeffs[n + 1 - k].clone());
            let t = (self * &m).trace();
            coeffs[n - k] = -t / BigInt::from(k);
        }
        IntPoly::new(coeffs)
    }

    /// Entries reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: &BigInt) -> Self {
        use num_integer::Integer;
        self.map(|v| v.mod_floor(m))
    }
}

impl RatMat {
    pub fn from_int(m: &IntMat) -> Self {
        m.to_rat()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMat> {
        self.is_integral().then(|| self.map(|v| v.to_integer()))
    }

    /// Lcm of all denominators.
    pub fn denominator(&self) -> BigInt {
        common_denominator(self.data.iter())
    }

    /// Row echelon reduction; returns (reduced matrix, pivot columns, sign of
    /// the row permutation, product of pivots before normalisation).
    fn rref(&self) -> (Self, Vec<usize>, BigRational) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det_factor = BigRational::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
                det_factor = -det_factor;
            }
            let pv = m[(r, c)].clone();
            det_factor *= &pv;
            let inv = pv.recip();
            for j in 0..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, det_factor)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let (_, pivots, det) = self.rref();
        Ok(if pivots.len() == self.rows { det } else { BigRational::zero() })
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (red, pivots, _) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(red.block(0, n, n, n))
    }

    /// Basis of the right nullspace, as columns.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (red, pivots, _) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -red[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solve `self * X = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.inverse()? * rhs)
    }

    /// Monic characteristic polynomial `det(xI - self)` (Faddeev-LeVerrier).
    pub fn charpoly(&self) -> Result<RatPoly> {
        if !self.is_square() {
            return Err(Error::Dimension("characteristic polynomial of non-square matrix".into()));
        }
        // charpoly(A)(x) = d^-n charpoly(dA)(dx) with dA integral
        let d = self.denominator();
        let scaled = self.scale(&BigRational::from_integer(d.clone())).to_int().expect("cleared denominators");
        let int_coeffs = scaled.charpoly();
        let n = self.rows;
        let mut dpow = BigInt::one();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for i in (0..=n).rev() {
            coeffs[i] = BigRational::new(int_coeffs.coeff(i), dpow.clone());
            dpow *= &d;
        }
        Ok(RatPoly::new(coeffs))
    }

    /// Sylvester's criterion on leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        (1..=self.rows).all(|k| {
            self.block(0, 0, k, k)
                .determinant()
                .is_ok_and(|d| d > BigRational::zero())
        })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out[(i, j)].clone() + a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}
