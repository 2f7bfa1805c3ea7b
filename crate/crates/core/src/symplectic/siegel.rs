use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SymplecticElement;
use crate::exact::{gcd_all, IntMat};
use crate::{Error, Result};

struct Reducer {
    n: usize,
    g: IntMat,
    v: Vec<BigInt>,
}

impl Reducer {
    fn apply(&mut self, op: IntMat) {
        self.v = op.mul_vec(&self.v);
        self.g = &op * &self.g;
    }

    /// `diag(X, X^-t)` for `X = I + k E_ij`.
    fn add_row(&mut self, i: usize, j: usize, k: BigInt) {
        let mut op = IntMat::identity(2 * self.n);
        op[(i, j)] = k.clone();
        op[(self.n + j, self.n + i)] = -k;
        self.apply(op);
    }

    /// `diag(X, X^-t)` for the transposition `X = (i j)`.
    fn swap(&mut self, i: usize, j: usize) {
        let n = self.n;
        let mut op = IntMat::identity(2 * n);
        for (a, b) in [(i, j), (n + i, n + j)] {
            op[(a, a)] = BigInt::zero();
            op[(b, b)] = BigInt::zero();
            op[(a, b)] = BigInt::one();
            op[(b, a)] = BigInt::one();
        }
        self.apply(op);
    }

    fn negate(&mut self, i: usize) {
        let mut op = IntMat::identity(2 * self.n);
        op[(i, i)] = -BigInt::one();
        op[(self.n + i, self.n + i)] = -BigInt::one();
        self.apply(op);
    }

    fn j(&mut self) {
        self.apply(IntMat::standard_j(self.n));
    }

    /// Euclid on the first half: `a = (g, 0, .., 0)` with `g > 0`.
    fn clear_a(&mut self) {
        let n = self.n;
        loop {
            let nonzero: Vec<usize> = (0..n).filter(|&i| !self.v[i].is_zero()).collect();
            let Some(&m) = nonzero.iter().min_by_key(|&&i| self.v[i].abs()) else {
                return;
            };
            if nonzero.len() == 1 {
                if m != 0 {
                    self.swap(0, m);
                }
                if self.v[0].is_negative() {
                    self.negate(0);
                }
                return;
            }
            for &i in &nonzero {
                if i != m {
                    let k = self.v[i].div_floor(&self.v[m]);
                    self.add_row(i, m, -k);
                }
            }
        }
    }

    /// `(I, 0; S, I)` with `S` supported on the first row and column.
    fn reduce_b(&mut self) {
        let n = self.n;
        let g = self.v[0].clone();
        let mut op = IntMat::identity(2 * n);
        for i in 0..n {
            let s = -self.v[n + i].div_floor(&g);
            op[(n + i, 0)] = s.clone();
            if i != 0 {
                op[(n, i)] = s;
            }
        }
        self.apply(op);
    }
}

/// Integral symplectic `g` with `g v = e_1`, for primitive `v` in `Z^2n`.
pub fn siegel_reduce_int(v: &[BigInt]) -> Result<IntMat> {
    if v.is_empty() || !v.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!("vector length {} is not 2n > 0", v.len())));
    }
    let content = gcd_all(v);
    if !content.is_one() {
        return Err(Error::NotPrimitive(content.to_string()));
    }
    let n = v.len() / 2;
    let mut r = Reducer { n, g: IntMat::identity(2 * n), v: v.to_vec() };
    loop {
        r.clear_a();
        if r.v[0].is_zero() {
            r.j();
            continue;
        }
        r.reduce_b();
        if r.v[n..].iter().all(Zero::is_zero) {
            break;
        }
        r.j();
    }
    debug_assert!(r.v[0].is_one());
    Ok(r.g)
}

pub fn siegel_reduce(v: &[BigInt]) -> Result<SymplecticElement> {
    SymplecticElement::from_int(&siegel_reduce_int(v)?)
}
