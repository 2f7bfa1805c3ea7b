use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMat;

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...` (including trailing zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|v| !v.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn swap_rows(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// row[dst] += f * row[src]
fn add_row(m: &mut IntMat, dst: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        let v = &m[(dst, j)] + f * &m[(src, j)];
        m[(dst, j)] = v;
    }
}

/// col[dst] += f * col[src]
fn add_col(m: &mut IntMat, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let v = &m[(i, dst)] + f * &m[(i, src)];
        m[(i, dst)] = v;
    }
}

fn negate_row(m: &mut IntMat, r: usize) {
    for j in 0..m.cols() {
        let v = -&m[(r, j)];
        m[(r, j)] = v;
    }
}

pub fn smith_normal_form(m: &IntMat) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // Pivot: smallest nonzero absolute value in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, d, v };
            };
            swap_rows(&mut d, t, pi);
            swap_rows(&mut u, t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let f = -d[(i, t)].div_floor(&d[(t, t)]);
                add_row(&mut d, i, t, &f);
                add_row(&mut u, i, t, &f);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let f = -d[(t, j)].div_floor(&d[(t, t)]);
                add_col(&mut d, j, t, &f);
                add_col(&mut v, j, t, &f);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let piv = d[(t, t)].clone();
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    SmithForm { u, d, v }
}

/// Basis (as columns) of the integer kernel `{x in Z^n : M x = 0}`.
pub fn integer_kernel(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let idx: Vec<usize> = (r..m.cols()).collect();
    snf.v.select_columns(&idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMat) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        s
    }

    #[test]
    fn small_examples() {
        assert_eq!(check(&IntMat::identity(2)).diagonal(), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(
            check(&IntMat::from_i64(&[&[2, 0], &[0, 3]])).diagonal(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert_eq!(
            check(&IntMat::from_i64(&[&[1, -4], &[1, 1]])).diagonal(),
            vec![BigInt::from(1), BigInt::from(5)]
        );
        assert_eq!(
            check(&IntMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])).diagonal(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );
    }

    #[test]
    fn rectangular_and_kernel() {
        let m = IntMat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        let s = check(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(3)]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!((&m * &k).is_zero());
        let z = IntMat::zeros(2, 3);
        assert_eq!(check(&z).rank(), 0);
        assert_eq!(integer_kernel(&z).cols(), 3);
    }
}
