use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{IntMat, RatMat};

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

fn add_col(m: &mut IntMat, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let v = &m[(i, dst)] + f * &m[(i, src)];
        m[(i, dst)] = v;
    }
}

/// Column Hermite normal form of the lattice spanned by the columns of `m`.
///
/// The result has one column per rank; in the pivot row `i` of column `c`
/// the pivot is positive, later columns vanish, and earlier columns are
/// reduced into `[0, pivot)`. For a full-rank square input this is lower
/// triangular with `0 <= h[i][j] < h[i][i]` for `j < i`.
pub fn column_hnf(m: &IntMat) -> IntMat {
    let mut h = m.clone();
    let cols = h.cols();
    let mut c = 0;
    for i in 0..h.rows() {
        if c == cols {
            break;
        }
        // Euclid on row i across columns c..cols.
        loop {
            let piv = (c..cols)
                .filter(|&j| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs()));
            let Some(pj) = piv else { break };
            swap_cols(&mut h, c, pj);
            let mut done = true;
            for j in c + 1..cols {
                if !h[(i, j)].is_zero() {
                    let f = -h[(i, j)].div_floor(&h[(i, c)]);
                    add_col(&mut h, j, c, &f);
                    done &= h[(i, j)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            for r in 0..h.rows() {
                let v = -&h[(r, c)];
                h[(r, c)] = v;
            }
        }
        let piv = h[(i, c)].clone();
        for j in 0..c {
            let f = -h[(i, j)].div_floor(&piv);
            if !f.is_zero() {
                add_col(&mut h, j, c, &f);
            }
        }
        c += 1;
    }
    let idx: Vec<usize> = (0..c).collect();
    h.select_columns(&idx)
}

/// Column HNF for a lattice in `Q^n` given by rational generators.
pub fn column_hnf_rational(m: &RatMat) -> RatMat {
    let den = m.denominator();
    let scaled = m
        .scale(&BigRational::from_integer(den.clone()))
        .to_int()
        .expect("cleared denominators");
    let inv = BigRational::new(BigInt::from(1), den);
    column_hnf(&scaled).to_rat().scale(&inv)
}

/// A basis of the integer span of the given columns.
pub fn span_basis(m: &IntMat) -> IntMat {
    column_hnf(m)
}
