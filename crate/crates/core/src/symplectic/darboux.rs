use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::half_dim;
use crate::exact::{column_hnf_rational, RatMat};
use crate::{Error, Result};

/// Coefficient ring for a Darboux basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Rational,
    Integer,
}

fn form(g: &RatMat, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let gy = g.mul_vec(y);
    x.iter().zip(&gy).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

fn combo(coeffs: &[BigRational], vecs: &[Vec<BigRational>]) -> Vec<BigRational> {
    let dim = vecs[0].len();
    let mut out = vec![BigRational::zero(); dim];
    for (c, v) in coeffs.iter().zip(vecs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Integer coefficients `c` with `sum c_i v_i = gcd(v)`.
fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        if v.is_zero() {
            coeffs.push(BigInt::zero());
            continue;
        }
        if g.is_zero() {
            g = v.abs();
            coeffs.push(v.signum());
            continue;
        }
        let e = g.extended_gcd(v);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    (g, coeffs)
}

/// Columns `P = (x_1..x_n, y_1..y_n)` with `P^t G P = J`; unimodular over `Z`.
pub fn darboux_basis(g: &RatMat, ring: Ring) -> Result<RatMat> {
    let n = half_dim(g)?;
    if !g.is_antisymmetric() {
        return Err(Error::InvalidInput("Gram matrix is not antisymmetric".into()));
    }
    let det = g.determinant()?;
    if det.is_zero() {
        return Err(Error::InvalidInput("Gram matrix is degenerate".into()));
    }
    if ring == Ring::Integer {
        if !g.is_integral() {
            return Err(Error::InvalidInput("Gram matrix is not integral".into()));
        }
        if !det.abs().is_one() {
            return Err(Error::Precondition(format!(
                "form is only weakly non-degenerate over Z (det = {det})"
            )));
        }
    }
    let dim = 2 * n;
    let mut basis: Vec<Vec<BigRational>> = (0..dim)
        .map(|j| {
            let mut e = vec![BigRational::zero(); dim];
            e[j] = BigRational::one();
            e
        })
        .collect();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    while !basis.is_empty() {
        let x1 = basis[0].clone();
        let vals: Vec<BigRational> = basis.iter().map(|b| form(g, &x1, b)).collect();
        let y1 = match ring {
            Ring::Integer => {
                let ints: Vec<BigInt> = vals.iter().map(|v| v.to_integer()).collect();
                let (gcd, c) = bezout(&ints);
                if !gcd.is_one() {
                    return Err(Error::Internal(format!("omega(x1, -) has content {gcd}")));
                }
                let c: Vec<BigRational> = c.into_iter().map(BigRational::from_integer).collect();
                combo(&c, &basis)
            }
            Ring::Rational => {
                let j = vals
                    .iter()
                    .position(|v| !v.is_zero())
                    .ok_or_else(|| Error::Internal("degenerate restriction".into()))?;
                let inv = vals[j].recip();
                basis[j].iter().map(|v| v * &inv).collect()
            }
        };
        // Projection onto the orthogonal complement of span{x1, y1}.
        let projected: Vec<Vec<BigRational>> = basis
            .iter()
            .map(|v| {
                let a = form(g, v, &y1);
                let b = form(g, v, &x1);
                v.iter()
                    .zip(&x1)
                    .zip(&y1)
                    .map(|((vi, xi), yi)| vi - &a * xi + &b * yi)
                    .collect()
            })
            .collect();
        xs.push(x1);
        ys.push(y1);
        if basis.len() == 2 {
            break;
        }
        let span = column_hnf_rational(&RatMat::from_columns(&projected)?);
        if span.cols() != basis.len() - 2 {
            return Err(Error::Internal("complement has the wrong rank".into()));
        }
        basis = (0..span.cols()).map(|j| span.column(j)).collect();
    }
    xs.extend(ys);
    let p = RatMat::from_columns(&xs)?;
    debug_assert_eq!(&(&p.transpose() * g) * &p, RatMat::standard_j(n));
    Ok(p)
}
