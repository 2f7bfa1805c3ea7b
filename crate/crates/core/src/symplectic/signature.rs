use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exact::{sturm_count, Endpoint, IntPoly, RatMat, RatPoly};
use crate::{Error, Result};

/// One eigenvalue of `A` with the sign of `C` on its eigenline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureEntry {
    /// Primitive integral polynomial vanishing at the eigenvalue.
    pub minpoly: IntPoly,
    /// Isolating interval `(lo, hi]`; `lo = hi` for rational eigenvalues.
    pub lo: BigRational,
    pub hi: BigRational,
    pub signature: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureProfile {
    pub entries: Vec<SignatureEntry>,
}

fn endpoint(v: &BigRational) -> Endpoint {
    Endpoint::rational(v.clone())
}

fn roots_in(f: &RatPoly, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    sturm_count(f, &endpoint(lo), &endpoint(hi))
}

/// Disjoint intervals `(lo, hi]`, each holding exactly one root of squarefree `g`.
fn isolate(g: &RatPoly) -> Result<Vec<(BigRational, BigRational)>> {
    let lead = g.leading().expect("nonzero").clone();
    let bound = g
        .coeffs()
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((lo, hi)) = stack.pop() {
        match roots_in(g, &lo, &hi)? {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Polynomial matrix `adj(xI - A) = sum_j x^j B_j`.
fn adjugate_coeffs(a: &RatMat, f: &RatPoly) -> Vec<RatMat> {
    let n = a.rows();
    let mut bs = vec![RatMat::zeros(n, n); n];
    bs[n - 1] = RatMat::identity(n);
    for j in (1..n).rev() {
        bs[j - 1] = &(a * &bs[j]) + &RatMat::scalar(n, f.coeff(j));
    }
    bs
}

fn rat_sign(v: &BigRational) -> i64 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `C` on each (one-dimensional) eigenspace of `A`.
pub fn signature_profile(a: &RatMat, c: &RatMat) -> Result<SignatureProfile> {
    if !a.is_square() || !c.is_square() || a.rows() != c.rows() || a.rows() == 0 {
        return Err(Error::Dimension("A and C must be square of equal size".into()));
    }
    if !c.is_symmetric() {
        return Err(Error::Precondition("C is not symmetric".into()));
    }
    if c.determinant()?.is_zero() {
        return Err(Error::Precondition("C is singular".into()));
    }
    if &a.transpose() * c != c * a {
        return Err(Error::Precondition("A^t C != C A".into()));
    }
    let n = a.rows();
    let f = a.charpoly()?;
    if !f.is_squarefree() {
        return Err(Error::Unsupported("repeated eigenvalues of A".into()));
    }
    if sturm_count(&f, &Endpoint::NegInf, &Endpoint::PosInf)? != n {
        return Err(Error::Precondition("A has non-real eigenvalues".into()));
    }

    let mut entries = Vec::new();
    let mut rest = f.clone();
    for r in f.rational_roots() {
        let lin = RatPoly::new(vec![-r.clone(), BigRational::one()]);
        rest = rest.exact_div(&lin)?;
        let shifted = a - &RatMat::scalar(n, r.clone());
        let v = shifted.nullspace().into_iter().next().expect("eigenvector");
        let cv = c.mul_vec(&v);
        let val = v.iter().zip(&cv).fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
        entries.push(SignatureEntry {
            minpoly: lin.primitive_part(),
            lo: r.clone(),
            hi: r,
            signature: rat_sign(&val),
        });
    }

    if rest.degree().unwrap_or(0) > 0 {
        let label = rest.primitive_part();
        let bs = adjugate_coeffs(a, &f);
        let two = BigRational::from_integer(BigInt::from(2));
        for (lo0, hi0) in isolate(&rest)? {
            let vanishes_here = |p: &RatPoly, lo: &BigRational, hi: &BigRational| -> Result<bool> {
                if p.is_zero() {
                    return Ok(true);
                }
                let gcd = p.gcd(&rest);
                Ok(gcd.degree().unwrap_or(0) > 0 && roots_in(&gcd, lo, hi)? > 0)
            };
            // A column of the adjugate that is nonzero at this root.
            let mut column = None;
            for col in 0..n {
                let v: Vec<RatPoly> = (0..n)
                    .map(|i| RatPoly::new(bs.iter().map(|b| b[(i, col)].clone()).collect()))
                    .collect();
                let mut nonzero = false;
                for p in &v {
                    if !vanishes_here(p, &lo0, &hi0)? {
                        nonzero = true;
                        break;
                    }
                }
                if nonzero {
                    column = Some(v);
                    break;
                }
            }
            let v = column.ok_or_else(|| Error::Internal("adjugate vanishes at eigenvalue".into()))?;
            let mut quad = RatPoly::zero();
            for i in 0..n {
                for k in 0..n {
                    if !c[(i, k)].is_zero() {
                        quad = &quad + &(&v[i] * &v[k]).scale(&c[(i, k)]);
                    }
                }
            }
            let quad = quad.rem(&rest)?;
            if quad.is_zero() || vanishes_here(&quad, &lo0, &hi0)? {
                return Err(Error::Internal("C is degenerate on an eigenline".into()));
            }
            let qs = quad.squarefree_part();
            let (mut lo, mut hi) = (lo0.clone(), hi0.clone());
            let sign = loop {
                if qs.degree().unwrap_or(0) == 0 || roots_in(&qs, &lo, &hi)? == 0 {
                    break rat_sign(&quad.eval(&hi));
                }
                let mid = (&lo + &hi) / &two;
                if roots_in(&rest, &lo, &mid)? == 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            };
            entries.push(SignatureEntry { minpoly: label.clone(), lo: lo0, hi: hi0, signature: sign });
        }
    }
    entries.sort_by(|x, y| x.hi.cmp(&y.hi));
    Ok(SignatureProfile { entries })
}
