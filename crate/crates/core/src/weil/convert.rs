use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{half_degree, has_real_sqrt_q_root, is_q_palindromic_rat};
use crate::exact::{IntMat, IntPoly, RatPoly};
use crate::{Error, Result};

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// The `(2n+1) x (n+1)` matrix with `a_r = sum_j A[r][j] b_j`, where
/// `A[r][j] = C(j, (r+j-n)/2) q^((n-r+j)/2)` when `r+j-n` is even and
/// `n-j <= r <= n+j`, and zero otherwise.
pub fn universal_matrix(n: usize, q: &BigInt) -> IntMat {
    let mut a = IntMat::zeros(2 * n + 1, n + 1);
    for r in 0..=2 * n {
        for j in 0..=n {
            if r + j < n || r > n + j || !(r + j - n).is_multiple_of(2) {
                continue;
            }
            let t = (r + j - n) / 2;
            let e = (n + j - r) / 2;
            a[(r, j)] = binomial(j, t) * num_traits::pow(q.clone(), e);
        }
    }
    a
}

/// Back-substitution through the unit upper-triangular lower half of the
/// universal matrix. Assumes `p` monic, palindromic, of degree `2n`.
pub(crate) fn counterpart_unchecked(p: &RatPoly, q: &BigInt, n: usize) -> RatPoly {
    let a = universal_matrix(n, q);
    let mut b = vec![BigRational::zero(); n + 1];
    for s in (0..=n).rev() {
        let mut v = p.coeff(n + s);
        for j in s + 1..=n {
            v -= BigRational::from_integer(a[(n + s, j)].clone()) * &b[j];
        }
        b[s] = v;
    }
    RatPoly::new(b)
}

/// Real counterpart `h` with `p(x) = x^n h(x + q/x)`, over the rationals.
pub fn real_counterpart_rat(p: &RatPoly, q: &BigInt) -> Result<RatPoly> {
    let n = half_degree(p)?;
    if !is_q_palindromic_rat(p, q)? {
        return Err(Error::NotPalindromic { q: q.to_string() });
    }
    if has_real_sqrt_q_root(p, q) {
        return Err(Error::RealRoots);
    }
    let h = counterpart_unchecked(p, q, n);
    if from_real_counterpart_rat(&h, q)? != *p {
        return Err(Error::Internal("real counterpart does not reproduce p".into()));
    }
    Ok(h)
}

pub fn real_counterpart(p: &IntPoly, q: &BigInt) -> Result<IntPoly> {
    real_counterpart_rat(&p.to_rat(), q)?
        .to_int()
        .ok_or_else(|| Error::Internal("integral p produced a non-integral counterpart".into()))
}

/// `p(x) = x^n h(x + q/x)` for monic `h` of degree `n`.
pub fn from_real_counterpart_rat(h: &RatPoly, q: &BigInt) -> Result<RatPoly> {
    let n = h.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if !h.is_monic() {
        return Err(Error::InvalidInput("real counterpart must be monic".into()));
    }
    let a = universal_matrix(n, q);
    let coeffs = (0..=2 * n)
        .map(|r| {
            (0..=n).fold(BigRational::zero(), |acc, j| {
                acc + BigRational::from_integer(a[(r, j)].clone()) * h.coeff(j)
            })
        })
        .collect();
    Ok(RatPoly::new(coeffs))
}

pub fn from_real_counterpart(h: &IntPoly, q: &BigInt) -> Result<IntPoly> {
    Ok(from_real_counterpart_rat(&h.to_rat(), q)?
        .to_int()
        .expect("integral input gives integral output"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn conversions() {
        let q = int(5);
        assert_eq!(real_counterpart(&ip(&[5, -2, 1]), &q).unwrap(), ip(&[-2, 1]));
        assert_eq!(from_real_counterpart(&ip(&[-2, 1]), &q).unwrap(), ip(&[5, -2, 1]));
        let prod = &ip(&[5, -2, 1]) * &ip(&[5, -1, 1]);
        assert_eq!(real_counterpart(&prod, &q).unwrap(), ip(&[2, -3, 1]));
        for n in 1..4u32 {
            let p = ip(&[5, 0, 1]).pow(n);
            assert_eq!(real_counterpart(&p, &q).unwrap(), IntPoly::monomial(int(1), n as usize));
        }
        assert_eq!(from_real_counterpart(&ip(&[0, 0, 1]), &int(3)).unwrap(), ip(&[9, 0, 6, 0, 1]));
    }

    #[test]
    fn rejections() {
        let q = int(5);
        assert!(matches!(real_counterpart(&ip(&[1, 1, 1]), &q), Err(Error::NotPalindromic { .. })));
        // (x^2 - 5)^2 is palindromic with real roots
        let p = ip(&[-5, 0, 1]).pow(2);
        assert!(matches!(real_counterpart(&p, &q), Err(Error::RealRoots)));
        // (x - 2)^2 with q = 4
        assert!(matches!(real_counterpart(&ip(&[4, -4, 1]), &int(4)), Err(Error::RealRoots)));
    }

    #[test]
    fn n4_matrix_entries() {
        let q = int(7);
        let a = universal_matrix(4, &q);
        assert_eq!((a.rows(), a.cols()), (9, 5));
        let q2 = &q * &q;
        let q3 = &q2 * &q;
        assert_eq!(a[(0, 4)], &q3 * &q);
        assert_eq!(a[(2, 4)], int(4) * &q3);
        assert_eq!(a[(4, 4)], int(6) * &q2);
        assert_eq!(a[(4, 0)], int(1));
        assert_eq!(a[(3, 1)], q);
        for s in 0..=4 {
            assert_eq!(a[(4 + s, s)], int(1));
        }
    }

    #[test]
    fn rational_coefficients_stay_rational() {
        let h = RatPoly::new(vec![rat(1, 2), rat(1, 1)]);
        let p = from_real_counterpart_rat(&h, &int(5)).unwrap();
        assert!(!p.is_integral());
        assert_eq!(real_counterpart_rat(&p, &int(5)).unwrap(), h);
    }
}
