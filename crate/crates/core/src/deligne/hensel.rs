use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::DeligneModule;
use crate::exact::{IntMat, RatMat};
use crate::weil::is_ordinary;
use crate::{Error, Result};

/// `T (x) Z/p^k = T' + T''` with `F` invertible on `T'` and `0 mod p` on `T''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselSplit {
    pub modulus: BigInt,
    /// Idempotent onto `T'` in lattice coordinates, a polynomial in `F`.
    pub e: IntMat,
    /// `I - e`, onto `T''`.
    pub complement: IntMat,
    pub rank: usize,
}

fn mul_mod(a: &IntMat, b: &IntMat, m: &BigInt) -> IntMat {
    (a * b).reduce_mod(m)
}

fn pow_mod(a: &IntMat, exp: &BigInt, m: &BigInt) -> IntMat {
    let mut result = IntMat::identity(a.rows()).reduce_mod(m);
    let mut base = a.reduce_mod(m);
    let mut e = exp.clone();
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            result = mul_mod(&result, &base, m);
        }
        base = mul_mod(&base, &base, m);
        e /= &two;
    }
    result
}

/// Rank over `Z/p` for prime `p`.
pub(crate) fn rank_mod_p(a: &IntMat, p: &BigInt) -> usize {
    let mut m: Vec<Vec<BigInt>> = a.reduce_mod(p).to_rows();
    let rows = m.len();
    let cols = a.cols();
    let pm2 = p - BigInt::from(2);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = m[rank][c].modpow(&pm2, p);
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let factor = (&m[r][c] * &inv).mod_floor(p);
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x = (&*x - &factor * y).mod_floor(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Idempotent of the unit-root part: `F^(n |GL_n(F_p)|)` is idempotent mod `p`
/// and is lifted mod `p^k` by `e <- 3e^2 - 2e^3`.
pub fn hensel_split_mod_pk(m: &DeligneModule, tau: Option<&RatMat>, k: u32) -> Result<HenselSplit> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let ctx = m.ctx();
    let n = ctx.n();
    let p = ctx.p().clone();
    let f = m
        .f_on_lattice()
        .to_int()
        .ok_or_else(|| Error::Precondition("F does not preserve T".into()))?;
    let chi = m
        .charpoly()?
        .to_int()
        .ok_or_else(|| Error::Precondition("characteristic polynomial is not integral".into()))?;
    if !is_ordinary(&chi, ctx.q()) {
        return Err(Error::NotOrdinary("no unit/non-unit splitting".into()));
    }
    let pk = p.pow(k);
    let pn = p.pow(n as u32);
    let order: BigInt = (0..n as u32).map(|i| &pn - p.pow(i)).product();
    let mut e = pow_mod(&f, &(order * BigInt::from(n)), &pk);
    let dim = 2 * n;
    for _ in 0..=2 * (k as usize) + 2 {
        let e2 = mul_mod(&e, &e, &pk);
        if e2 == e {
            break;
        }
        let e3 = mul_mod(&e2, &e, &pk);
        e = (&e2.scale(&BigInt::from(3)) - &e3.scale(&BigInt::from(2))).reduce_mod(&pk);
    }
    if mul_mod(&e, &e, &pk) != e {
        return Err(Error::Internal("idempotent lift did not converge".into()));
    }
    let id = IntMat::identity(dim);
    let complement = (&id - &e).reduce_mod(&pk);
    let rank = rank_mod_p(&e, &p);
    if rank != n || rank_mod_p(&(&f * &e), &p) != n {
        return Err(Error::Internal(format!("unit part has rank {rank} != {n}")));
    }
    if !(&f * &complement).reduce_mod(&p).is_zero() {
        return Err(Error::Internal("F is not 0 mod p on the non-unit part".into()));
    }
    if mul_mod(&f, &e, &pk) != mul_mod(&e, &f, &pk) {
        return Err(Error::Internal("idempotent does not commute with F".into()));
    }
    if let Some(t) = tau {
        let t_t = m
            .lattice()
            .matrix_of(t)
            .to_int()
            .ok_or_else(|| Error::Precondition("tau does not preserve T".into()))?;
        // tau^-1 = tau
        if mul_mod(&mul_mod(&t_t, &e, &pk), &t_t, &pk) != complement {
            return Err(Error::Precondition("tau does not exchange T' and T''".into()));
        }
    }
    Ok(HenselSplit { modulus: pk, e, complement, rank })
}
