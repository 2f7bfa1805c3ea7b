//! Weil q-polynomials: palindromy, the real counterpart `p(x) = x^n h(x + q/x)`
//! in both directions, Weil and ordinarity predicates, and exhaustive
//! enumeration of ordinary real Weil polynomials at desk scale.

mod convert;
mod enumerate;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{
    is_prime_power, is_square, sign_at, sturm_count, Endpoint, IntPoly, RatPoly,
};
use crate::{Error, Result};

pub use convert::{
    from_real_counterpart, from_real_counterpart_rat, real_counterpart, real_counterpart_rat,
    universal_matrix,
};
pub(crate) use convert::counterpart_unchecked;
pub use enumerate::enumerate_ordinary_real_weil;

/// Base field data: `q = p^a` and the half-degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilContext {
    q: BigInt,
    p: BigInt,
    a: u32,
    n: usize,
}

impl WeilContext {
    pub fn new(q: &BigInt, n: usize) -> Result<Self> {
        let (p, a) = is_prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
        if n == 0 {
            return Err(Error::InvalidInput("half-degree n must be positive".into()));
        }
        Ok(WeilContext { q: q.clone(), p, a, n })
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// A Weil polynomial together with its real counterpart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolyPair {
    p_poly: IntPoly,
    h_poly: IntPoly,
    ctx: WeilContext,
}

impl WeilPolyPair {
    pub fn from_p(p: &IntPoly, q: &BigInt) -> Result<Self> {
        let h = real_counterpart(p, q)?;
        let ctx = WeilContext::new(q, h.degree().unwrap_or(0))?;
        Ok(WeilPolyPair { p_poly: p.clone(), h_poly: h, ctx })
    }

    pub fn from_h(h: &IntPoly, q: &BigInt) -> Result<Self> {
        let p = from_real_counterpart(h, q)?;
        let ctx = WeilContext::new(q, h.degree().unwrap_or(0))?;
        Ok(WeilPolyPair { p_poly: p, h_poly: h.clone(), ctx })
    }

    pub fn p_poly(&self) -> &IntPoly {
        &self.p_poly
    }

    pub fn h_poly(&self) -> &IntPoly {
        &self.h_poly
    }

    pub fn ctx(&self) -> &WeilContext {
        &self.ctx
    }
}

/// Desk-scale limits for enumeration-style operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardConfig {
    pub max_n: usize,
    pub max_q: u64,
    pub max_atlas_n: usize,
}

impl Default for GuardConfig {
    fn default() -> Self {
        GuardConfig { max_n: 3, max_q: 13, max_atlas_n: 2 }
    }
}

impl GuardConfig {
    /// Parse overrides of the form `max_n=4,max_q=31,max_atlas_n=3`.
    pub fn parse_overrides(&self, overrides: &str) -> Result<Self> {
        let mut out = self.clone();
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("guard override {item:?} lacks '='")))?;
            let bad = || Error::InvalidInput(format!("guard override {item:?} is not a number"));
            match key.trim() {
                "max_n" => out.max_n = val.trim().parse().map_err(|_| bad())?,
                "max_q" => out.max_q = val.trim().parse().map_err(|_| bad())?,
                "max_atlas_n" => out.max_atlas_n = val.trim().parse().map_err(|_| bad())?,
                other => {
                    return Err(Error::InvalidInput(format!("unknown guard key {other:?}")))
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn check(&self, n: usize, max_n: usize, q: &BigInt) -> Result<()> {
        if n > max_n {
            return Err(Error::GuardExceeded { what: "n", limit: max_n as u64, got: n as u64 });
        }
        if *q > BigInt::from(self.max_q) {
            let got = crate::exact::to_u64(q).unwrap_or(u64::MAX);
            return Err(Error::GuardExceeded { what: "q", limit: self.max_q, got });
        }
        Ok(())
    }
}

fn half_degree(p: &RatPoly) -> Result<usize> {
    let deg = p.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if deg % 2 != 0 {
        return Err(Error::InvalidInput(format!("degree {deg} is odd")));
    }
    if !p.is_monic() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    Ok(deg / 2)
}

/// `a_{n-r} = q^r a_{n+r}` for `1 <= r <= n`.
pub fn is_q_palindromic_rat(p: &RatPoly, q: &BigInt) -> Result<bool> {
    let n = half_degree(p)?;
    let qr = BigRational::from_integer(q.clone());
    let mut qpow = BigRational::one();
    for r in 1..=n {
        qpow *= &qr;
        if p.coeff(n - r) != &qpow * p.coeff(n + r) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_q_palindromic(p: &IntPoly, q: &BigInt) -> Result<bool> {
    is_q_palindromic_rat(&p.to_rat(), q)
}

/// True when `p` vanishes at `sqrt(q)` or `-sqrt(q)`.
pub(crate) fn has_real_sqrt_q_root(p: &RatPoly, q: &BigInt) -> bool {
    if is_square(q) {
        let s = BigRational::from_integer(q.sqrt());
        p.eval(&s).is_zero() || p.eval(&-s).is_zero()
    } else {
        let x2q = RatPoly::new(vec![BigRational::from_integer(-q), BigRational::zero(), BigRational::one()]);
        p.rem(&x2q).expect("nonzero divisor").is_zero()
    }
}

/// Squarefree part of `f` is totally real with every root in `(-2 sqrt q, 2 sqrt q)`.
pub fn roots_in_weil_interval(f: &RatPoly, q: &BigInt) -> Result<bool> {
    let s = f.squarefree_part();
    let d = s.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if d == 0 {
        return Ok(true);
    }
    if sturm_count(&s, &Endpoint::NegInf, &Endpoint::PosInf)? != d {
        return Ok(false);
    }
    let four_q = q * BigInt::from(4);
    let lo = Endpoint::sqrt_multiple(-1, &four_q)?;
    let hi = Endpoint::sqrt_multiple(1, &four_q)?;
    if sign_at(&s, &hi) == 0 {
        return Ok(false);
    }
    Ok(sturm_count(&s, &lo, &hi)? == d)
}

/// Monic integral `h` is the real counterpart of a Weil q-polynomial without real roots.
pub fn is_real_weil(h: &IntPoly, q: &BigInt) -> Result<bool> {
    if !h.is_monic() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    roots_in_weil_interval(&h.to_rat(), q)
}

/// Palindromic `p` whose real counterpart is totally real and strictly inside the Weil interval.
pub fn is_weil_q_polynomial(p: &IntPoly, q: &BigInt) -> Result<bool> {
    let h = real_counterpart(p, q)?;
    roots_in_weil_interval(&h.to_rat(), q)
}

/// Middle coefficient nonzero and coprime to `q`.
pub fn is_ordinary(p: &IntPoly, q: &BigInt) -> bool {
    match p.degree() {
        Some(d) if d % 2 == 0 => {
            let mid = p.coeff(d / 2);
            !mid.is_zero() && mid.gcd(q).is_one()
        }
        _ => false,
    }
}

/// Constant term nonzero and coprime to `q`.
pub fn is_ordinary_real(h: &IntPoly, q: &BigInt) -> bool {
    let c = h.coeff(0);
    !c.is_zero() && c.gcd(q).is_one() && !h.is_zero()
}

/// Validate `q >= 2` as an integer.
pub(crate) fn require_q(q: &BigInt) -> Result<()> {
    if q < &BigInt::from(2) || q.is_negative() {
        return Err(Error::InvalidInput(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn palindromy() {
        let q = int(5);
        assert!(is_q_palindromic(&ip(&[5, 0, 1]), &q).unwrap());
        assert!(is_q_palindromic(&ip(&[5, -2, 1]), &q).unwrap());
        assert!(!is_q_palindromic(&ip(&[1, 1, 1]), &q).unwrap());
        assert!(is_q_palindromic(&ip(&[1, 1, 1, 1]), &q).is_err());
        assert!(is_q_palindromic(&ip(&[5, 0, 2]), &q).is_err());
    }

    #[test]
    fn weil_predicates() {
        let q = int(5);
        assert!(is_weil_q_polynomial(&ip(&[5, -4, 1]), &q).unwrap());
        assert!(!is_weil_q_polynomial(&ip(&[5, -5, 1]), &q).unwrap());
        assert!(is_weil_q_polynomial(&ip(&[5, -2, 1]), &q).unwrap());
        assert!(is_real_weil(&ip(&[-2, 1]), &q).unwrap());
        // x^2 - 20: roots exactly +-2 sqrt 5 are excluded
        assert!(!is_real_weil(&ip(&[-20, 0, 1]), &q).unwrap());
        assert!(is_real_weil(&ip(&[-19, 0, 1]), &q).unwrap());
        // q square: x - 4 with q = 4 sits on the boundary
        assert!(!is_real_weil(&ip(&[-4, 1]), &int(4)).unwrap());
        assert!(is_real_weil(&ip(&[-3, 1]), &int(4)).unwrap());
    }

    #[test]
    fn ordinarity() {
        let q = int(5);
        assert!(is_ordinary(&ip(&[5, -2, 1]), &q));
        assert!(!is_ordinary(&ip(&[5, 0, 1]), &q));
        assert!(!is_ordinary_real(&ip(&[-3, 1]), &int(3)));
        assert!(is_ordinary_real(&ip(&[-2, 1]), &int(3)));
    }

    #[test]
    fn context_and_guard() {
        let ctx = WeilContext::new(&int(9), 2).unwrap();
        assert_eq!((ctx.p().clone(), ctx.a()), (int(3), 2));
        assert!(WeilContext::new(&int(6), 1).is_err());
        let g = GuardConfig::default().parse_overrides("max_n=4, max_q=31").unwrap();
        assert_eq!((g.max_n, g.max_q, g.max_atlas_n), (4, 31, 2));
        assert!(GuardConfig::default().parse_overrides("bogus=1").is_err());
    }
}
