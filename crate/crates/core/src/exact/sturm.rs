use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::{QuadraticValue, RatPoly};
use crate::{Error, Result};

/// Interval endpoint for root counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInf,
    PosInf,
    Finite(QuadraticValue),
}

impl Endpoint {
    pub fn rational(v: BigRational) -> Self {
        Endpoint::Finite(QuadraticValue::rational(v))
    }

    pub fn int(v: i64) -> Self {
        Endpoint::Finite(QuadraticValue::from_int(&BigInt::from(v)))
    }

    /// `c * sqrt(d)` as an endpoint.
    pub fn sqrt_multiple(c: i64, d: &BigInt) -> Result<Self> {
        Ok(Endpoint::Finite(QuadraticValue::sqrt_multiple(
            BigRational::from_integer(BigInt::from(c)),
            d.clone(),
        )?))
    }

    fn cmp_endpoint(&self, other: &Self) -> Ordering {
        use Endpoint::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp_exact(b),
        }
    }

    fn sign_of(&self, p: &RatPoly) -> i8 {
        let Some(deg) = p.degree() else { return 0 };
        let lead = if p.leading().expect("nonzero").is_positive() { 1 } else { -1 };
        match self {
            Endpoint::PosInf => lead,
            Endpoint::NegInf => {
                if deg % 2 == 0 {
                    lead
                } else {
                    -lead
                }
            }
            Endpoint::Finite(x) => x.eval_poly(p).signum(),
        }
    }
}

impl From<BigRational> for Endpoint {
    fn from(v: BigRational) -> Self {
        Endpoint::rational(v)
    }
}

impl From<QuadraticValue> for Endpoint {
    fn from(v: QuadraticValue) -> Self {
        Endpoint::Finite(v)
    }
}

/// Sturm sequence `f, f', -rem(f, f'), ...`.
pub fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone()];
    let mut next = f.derivative();
    while !next.is_zero() {
        let r = chain
            .last()
            .expect("nonempty")
            .rem(&next)
            .expect("nonzero divisor");
        chain.push(next);
        next = -&r;
    }
    chain
}

fn variations(chain: &[RatPoly], at: &Endpoint) -> usize {
    let signs: Vec<i8> = chain.iter().map(|p| at.sign_of(p)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the squarefree polynomial `f` in `(lo, hi]`.
pub fn sturm_count(f: &RatPoly, lo: &Endpoint, hi: &Endpoint) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::InvalidInput("Sturm count of the zero polynomial".into()));
    }
    match lo.cmp_endpoint(hi) {
        Ordering::Less => {}
        Ordering::Equal => {
            return Err(Error::InvalidInput("Sturm interval endpoints are equal".into()))
        }
        Ordering::Greater => {
            return Err(Error::InvalidInput("Sturm interval has lo > hi".into()))
        }
    }
    let chain = sturm_chain(f);
    let (vl, vh) = (variations(&chain, lo), variations(&chain, hi));
    if vl < vh {
        return Err(Error::Internal("negative Sturm count".into()));
    }
    Ok(vl - vh)
}

/// Sign of `f` at an endpoint (exact).
pub(crate) fn sign_at(f: &RatPoly, at: &Endpoint) -> i8 {
    at.sign_of(f)
}
