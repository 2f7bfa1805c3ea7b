//! Exact arithmetic foundation: big integers and rationals, dense polynomials
//! and matrices, Smith and Hermite normal forms, Sturm sequences with
//! quadratic-irrational endpoints, and divisor counting.
//!
//! Nothing in this module (or anywhere in the crate) touches floating point.

mod divisors;
mod hermite;
mod matrix;
mod poly;
mod quadratic;
mod smith;
mod sturm;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use divisors::{divisors, is_prime_power, prime_power_decomposition, sigma0, sigma0_prime};
pub use hermite::{column_hnf, column_hnf_rational, span_basis};
pub use matrix::{IntMat, Matrix, RatMat};
pub use poly::{IntPoly, Poly, RatPoly};
pub use quadratic::QuadraticValue;
pub use smith::{integer_kernel, smith_normal_form, SmithForm};
pub use sturm::{sturm_chain, sturm_count, Endpoint};
pub(crate) use sturm::sign_at;

/// Ring element usable as a polynomial coefficient or matrix entry.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_from_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Integer square root (floor) of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative number");
    n.sqrt()
}

pub fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if is_square(n) && is_square(d) {
        Some(BigRational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn to_u64(v: &BigInt) -> Option<u64> {
    v.to_u64()
}

/// Floor division with a positive or negative divisor.
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Format a rational as `num` or `num/den`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `num` or `num/den` into a rational.
pub fn parse_rational(s: &str) -> crate::Result<BigRational> {
    let s = s.trim();
    let bad = || crate::Error::InvalidInput(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}
