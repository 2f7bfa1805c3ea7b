use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{format_rational, is_square, RatPoly};
use crate::{Error, Result};

/// Exact real number `a + b * sqrt(d)` with rational `a`, `b` and `d > 0`.
///
/// Rational values are stored with `b = 0`, `d = 1`; a perfect-square `d`
/// is folded into `a` on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

fn sign_of(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl QuadraticValue {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::InvalidInput(format!("radicand must be positive, got {d}")));
        }
        if b.is_zero() {
            return Ok(Self::rational(a));
        }
        if is_square(&d) {
            let r = BigRational::from_integer(d.sqrt());
            return Ok(Self::rational(a + b * r));
        }
        Ok(QuadraticValue { a, b, d })
    }

    pub fn rational(a: BigRational) -> Self {
        QuadraticValue { a, b: BigRational::zero(), d: BigInt::one() }
    }

    pub fn from_int(v: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(v.clone()))
    }

    /// `c * sqrt(d)`, e.g. the root bound `2 sqrt(q)`.
    pub fn sqrt_multiple(c: BigRational, d: BigInt) -> Result<Self> {
        Self::new(BigRational::zero(), c, d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_coeff(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign in {-1, 0, 1}.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d (never equal, d non-square).
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    fn common_radicand(&self, other: &Self) -> Option<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Some(other.d.clone()),
            (_, true) => Some(self.d.clone()),
            _ if self.d == other.d => Some(self.d.clone()),
            _ => None,
        }
    }

    /// Sum, defined when the radicands agree or one side is rational.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        Some(QuadraticValue::new(&self.a + &other.a, &self.b + &other.b, d).expect("positive radicand"))
    }

    /// Product, defined when the radicands agree or one side is rational.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let d = self.common_radicand(other)?;
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &other.a + &self.b * &other.b * dr;
        let b = &self.a * &other.b + &self.b * &other.a;
        Some(QuadraticValue::new(a, b, d).expect("positive radicand"))
    }

    pub fn neg(&self) -> Self {
        QuadraticValue { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }

    /// Evaluate a rational polynomial at this value, exactly.
    pub fn eval_poly(&self, p: &RatPoly) -> Self {
        p.coeffs().iter().rev().fold(Self::rational(BigRational::zero()), |acc, c| {
            acc.checked_mul(self)
                .and_then(|m| m.checked_add(&Self::rational(c.clone())))
                .expect("same radicand")
        })
    }

    /// Greatest integer not exceeding this value.
    pub fn floor(&self) -> BigInt {
        let fl = |x: &BigRational| x.floor().to_integer();
        if self.is_rational() {
            return fl(&self.a);
        }
        let t = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        let root = fl(&t).sqrt();
        let approx = if self.b.is_negative() { -root } else { root };
        let mut k = fl(&self.a) + approx;
        let at = |k: &BigInt| QuadraticValue::from_int(k);
        while at(&k) > *self {
            k -= 1;
        }
        while at(&(&k + 1)) <= *self {
            k += 1;
        }
        k
    }

    /// Least integer not below this value.
    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// Divide by a nonzero rational.
    pub fn div_rational(&self, r: &BigRational) -> Self {
        QuadraticValue::new(&self.a / r, &self.b / r, self.d.clone()).expect("positive radicand")
    }

    /// Exact comparison, including values with different radicands.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        if let Some(diff) = self.checked_add(&other.neg()) {
            return diff.signum().cmp(&0);
        }
        // u + v sqrt(d1) + w sqrt(d2) with d1 != d2, both non-square.
        let u = &self.a - &other.a;
        let (v, d1) = (&self.b, &self.d);
        let (w, d2) = (-&other.b, &other.d);
        let s_sign = {
            let sv = sign_of(v);
            let sw = sign_of(&w);
            if sv == sw {
                sv
            } else {
                let lhs = v * v * BigRational::from_integer(d1.clone());
                let rhs = &w * &w * BigRational::from_integer(d2.clone());
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sv,
                    Ordering::Less => sw,
                    Ordering::Equal => 0,
                }
            }
        };
        let su = sign_of(&u);
        let total = if su == 0 || s_sign == 0 || su == s_sign {
            if su == 0 {
                s_sign
            } else {
                su
            }
        } else {
            // sign(u + s) = sign(u) iff u^2 > s^2.
            let s2 = QuadraticValue::new(
                v * v * BigRational::from_integer(d1.clone())
                    + &w * &w * BigRational::from_integer(d2.clone()),
                BigRational::from_integer(BigInt::from(2)) * v * &w,
                d1 * d2,
            )
            .expect("positive radicand");
            let u2 = QuadraticValue::rational(&u * &u);
            match u2.checked_add(&s2.neg()).expect("rational operand").signum() {
                1 => su,
                -1 => s_sign,
                _ => 0,
            }
        };
        total.cmp(&0)
    }
}

impl From<BigRational> for QuadraticValue {
    fn from(a: BigRational) -> Self {
        Self::rational(a)
    }
}

impl From<BigInt> for QuadraticValue {
    fn from(a: BigInt) -> Self {
        Self::from_int(&a)
    }
}

impl PartialOrd for QuadraticValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", format_rational(&self.b), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", format_rational(&self.a), format_rational(&self.b), self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn qv(a: i64, b: i64, d: i64) -> QuadraticValue {
        QuadraticValue::new(rat(a, 1), rat(b, 1), int(d)).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(qv(2, -1, 5).signum(), -1);
        assert_eq!(qv(3, -1, 5).signum(), 1);
        assert_eq!(qv(0, 1, 2).signum(), 1);
        assert_eq!(qv(-4, 2, 4).signum(), 0);
        assert!(qv(0, 2, 4).is_rational());
    }

    #[test]
    fn ordering_mixed_radicands() {
        assert!(qv(0, 1, 2) < qv(0, 1, 3));
        assert!(qv(1, 1, 2) > qv(0, 1, 5));
        assert!(qv(0, 2, 5) > QuadraticValue::from_int(&int(2)));
        assert!(qv(0, -2, 5) < QuadraticValue::from_int(&int(-4)));
        assert!(qv(3, -1, 2) < qv(0, 1, 3));
        assert!(qv(4, -1, 2) > qv(0, 1, 3));
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(qv(0, 2, 5).floor(), int(4));
        assert_eq!(qv(0, -2, 5).floor(), int(-5));
        assert_eq!(qv(0, 2, 5).ceil(), int(5));
        assert_eq!(qv(1, 3, 2).floor(), int(5));
        assert_eq!(QuadraticValue::rational(rat(-7, 2)).floor(), int(-4));
        assert_eq!(qv(0, 2, 4).floor(), int(4));
    }

    #[test]
    fn polynomial_evaluation() {
        // (sqrt 2)^2 - 2 = 0
        let p = RatPoly::from_i64s(&[-2, 0, 1]);
        assert_eq!(qv(0, 1, 2).eval_poly(&p).signum(), 0);
        assert_eq!(qv(0, 2, 5).eval_poly(&RatPoly::from_i64s(&[-2, 1])).signum(), 1);
    }
}
