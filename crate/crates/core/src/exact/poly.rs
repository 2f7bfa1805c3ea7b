use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{common_denominator, gcd_all, Scalar};
use crate::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// Trailing zeros are always stripped; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            &acc * &Self::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * g) + &Self::constant(c.clone()))
    }

    /// `self(c * x)`.
    pub fn rescale_arg(&self, c: &T) -> Self {
        let mut power = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * power.clone());
            power = power * c.clone();
        }
        Self::new(out)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl IntPoly {
    pub fn to_rat(&self) -> RatPoly {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Gcd of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        gcd_all(self.coeffs.iter())
    }
}

impl RatPoly {
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_int(&self) -> Option<IntPoly> {
        self.is_integral()
            .then(|| self.map(|c| c.to_integer()))
    }

    /// Primitive integral polynomial with positive leading coefficient that
    /// is a rational multiple of `self`.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let den = common_denominator(self.coeffs.iter());
        let ints: IntPoly = self.map(|c| (c * BigRational::from_integer(den.clone())).to_integer());
        let mut content = ints.content();
        if ints.leading().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        ints.map(|c| c / &content)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidInput("polynomial division by zero".into()))?;
        let lc_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse of `self` modulo `modulus`, if they are coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(modulus);
        (g.degree() == Some(0)).then(|| s.rem(modulus).expect("nonzero modulus"))
    }

    /// Squarefree part `f / gcd(f, f')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Yun's squarefree decomposition of a monic polynomial: returns
    /// `[(s_1, 1), (s_2, 2), ...]` with `self = prod s_i^i`, each `s_i`
    /// squarefree and pairwise coprime. Factors equal to 1 are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return out;
        }
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = fp.exact_div(&a).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let s = b.gcd(&d);
            if s.degree().unwrap_or(0) > 0 {
                out.push((s.clone(), i));
            }
            b = b.exact_div(&s).unwrap();
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&s).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Rational roots of the polynomial, each listed once, ascending.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return Vec::new();
        }
        let f = self.primitive_part();
        let mut roots = Vec::new();
        // Factor out x = 0.
        let mut low = 0;
        while f.coeffs[low].is_zero() {
            low += 1;
        }
        if low > 0 {
            roots.push(BigRational::zero());
        }
        let a0 = f.coeffs[low].abs();
        let an = f.leading().unwrap().abs();
        let num_divs = super::divisors(&a0);
        let den_divs = super::divisors(&an);
        let fr = f.to_rat();
        for n in &num_divs {
            for d in &den_divs {
                if !n.gcd(d).is_one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let r = BigRational::new(n * BigInt::from(sign), d.clone());
                    if fr.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn rp(c: &[i64]) -> RatPoly {
        RatPoly::from_i64s(c)
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        assert_eq!(rp(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(rp(&[0, 0]).is_zero());
        assert_eq!(rp(&[0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) / (x-1)
        let f = rp(&[2, -3, 1]);
        let (q, r) = f.div_rem(&rp(&[-1, 1])).unwrap();
        assert_eq!(q, rp(&[-2, 1]));
        assert!(r.is_zero());
        let g = rp(&[-1, 0, 1]).gcd(&f);
        assert_eq!(g, rp(&[-1, 1]));
        assert!(f.div_rem(&RatPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_part_and_decomposition() {
        // (x-1)^2 (x+2)^3 x
        let f = &(&rp(&[-1, 1]).pow(2) * &rp(&[2, 1]).pow(3)) * &rp(&[0, 1]);
        assert_eq!(f.squarefree_part(), &(&rp(&[-1, 1]) * &rp(&[2, 1])) * &rp(&[0, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![(rp(&[0, 1]), 1), (rp(&[-1, 1]), 2), (rp(&[2, 1]), 3)]
        );
        let rebuilt = dec
            .iter()
            .fold(RatPoly::one(), |acc, (s, e)| &acc * &s.pow(*e));
        assert_eq!(rebuilt, f);
    }

    #[test]
    fn ext_gcd_and_inverse() {
        let m = rp(&[5, -2, 1]);
        let a = rp(&[0, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&a * &inv).rem(&m).unwrap(), RatPoly::one());
        assert_eq!(inv, RatPoly::new(vec![rat(2, 5), rat(-1, 5)]));
    }

    #[test]
    fn rational_roots_found() {
        let f = RatPoly::new(vec![rat(-1, 2), rat(1, 1)]);
        assert_eq!(f.rational_roots(), vec![rat(1, 2)]);
        assert!(rp(&[1, 0, 1]).rational_roots().is_empty());
        assert_eq!(rp(&[0, -2, 1]).rational_roots(), vec![rat(0, 1), rat(2, 1)]);
    }

    #[test]
    fn compose_and_rescale() {
        let h = rp(&[-2, 1]);
        // h(2x) = 2x - 2
        assert_eq!(h.rescale_arg(&rat(2, 1)), rp(&[-2, 2]));
        assert_eq!(h.compose(&rp(&[1, 1])), rp(&[-1, 1]));
    }

    #[test]
    fn primitive_part_is_integral_and_positive() {
        let f = RatPoly::new(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(f.primitive_part(), IntPoly::from_i64s(&[-2, 3]));
    }
}
