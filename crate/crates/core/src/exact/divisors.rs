use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Prime factorization of `|n|` by trial division, primes ascending.
pub fn prime_power_decomposition(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if m > BigInt::one() {
        out.push((m, 1));
    }
    out
}

/// `(p, a)` with `n = p^a`, if `n` is a prime power with `a >= 1`.
pub fn is_prime_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if *n < BigInt::from(2) {
        return None;
    }
    let f = prime_power_decomposition(n);
    (f.len() == 1).then(|| f[0].clone())
}

/// Positive divisors of `|n|`, ascending; empty for `n = 0`.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return Vec::new();
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in prime_power_decomposition(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

fn require_positive(m: &BigInt) -> Result<()> {
    if m.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("divisor count needs m >= 1, got {m}")))
    }
}

/// Number of positive divisors.
pub fn sigma0(m: &BigInt) -> Result<u64> {
    require_positive(m)?;
    Ok(prime_power_decomposition(m).iter().map(|(_, e)| u64::from(*e) + 1).product())
}

/// Number of ordered factorizations `m = u v` with `u, v > 0` of equal parity.
pub fn sigma0_prime(m: &BigInt) -> Result<u64> {
    require_positive(m)?;
    let count = divisors(m)
        .iter()
        .filter(|u| {
            let v = m / *u;
            u.is_even() == v.is_even()
        })
        .count();
    Ok(count as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn divisor_counts() {
        assert_eq!(sigma0(&int(1)).unwrap(), 1);
        assert_eq!(sigma0(&int(12)).unwrap(), 6);
        assert_eq!(sigma0_prime(&int(4)).unwrap(), 1);
        assert_eq!(sigma0_prime(&int(9)).unwrap(), 3);
        assert_eq!(sigma0_prime(&int(2)).unwrap(), 0);
        assert_eq!(sigma0_prime(&int(8)).unwrap(), 2);
        assert!(sigma0(&int(0)).is_err());
        assert!(sigma0_prime(&int(-3)).is_err());
    }

    #[test]
    fn factorization() {
        assert_eq!(divisors(&int(-12)).len(), 6);
        assert_eq!(is_prime_power(&int(16)), Some((int(2), 4)));
        assert_eq!(is_prime_power(&int(13)), Some((int(13), 1)));
        assert_eq!(is_prime_power(&int(12)), None);
        assert_eq!(is_prime_power(&int(1)), None);
    }

    #[test]
    fn odd_sigma0_prime_equals_sigma0() {
        for m in (1..200).step_by(2) {
            assert_eq!(sigma0_prime(&int(m)).unwrap(), sigma0(&int(m)).unwrap());
        }
        for m in 1..200 {
            assert!(sigma0_prime(&int(m)).unwrap() <= sigma0(&int(m)).unwrap());
        }
    }
}
