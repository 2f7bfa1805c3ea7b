use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{is_ordinary_real, require_q, roots_in_weil_interval, GuardConfig, WeilContext};
use crate::exact::{isqrt, IntPoly, QuadraticValue, RatPoly};
use crate::Result;

fn falling(j: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(j - i))
}

fn binomial(n: usize, k: usize) -> BigInt {
    falling(n, k) / falling(k, k)
}

/// `h^(k)` from coefficients `b_k..b_n` (entries below `k` are ignored).
fn derivative_poly(b: &[BigInt], k: usize) -> RatPoly {
    RatPoly::new(
        (k..b.len())
            .map(|j| BigRational::from_integer(&b[j] * falling(j, k)))
            .collect(),
    )
}

struct Search<'a> {
    n: usize,
    q: &'a BigInt,
    m: QuadraticValue,
    vieta: Vec<BigInt>,
}

impl Search<'_> {
    /// Candidate range for `b_k` from the sign conditions on `h^(k)` at `+-2 sqrt q`.
    fn range(&self, b: &[BigInt], k: usize) -> (BigInt, BigInt) {
        let kfact = BigRational::from_integer(falling(k, k));
        let mut rest = b.to_vec();
        rest[k] = BigInt::zero();
        let r = derivative_poly(&rest, k);
        let mut lo = -self.vieta[k].clone();
        let mut hi = self.vieta[k].clone();
        // k! b_k + R(m) > 0
        let t1 = self.m.eval_poly(&r).neg().div_rational(&kfact);
        lo = lo.max(t1.floor() + 1);
        // (-1)^(n-k) (k! b_k + R(-m)) > 0
        let t2 = self.m.neg().eval_poly(&r).neg().div_rational(&kfact);
        if (self.n - k).is_multiple_of(2) {
            lo = lo.max(t2.floor() + 1);
        } else {
            hi = hi.min(t2.ceil() - 1);
        }
        (lo, hi)
    }

    fn descend(&self, b: &mut Vec<BigInt>, k: usize, out: &mut Vec<IntPoly>) -> Result<()> {
        let (lo, hi) = self.range(b, k);
        let mut v = lo;
        while v <= hi {
            b[k] = v.clone();
            if roots_in_weil_interval(&derivative_poly(b, k), self.q)? {
                if k == 0 {
                    let h = IntPoly::new(b.clone());
                    if is_ordinary_real(&h, self.q) {
                        out.push(h);
                    }
                } else {
                    self.descend(b, k - 1, out)?;
                }
            }
            v += 1;
        }
        b[k] = BigInt::zero();
        Ok(())
    }
}

/// All monic integral `h` of degree `n` that are ordinary real Weil q-polynomials,
/// sorted by coefficient vector.
pub fn enumerate_ordinary_real_weil(n: usize, q: &BigInt, guard: &GuardConfig) -> Result<Vec<IntPoly>> {
    require_q(q)?;
    WeilContext::new(q, n)?;
    guard.check(n, guard.max_n, q)?;
    let four_q = q * BigInt::from(4);
    let vieta = (0..=n)
        .map(|k| {
            let c = binomial(n, k);
            isqrt(&(&c * &c * num_traits::pow(four_q.clone(), n - k)))
        })
        .collect();
    let search = Search {
        n,
        q,
        m: QuadraticValue::sqrt_multiple(BigRational::one(), four_q)?,
        vieta,
    };
    let mut top = vec![BigInt::zero(); n + 1];
    top[n] = BigInt::one();
    let (lo, hi) = search.range(&top, n - 1);
    let mut starts = Vec::new();
    let mut v = lo;
    while v <= hi {
        starts.push(v.clone());
        v += 1;
    }
    let parts: Vec<Result<Vec<IntPoly>>> = starts
        .into_par_iter()
        .map(|start| {
            let mut b = top.clone();
            b[n - 1] = start;
            let mut out = Vec::new();
            if roots_in_weil_interval(&derivative_poly(&b, n - 1), q)? {
                if n == 1 {
                    let h = IntPoly::new(b.clone());
                    if is_ordinary_real(&h, q) {
                        out.push(h);
                    }
                } else {
                    search.descend(&mut b, n - 2, &mut out)?;
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
    }
    all.sort();
    all.dedup();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::weil::is_real_weil;

    #[test]
    fn small_cases() {
        let g = GuardConfig::default();
        let e2 = enumerate_ordinary_real_weil(1, &int(2), &g).unwrap();
        assert_eq!(e2, vec![IntPoly::from_i64s(&[-1, 1]), IntPoly::from_i64s(&[1, 1])]);
        assert_eq!(enumerate_ordinary_real_weil(1, &int(3), &g).unwrap().len(), 4);
        assert_eq!(enumerate_ordinary_real_weil(1, &int(5), &g).unwrap().len(), 8);
    }

    /// Naive scan of the full Vieta box agrees with the pruned search.
    #[test]
    fn matches_naive_box_scan() {
        let g = GuardConfig::default();
        for q in [2i64, 3, 4, 5] {
            let q = int(q);
            let fast = enumerate_ordinary_real_weil(2, &q, &g).unwrap();
            let mut slow = Vec::new();
            let b1max = isqrt(&(int(16) * &q));
            let b0max = int(4) * &q;
            let mut b1 = -b1max.clone();
            while b1 <= b1max {
                let mut b0 = -b0max.clone();
                while b0 <= b0max {
                    let h = IntPoly::new(vec![b0.clone(), b1.clone(), int(1)]);
                    if is_real_weil(&h, &q).unwrap() && is_ordinary_real(&h, &q) {
                        slow.push(h);
                    }
                    b0 += 1;
                }
                b1 += 1;
            }
            slow.sort();
            assert_eq!(fast, slow, "q = {q}");
        }
    }

    #[test]
    fn guard_is_enforced() {
        let g = GuardConfig::default();
        assert!(matches!(
            enumerate_ordinary_real_weil(4, &int(2), &g),
            Err(crate::Error::GuardExceeded { what: "n", .. })
        ));
        assert!(matches!(
            enumerate_ordinary_real_weil(1, &int(16), &g),
            Err(crate::Error::GuardExceeded { what: "q", .. })
        ));
    }
}
