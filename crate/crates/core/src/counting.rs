use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::deligne::{certificate_n1, viability_search_n1, DeligneModule, PolarizationCertificate, PolarizedReal};
use crate::exact::{divisors, gcd_all, is_prime_power, is_square, isqrt, sigma0, sigma0_prime, IntMat, IntPoly, RatMat, RatPoly};
use crate::symplectic::{a_block_relation, companion, is_q_inversive, Lattice, QInversive};
use crate::weil::{enumerate_ordinary_real_weil, from_real_counterpart, GuardConfig, WeilContext};
use crate::{Error, Result};

/// `pi^2 + B pi + q = 0` with `D = B^2 - 4q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingInstance {
    #[serde(serialize_with = "ser_int")]
    pub q: BigInt,
    #[serde(rename = "B", serialize_with = "ser_int")]
    pub b: BigInt,
    #[serde(rename = "D", serialize_with = "ser_int")]
    pub d: BigInt,
    #[serde(skip)]
    p: BigInt,
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl CountingInstance {
    pub fn new(q: &BigInt, b: &BigInt) -> Result<Self> {
        let (p, _) = is_prime_power(q).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
        if b.is_multiple_of(&p) {
            return Err(Error::InvalidInput(format!("p = {p} divides B = {b}")));
        }
        let d = b * b - BigInt::from(4) * q;
        if !d.is_negative() {
            return Err(Error::InvalidInput(format!("D = {d} is not negative")));
        }
        Ok(CountingInstance { q: q.clone(), b: b.clone(), d, p })
    }

    pub fn from_i64(q: i64, b: i64) -> Result<Self> {
        Self::new(&BigInt::from(q), &BigInt::from(b))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    /// `D / 4` when `D = 0 mod 4`.
    fn d_prime(&self) -> Option<BigInt> {
        self.d.is_multiple_of(&BigInt::from(4)).then(|| &self.d / 4)
    }

    /// Every valid `B` for this `q`, ascending.
    pub fn all_for_q(q: &BigInt) -> Result<Vec<Self>> {
        let bound = isqrt(&(BigInt::from(4) * q));
        let mut out = Vec::new();
        let mut b = -&bound;
        while b <= bound {
            if let Ok(inst) = Self::new(q, &b) {
                out.push(inst);
            }
            b += 1;
        }
        Ok(out)
    }
}

/// Which involution the `n = 1` family is inversive for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum N1Involution {
    Tau0,
    Tau1,
}

impl N1Involution {
    /// `tau_0 = diag(-1, 1)`, `tau_1 = ((-1, 0), (1, 1))`.
    pub fn matrix(self) -> RatMat {
        match self {
            N1Involution::Tau0 => RatMat::standard_tau(1),
            N1Involution::Tau1 => RatMat::from_i64(&[&[-1, 0], &[1, 1]]),
        }
    }
}

pub fn count_tau0(inst: &CountingInstance) -> Result<u64> {
    match inst.d_prime() {
        Some(dp) => sigma0(&-dp),
        None => Ok(0),
    }
}

pub fn count_tau1(inst: &CountingInstance) -> Result<u64> {
    match inst.d_prime() {
        Some(dp) => sigma0_prime(&-dp),
        None => sigma0(&-&inst.d),
    }
}

/// A brute-force solution with the sign of its `iota = +-(F - q F^-1)` certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct N1Solution {
    pub gamma: RatMat,
    pub sign: i64,
    pub certificate: PolarizationCertificate,
}

fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    divisors(n).into_iter().flat_map(|d| [-d.clone(), d]).collect()
}

fn tag(gamma: RatMat, inst: &CountingInstance, which: N1Involution) -> Result<N1Solution> {
    let certificate = match which {
        N1Involution::Tau0 => viability_search_n1(&QInversive::from_matrix(&gamma, &inst.q)?)?,
        N1Involution::Tau1 => certificate_n1(&gamma, &inst.q)?,
    }
    .ok_or_else(|| Error::Internal("no certificate of either sign".into()))?;
    let sign = certificate_sign(&certificate, &gamma, &inst.q)?;
    Ok(N1Solution { gamma, sign, certificate })
}

/// `+1` when the certificate is `F - q F^-1`, `-1` when it is its negative.
fn certificate_sign(cert: &PolarizationCertificate, gamma: &RatMat, q: &BigInt) -> Result<i64> {
    let m = gamma.charpoly()?;
    let x_inv = RatPoly::x()
        .inverse_mod(&m)
        .ok_or_else(|| Error::Precondition("F is singular".into()))?;
    let base = (&RatPoly::x() - &x_inv.scale(&BigRational::from_integer(q.clone()))).rem(&m)?;
    if cert.iota == base {
        Ok(1)
    } else if cert.iota == -&base {
        Ok(-1)
    } else {
        Err(Error::Internal("certificate is not +-(F - q F^-1)".into()))
    }
}

/// Exhaustive integral solutions of the `n = 1` parametrizations.
pub fn brute_force_n1(inst: &CountingInstance, which: N1Involution) -> Result<Vec<N1Solution>> {
    let mut out = Vec::new();
    match which {
        N1Involution::Tau0 => {
            let Some(dp) = inst.d_prime() else {
                return Ok(Vec::new());
            };
            let a = -&inst.b / 2;
            for b in signed_divisors(&dp) {
                let c = &dp / &b;
                out.push(int_mat(&[[&a, &b], [&c, &a]]));
            }
        }
        N1Involution::Tau1 => {
            let four = BigInt::from(4);
            for b in signed_divisors(&inst.d) {
                let diff = &inst.d / &b - &b;
                if !diff.is_multiple_of(&four) || !(&b - &inst.b).is_even() {
                    continue;
                }
                let c = diff / &four;
                let a = (&b - &inst.b) / 2;
                out.push(int_mat(&[[&a, &b], [&c, &(&a - &b)]]));
            }
        }
    }
    let tau = which.matrix();
    out.into_iter()
        .map(|g| {
            if !is_q_inversive_for(&g, &tau, &inst.q) {
                return Err(Error::Internal("brute-force solution is not q-inversive".into()));
            }
            tag(g, inst, which)
        })
        .collect()
}

fn int_mat(rows: &[[&BigInt; 2]; 2]) -> RatMat {
    RatMat::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer((*v).clone())).collect())
            .collect(),
    )
    .expect("2 x 2")
}

/// `tau gamma tau^-1 = q gamma^-1` and `gamma` is a symplectic similitude.
pub fn is_q_inversive_for(gamma: &RatMat, tau: &RatMat, q: &BigInt) -> bool {
    let Ok(inv) = gamma.inverse() else {
        return false;
    };
    let Ok(tau_inv) = tau.inverse() else {
        return false;
    };
    let qr = BigRational::from_integer(q.clone());
    let j = RatMat::standard_j(gamma.rows() / 2);
    &(tau * gamma) * &tau_inv == inv.scale(&qr) && &(&gamma.transpose() * &j) * gamma == j.scale(&qr)
}

/// The brute-force module `(Z^2, gamma, omega_0, tau)` as a polarized module with real structure.
pub fn n1_module(inst: &CountingInstance, gamma: &RatMat, which: N1Involution) -> Result<PolarizedReal> {
    let base = DeligneModule::standard(WeilContext::new(&inst.q, 1)?, gamma.clone())?;
    Ok(PolarizedReal::new(base, RatMat::standard_j(1)).with_tau(which.matrix()))
}

/// Homothety classes of lattices in `Q(pi)` stable under `pi` and conjugation, from the divisor parametrization.
pub fn count_lattice_classes(inst: &CountingInstance) -> Result<u64> {
    let mut count = 0u64;
    match inst.d_prime() {
        Some(dp) => {
            // {1, s sqrt D'} with 1/s = t | D', and {1, 1/2 + s sqrt D'} with D' = t u, t - u even.
            for t in divisors(&dp) {
                count += 1;
                let u = &dp / &t;
                if (&t - &u).is_even() {
                    count += 1;
                }
            }
        }
        None => count += divisors(&inst.d).len() as u64,
    }
    Ok(count)
}

/// `pi` on the basis `{1, pi}`.
pub fn pi_matrix(inst: &CountingInstance) -> IntMat {
    IntMat::from_rows(vec![vec![BigInt::zero(), -&inst.q], vec![BigInt::one(), -&inst.b]]).expect("2 x 2")
}

/// Complex conjugation on the basis `{1, pi}`, `pi -> -B - pi`.
pub fn conjugation_matrix(inst: &CountingInstance) -> IntMat {
    IntMat::from_rows(vec![vec![BigInt::one(), -&inst.b], vec![BigInt::zero(), -BigInt::one()]]).expect("2 x 2")
}

/// Oracle: lattices `Lambda` with `bound Z^2 <= Lambda <= Z^2` stable under `pi` and conjugation,
/// reduced to content 1 and deduplicated.
pub fn enumerate_stable_lattices(inst: &CountingInstance, bound: &BigInt) -> Result<Vec<Lattice>> {
    if *bound < inst.d.abs() {
        return Err(Error::InvalidInput(format!("bound {bound} is below |D| = {}", inst.d.abs())));
    }
    let ops = [pi_matrix(inst), conjugation_matrix(inst)];
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let divs = divisors(bound);
    for a in &divs {
        for d in &divs {
            let mut b = BigInt::zero();
            while &b < a {
                // columns (a, 0) and (b, d); contains (0, bound) iff a d | b bound
                if (&b * bound).is_multiple_of(&(a * d)) && stable(a, &b, d, &ops) {
                    let g = gcd_all([a, &b, d]);
                    let (a1, d1) = (a / &g, d / &g);
                    let b1 = (&b / &g).mod_floor(&a1);
                    if seen.insert((a1.clone(), b1.clone(), d1.clone())) {
                        let basis = int_mat(&[[&a1, &b1], [&BigInt::zero(), &d1]]);
                        out.push(Lattice::new(&basis)?);
                    }
                }
                b += 1;
            }
        }
    }
    Ok(out)
}

/// `M (a, 0)` and `M (b, d)` lie in the span of `(a, 0), (b, d)` for each `M`.
fn stable(a: &BigInt, b: &BigInt, d: &BigInt, ops: &[IntMat]) -> bool {
    let contains = |v: &[BigInt]| {
        if !v[1].is_multiple_of(d) {
            return false;
        }
        let y = &v[1] / d;
        (&v[0] - &y * b).is_multiple_of(a)
    };
    ops.iter().all(|m| {
        contains(&m.mul_vec(&[a.clone(), BigInt::zero()])) && contains(&m.mul_vec(&[b.clone(), d.clone()]))
    })
}

/// Sign convention for totally real rank-1 modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealConvention {
    Positive,
    Signed,
}

/// Integers `a` with `0 < |a|`, `a^2 < 4q` and `p` not dividing `a`, ascending.
pub fn enumerate_totally_real_rank1(q: &BigInt) -> Result<Vec<BigInt>> {
    let (p, _) = is_prime_power(q).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
    let four_q = BigInt::from(4) * q;
    let bound = isqrt(&four_q);
    let mut out = Vec::new();
    let mut a = -&bound;
    while a <= bound {
        if !a.is_zero() && &a * &a < four_q && !a.is_multiple_of(&p) {
            out.push(a.clone());
        }
        a += 1;
    }
    Ok(out)
}

pub fn count_totally_real_rank1(q: &BigInt, convention: RealConvention) -> Result<u64> {
    let all = enumerate_totally_real_rank1(q)?;
    Ok(match convention {
        RealConvention::Positive => all.iter().filter(|a| a.is_positive()).count(),
        RealConvention::Signed => all.len(),
    } as u64)
}

/// `2 (sqrt q - 1)`, for square `q`.
pub fn totally_real_formula(q: &BigInt) -> Result<BigInt> {
    if !is_square(q) {
        return Err(Error::InvalidInput(format!("q = {q} is not a square")));
    }
    Ok(BigInt::from(2) * (isqrt(q) - 1))
}

pub const MAX_ZETA_TERMS: usize = 32;

fn zeta_guard(q: &BigInt, terms: usize) -> Result<BigInt> {
    if terms > MAX_ZETA_TERMS {
        return Err(Error::GuardExceeded { what: "terms", limit: MAX_ZETA_TERMS as u64, got: terms as u64 });
    }
    if !is_square(q) {
        return Err(Error::InvalidInput(format!("q = {q} is not a square")));
    }
    Ok(isqrt(q))
}

/// First `terms` coefficients of `((1 - T) / (1 - sqrt(q) T))^2`.
pub fn zeta_series(q: &BigInt, terms: usize) -> Result<RatPoly> {
    let s = zeta_guard(q, terms)?;
    // (m + 1) s^m T^m is the expansion of (1 - sT)^-2
    let geom: Vec<BigInt> = (0..terms).map(|m| BigInt::from(m + 1) * s.pow(m as u32)).collect();
    let num = [BigInt::one(), BigInt::from(-2), BigInt::one()];
    let coeffs = (0..terms)
        .map(|k| {
            let v: BigInt = (0..=k.min(2)).map(|i| &num[i] * &geom[k - i]).sum();
            BigRational::from_integer(v)
        })
        .collect();
    Ok(RatPoly::new(coeffs))
}

/// `N_m = 2 (sqrt(q)^m - 1)` for `m = 1..terms-1`.
pub fn totally_real_point_counts(q: &BigInt, terms: usize) -> Result<Vec<BigInt>> {
    let s = zeta_guard(q, terms)?;
    Ok((1..terms).map(|m| BigInt::from(2) * (s.pow(m as u32) - 1)).collect())
}

/// `exp(sum_m N_m T^m / m)` truncated to `terms` coefficients; `counts[0] = N_1`.
pub fn zeta_from_counts(counts: &[BigInt], terms: usize) -> RatPoly {
    let l: Vec<BigRational> = std::iter::once(BigRational::zero())
        .chain((1..terms).map(|m| {
            counts
                .get(m - 1)
                .map(|n| BigRational::new(n.clone(), BigInt::from(m)))
                .unwrap_or_else(BigRational::zero)
        }))
        .collect();
    let mut e = vec![BigRational::one()];
    for k in 1..terms {
        let s: BigRational = (1..=k)
            .map(|j| BigRational::from_integer(BigInt::from(j)) * &l[j] * &e[k - j])
            .sum();
        e.push(s / BigRational::from_integer(BigInt::from(k)));
    }
    e.truncate(terms);
    RatPoly::new(e)
}

/// `N_m` read off `T Z'(T) / Z(T)`, for `m = 1..terms-1`; requires `Z(0) = 1`.
pub fn counts_from_zeta(z: &RatPoly, terms: usize) -> Result<Vec<BigRational>> {
    if z.coeff(0) != BigRational::one() {
        return Err(Error::InvalidInput("series must start with 1".into()));
    }
    let zc: Vec<BigRational> = (0..terms).map(|i| z.coeff(i)).collect();
    // log Z = sum l_m T^m with m l_m = m z_m - sum_{j<m} j l_j z_{m-j}
    let mut l = vec![BigRational::zero(); terms];
    let mut out = Vec::new();
    for m in 1..terms {
        let mut acc = BigRational::from_integer(BigInt::from(m)) * &zc[m];
        for j in 1..m {
            acc -= BigRational::from_integer(BigInt::from(j)) * &l[j] * &zc[m - j];
        }
        out.push(acc.clone());
        l[m] = acc / BigRational::from_integer(BigInt::from(m));
    }
    Ok(out)
}

/// Correspondence data for one ordinary real Weil polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasEntry {
    pub h: IntPoly,
    pub p: IntPoly,
    pub gamma: QInversive,
    pub a_charpoly: RatPoly,
    pub a_relation: bool,
    /// `n = 1` only.
    pub certificate: Option<PolarizationCertificate>,
}

pub fn isogeny_atlas(n: usize, q: &BigInt, guard: &GuardConfig) -> Result<Vec<AtlasEntry>> {
    guard.check(n, guard.max_atlas_n, q)?;
    let hs = enumerate_ordinary_real_weil(n, q, guard)?;
    let mut out = Vec::with_capacity(hs.len());
    let mut seen = BTreeSet::new();
    for h in hs {
        let p = from_real_counterpart(&h, q)?;
        let gamma = companion(&p, q)?;
        if !is_q_inversive(gamma.gamma(), q) {
            return Err(Error::Internal(format!("companion of {p:?} is not q-inversive")));
        }
        let (h2, a_relation) = a_block_relation(&gamma)?;
        if h2 != h || gamma.charpoly()? != p.to_rat() {
            return Err(Error::Internal("atlas correspondences disagree".into()));
        }
        if !seen.insert(format!("{:?}", p.coeffs())) {
            return Err(Error::Internal("duplicate characteristic polynomial".into()));
        }
        let certificate = if n == 1 { viability_search_n1(&gamma)? } else { None };
        out.push(AtlasEntry { a_charpoly: gamma.a().charpoly()?, h, p, gamma, a_relation, certificate });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn closed_forms() {
        let i = CountingInstance::from_i64(3, 1).unwrap();
        assert_eq!((count_tau0(&i).unwrap(), count_tau1(&i).unwrap()), (0, 2));
        let i = CountingInstance::from_i64(3, 2).unwrap();
        assert_eq!((count_tau0(&i).unwrap(), count_tau1(&i).unwrap()), (2, 0));
        let i = CountingInstance::from_i64(5, 2).unwrap();
        assert_eq!((count_tau0(&i).unwrap(), count_tau1(&i).unwrap()), (3, 1));
    }

    #[test]
    fn invalid_instances() {
        assert!(CountingInstance::from_i64(6, 1).is_err());
        assert!(CountingInstance::from_i64(3, 3).is_err());
        assert!(CountingInstance::from_i64(3, 4).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let i = CountingInstance::from_i64(3, 2).unwrap();
        let s = brute_force_n1(&i, N1Involution::Tau0).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.iter().filter(|x| x.sign == 1).count(), 2);
        assert!(brute_force_n1(&CountingInstance::from_i64(3, 1).unwrap(), N1Involution::Tau0)
            .unwrap()
            .is_empty());
        let i = CountingInstance::from_i64(5, 2).unwrap();
        assert_eq!(brute_force_n1(&i, N1Involution::Tau1).unwrap().len(), 2);
    }

    #[test]
    fn brute_force_modules_validate() {
        for q in [3, 5, 7] {
            for inst in CountingInstance::all_for_q(&int(q)).unwrap() {
                for which in [N1Involution::Tau0, N1Involution::Tau1] {
                    for s in brute_force_n1(&inst, which).unwrap() {
                        let r = n1_module(&inst, &s.gamma, which).unwrap().validate();
                        assert!(r.passed(), "{:?}", r.failures());
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_examples() {
        let i = CountingInstance::from_i64(3, 1).unwrap();
        assert_eq!(count_lattice_classes(&i).unwrap(), 2);
        assert_eq!(enumerate_stable_lattices(&i, &int(11)).unwrap().len(), 2);
        let i = CountingInstance::from_i64(3, 2).unwrap();
        assert_eq!(count_lattice_classes(&i).unwrap(), 2);
        assert_eq!(enumerate_stable_lattices(&i, &int(8)).unwrap().len(), 2);
        assert!(enumerate_stable_lattices(&i, &int(7)).is_err());
        assert_eq!(enumerate_stable_lattices(&i, &int(16)).unwrap().len(), 2);
    }

    #[test]
    fn totally_real() {
        let pos = |q: i64| count_totally_real_rank1(&int(q), RealConvention::Positive).unwrap();
        assert_eq!(enumerate_totally_real_rank1(&int(4)).unwrap(), vec![int(-3), int(-1), int(1), int(3)]);
        assert_eq!((pos(4), pos(9), pos(25), pos(16)), (2, 4, 8, 4));
        assert_eq!(totally_real_formula(&int(16)).unwrap(), int(6));
        assert_eq!(count_totally_real_rank1(&int(4), RealConvention::Signed).unwrap(), 4);
    }

    #[test]
    fn zeta() {
        let z = zeta_series(&int(4), 4).unwrap();
        assert_eq!(z, RatPoly::new(vec![rat(1, 1), rat(2, 1), rat(5, 1), rat(12, 1)]));
        assert_eq!(counts_from_zeta(&z, 4).unwrap()[0], rat(2, 1));
        let z9 = zeta_series(&int(9), 6).unwrap();
        assert_eq!(counts_from_zeta(&z9, 6).unwrap()[1], rat(16, 1));
        for q in [4, 9, 25] {
            let n = totally_real_point_counts(&int(q), 32).unwrap();
            assert_eq!(zeta_from_counts(&n, 32), zeta_series(&int(q), 32).unwrap());
        }
        assert!(zeta_series(&int(3), 4).is_err());
        assert!(zeta_series(&int(4), 33).is_err());
    }

    #[test]
    fn atlas() {
        let g = GuardConfig::default();
        assert_eq!(isogeny_atlas(1, &int(2), &g).unwrap().len(), 2);
        let a5 = isogeny_atlas(1, &int(5), &g).unwrap();
        assert_eq!(a5.len(), 8);
        assert!(a5.iter().all(|e| e.a_relation && e.certificate.is_some()));
        let a2 = isogeny_atlas(2, &int(2), &g).unwrap();
        assert_eq!(a2.len(), enumerate_ordinary_real_weil(2, &int(2), &g).unwrap().len());
        assert!(!a2.is_empty());
        assert!(isogeny_atlas(3, &int(2), &g).is_err());
        assert!(isogeny_atlas(1, &int(16), &g).is_err());
    }
}
