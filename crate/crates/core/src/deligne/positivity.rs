use num_bigint::BigInt;
use num_rational::BigRational;

use super::{DeligneModule, PolarizedReal};
use crate::exact::{RatMat, RatPoly};
use crate::symplectic::QInversive;
use crate::weil::{is_ordinary, is_weil_q_polynomial, WeilContext};
use crate::{Error, Result};

/// `iota = g(F)` with the Gram matrix of `R(x, y) = omega(x, iota y)` on `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationCertificate {
    pub iota: RatPoly,
    pub r: RatMat,
}

/// `g(q x^-1) mod m`, the image of `g(F)` under `F -> V`.
pub(crate) fn conjugate(g: &RatPoly, m: &RatPoly, q: &BigInt) -> Result<RatPoly> {
    let x_inv = RatPoly::x()
        .inverse_mod(m)
        .ok_or_else(|| Error::Precondition("F is singular".into()))?;
    let v = x_inv.scale(&BigRational::from_integer(q.clone()));
    let mut acc = RatPoly::zero();
    for c in g.coeffs().iter().rev() {
        acc = (&(&acc * &v) + &RatPoly::constant(c.clone())).rem(m)?;
    }
    Ok(acc)
}

fn minpoly(pr: &PolarizedReal) -> Result<RatPoly> {
    if !pr.base.is_semisimple()? {
        return Err(Error::Precondition("F is not semisimple".into()));
    }
    pr.base.radical()
}

/// Gram matrix on `T` of `R(x, y) = omega(x, iota y)`; errors when `iota` is not purely imaginary.
fn r_gram(pr: &PolarizedReal, iota: &RatPoly) -> Result<RatMat> {
    let m = minpoly(pr)?;
    let g = iota.rem(&m)?;
    let bar = conjugate(&g, &m, pr.base.ctx().q())?;
    if !(&bar + &g).is_zero() {
        return Err(Error::NotImaginary);
    }
    let iota_mat = pr.base.f().eval_poly(&g);
    Ok(pr.base.lattice().gram(&(&pr.omega * &iota_mat)))
}

/// `R(x, y) = omega(x, iota y)` is symmetric and positive definite on `T`.
pub fn positivity_check(pr: &PolarizedReal, iota: &RatPoly) -> Result<bool> {
    let r = r_gram(pr, iota)?;
    Ok(r.is_symmetric() && r.is_positive_definite())
}

/// Tries `iota = +-(F - q F^-1)` on `(Z^2, gamma, omega_0, tau_0)`.
pub fn viability_search_n1(gamma: &QInversive) -> Result<Option<PolarizationCertificate>> {
    if gamma.n() != 1 {
        return Err(Error::Precondition("viability search is for n = 1".into()));
    }
    certificate_n1(gamma.gamma(), gamma.q())
}

/// Tries `iota = +-(F - q F^-1)` on `(Z^2, gamma, omega_0)` for any `2 x 2` integral `gamma`.
pub fn certificate_n1(gamma: &RatMat, q: &BigInt) -> Result<Option<PolarizationCertificate>> {
    if gamma.rows() != 2 || gamma.cols() != 2 {
        return Err(Error::Precondition("viability search is for n = 1".into()));
    }
    let p = gamma
        .charpoly()?
        .to_int()
        .ok_or_else(|| Error::Precondition("characteristic polynomial is not integral".into()))?;
    if !is_weil_q_polynomial(&p, q)? || !is_ordinary(&p, q) {
        return Err(Error::Precondition("characteristic polynomial is not ordinary Weil".into()));
    }
    let base = DeligneModule::standard(WeilContext::new(q, 1)?, gamma.clone())?;
    let pr = PolarizedReal::new(base, RatMat::standard_j(1));
    let m = minpoly(&pr)?;
    let base = (&RatPoly::x() - &conjugate(&RatPoly::x(), &m, q)?).rem(&m)?;
    for iota in [base.clone(), -&base] {
        let r = r_gram(&pr, &iota)?;
        if r.is_symmetric() && r.is_positive_definite() {
            return Ok(Some(PolarizationCertificate { iota, r }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn pr(f: &[&[i64]]) -> PolarizedReal {
        PolarizedReal::standard(WeilContext::new(&int(5), 1).unwrap(), RatMat::from_i64(f)).unwrap()
    }

    #[test]
    fn standard_certificate() {
        let gamma = QInversive::from_matrix(&RatMat::from_i64(&[&[1, -4], &[1, 1]]), &int(5)).unwrap();
        let cert = viability_search_n1(&gamma).unwrap().unwrap();
        assert_eq!(cert.r, RatMat::diag(&[rat(2, 1), rat(8, 1)]));
        // x - 5 x^-1 = 2x - 2 modulo x^2 - 2x + 5
        assert_eq!(cert.iota, RatPoly::new(vec![rat(-2, 1), rat(2, 1)]));
        let p = pr(&[&[1, -4], &[1, 1]]);
        assert!(positivity_check(&p, &cert.iota).unwrap());
        assert!(!positivity_check(&p, &-&cert.iota).unwrap());
    }

    #[test]
    fn conjugate_case_uses_other_sign() {
        let gamma = QInversive::from_matrix(&RatMat::from_i64(&[&[1, 4], &[-1, 1]]), &int(5)).unwrap();
        let cert = viability_search_n1(&gamma).unwrap().unwrap();
        assert_eq!(cert.iota, RatPoly::new(vec![rat(2, 1), rat(-2, 1)]));
    }

    #[test]
    fn non_imaginary_is_an_error() {
        let p = pr(&[&[1, -4], &[1, 1]]);
        assert!(matches!(positivity_check(&p, &RatPoly::x()), Err(Error::NotImaginary)));
    }
}
