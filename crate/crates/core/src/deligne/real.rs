use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{DeligneModule, PolarizedReal};
use crate::exact::{integer_kernel, IntMat, RatMat};
use crate::weil::real_counterpart;
use crate::{Error, Result};

/// `(L = T^tau, A = (F + V)|L)` with the restricted level structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotallyRealModule {
    /// Basis of `L` as ambient columns, `2n x n`.
    pub basis: RatMat,
    pub a: RatMat,
    /// `(N, alpha: L/NL -> (Z/N)^n)`.
    pub level: Option<(BigInt, IntMat)>,
}

impl TotallyRealModule {
    /// `alpha` is invertible mod `N` and `A = 2I mod N`, as forced by `F = V = I mod N`.
    pub fn level_is_valid(&self) -> bool {
        let Some((nmod, alpha)) = &self.level else {
            return true;
        };
        let Some(a) = self.a.to_int() else {
            return false;
        };
        let two = IntMat::scalar(a.rows(), BigInt::from(2));
        alpha.determinant().is_ok_and(|d| d.gcd(nmod).is_one())
            && a.reduce_mod(nmod) == two.reduce_mod(nmod)
    }
}

/// `(T, F, omega) -> (T, V, -omega)`; a real structure is kept, a level structure is dropped.
pub fn duality_involution(pr: &PolarizedReal) -> Result<PolarizedReal> {
    let base = DeligneModule::new(pr.base.ctx.clone(), pr.base.lattice.clone(), pr.base.v()?)?;
    Ok(PolarizedReal {
        base,
        omega: pr.omega.scale(&-BigRational::one()),
        tau: pr.tau.clone(),
        level: None,
    })
}

/// Equal characteristic polynomials of `F`.
pub fn isogeny_class_equal(m1: &DeligneModule, m2: &DeligneModule) -> Result<bool> {
    if m1.ctx != m2.ctx {
        return Err(Error::InvalidInput("modules have different (q, n)".into()));
    }
    Ok(m1.charpoly()? == m2.charpoly()?)
}

/// `T (x) Q` is a simple `Q[F]`-module, decided through the real counterpart.
fn is_simple(pr: &PolarizedReal) -> Result<bool> {
    let p = pr
        .base
        .charpoly()?
        .to_int()
        .ok_or_else(|| Error::Precondition("characteristic polynomial is not integral".into()))?;
    let h = real_counterpart(&p, pr.base.ctx.q())
        .map_err(|e| Error::Precondition(format!("no real counterpart: {e}")))?;
    match h.degree() {
        Some(1) => Ok(true),
        Some(d) if d <= 3 => Ok(h.to_rat().rational_roots().is_empty()),
        Some(d) => Err(Error::Unsupported(format!("irreducibility test for degree {d} real counterpart"))),
        None => Err(Error::Internal("zero real counterpart".into())),
    }
}

/// Given `psi` with `psi T = T`, `psi F psi^-1 = V` and `psi^* omega = -omega`
/// on a simple module, reports whether `psi^2 = I`.
pub fn check_real_structure_from_isomorphism(pr: &PolarizedReal, psi: &RatMat) -> Result<bool> {
    if !is_simple(pr)? {
        return Err(Error::Precondition("T (x) Q is not a simple Q[F]-module".into()));
    }
    let l = &pr.base.lattice;
    let inv = psi.inverse().map_err(|_| Error::Precondition("psi is singular".into()))?;
    if !l.is_preserved_by(psi) || !l.is_preserved_by(&inv) {
        return Err(Error::Precondition("psi T != T".into()));
    }
    if &(psi * pr.base.f()) * &inv != pr.base.v()? {
        return Err(Error::Precondition("psi F psi^-1 != V".into()));
    }
    if &(&psi.transpose() * &pr.omega) * psi != pr.omega.scale(&-BigRational::one()) {
        return Err(Error::Precondition("psi^* omega != -omega".into()));
    }
    Ok((psi * psi).is_identity())
}

/// The tau-fixed sublattice with `A = F + V` restricted to it.
pub fn real_fixed_module(pr: &PolarizedReal) -> Result<TotallyRealModule> {
    let tau = pr.tau.as_ref().ok_or_else(|| Error::Precondition("no real structure".into()))?;
    let l = &pr.base.lattice;
    let n = pr.base.ctx.n();
    let tau_t = l
        .matrix_of(tau)
        .to_int()
        .ok_or_else(|| Error::Precondition("tau does not preserve T".into()))?;
    if !(&tau_t * &tau_t).is_identity() {
        return Err(Error::Precondition("tau is not an involution".into()));
    }
    let k = integer_kernel(&(&tau_t - &IntMat::identity(2 * n)));
    if k.cols() != n {
        return Err(Error::Internal(format!("fixed lattice has rank {} != {n}", k.cols())));
    }
    let kr = k.to_rat();
    let sum = &pr.base.f_on_lattice() + &l.matrix_of(&pr.base.v()?);
    let image = &sum * &kr;
    let kt = kr.transpose();
    let a = &(&kt * &kr).inverse()? * &(&kt * &image);
    if &kr * &a != image {
        return Err(Error::Internal("F + V does not preserve the fixed lattice".into()));
    }
    let level = pr.level.as_ref().map(|lv| {
        let bk = &lv.beta * &k;
        let rows: Vec<usize> = (n..2 * n).collect();
        let cols: Vec<usize> = (0..n).collect();
        (lv.modulus.clone(), bk.submatrix(&rows, &cols).reduce_mod(&lv.modulus))
    });
    Ok(TotallyRealModule { basis: l.basis() * &kr, a, level })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deligne::Level;
    use crate::exact::{int, rat, IntPoly};
    use crate::symplectic::Lattice;
    use crate::weil::WeilContext;

    fn ctx5() -> WeilContext {
        WeilContext::new(&int(5), 1).unwrap()
    }

    fn standard() -> PolarizedReal {
        PolarizedReal::standard(ctx5(), RatMat::from_i64(&[&[1, -4], &[1, 1]])).unwrap()
    }

    #[test]
    fn duality() {
        let pr = standard();
        let d = duality_involution(&pr).unwrap();
        assert_eq!(d.base.f(), &RatMat::from_i64(&[&[1, 4], &[-1, 1]]));
        assert_eq!(d.omega, RatMat::standard_j(1).scale(&rat(-1, 1)));
        assert!(d.validate().passed(), "{:?}", d.validate().failures());
        assert_eq!(duality_involution(&d).unwrap(), pr);
        assert!(isogeny_class_equal(&pr.base, &d.base).unwrap());
    }

    #[test]
    fn isogeny_classes() {
        let a = standard().base;
        let b = DeligneModule::standard(ctx5(), RatMat::from_i64(&[&[1, -5], &[1, 0]])).unwrap();
        assert!(!isogeny_class_equal(&a, &b).unwrap());
        let scaled = Lattice::standard(2).scale(&rat(2, 1)).unwrap();
        let c = DeligneModule::new(ctx5(), scaled, a.f().clone()).unwrap();
        assert!(isogeny_class_equal(&a, &c).unwrap());
    }

    #[test]
    fn real_structure_from_isomorphism() {
        let pr = standard();
        assert!(check_real_structure_from_isomorphism(&pr, &RatMat::standard_tau(1)).unwrap());
        let minus = RatMat::standard_tau(1).scale(&rat(-1, 1));
        assert!(check_real_structure_from_isomorphism(&pr, &minus).unwrap());
        let wrong = RatMat::identity(2);
        assert!(matches!(
            check_real_structure_from_isomorphism(&pr, &wrong),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fixed_module() {
        let pr = standard();
        let m = real_fixed_module(&pr).unwrap();
        assert_eq!(m.a, RatMat::from_i64(&[&[2]]));
        assert_eq!(m.basis.column(0), vec![rat(0, 1), rat(1, 1)]);
        let h = real_counterpart(&IntPoly::from_i64s(&[5, -2, 1]), &int(5)).unwrap();
        assert_eq!(m.a.charpoly().unwrap(), h.to_rat());
    }

    #[test]
    fn fixed_module_level() {
        let f = RatMat::from_i64(&[&[1, 2], &[-2, 1]]);
        let pr = PolarizedReal::standard(ctx5(), f)
            .unwrap()
            .with_level(Level { modulus: int(2), beta: IntMat::identity(2) });
        assert!(pr.validate().passed());
        let m = real_fixed_module(&pr).unwrap();
        assert!(m.level_is_valid());
        assert_eq!(m.level.as_ref().unwrap().1, IntMat::from_i64(&[&[1]]));
    }
}
