use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::half_dim;
use crate::exact::{column_hnf_rational, smith_normal_form, RatMat};
use crate::weil::is_ordinary;
use crate::{Error, Result};

/// Full-rank lattice in `Q^m`, stored as its column Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: RatMat,
}

impl Lattice {
    pub fn new(generators: &RatMat) -> Result<Self> {
        let basis = column_hnf_rational(generators);
        if basis.cols() != generators.rows() {
            return Err(Error::InvalidInput(format!(
                "generators span rank {} in dimension {}",
                basis.cols(),
                generators.rows()
            )));
        }
        Ok(Lattice { basis })
    }

    /// `Z^m`.
    pub fn standard(m: usize) -> Self {
        Lattice { basis: RatMat::identity(m) }
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Covolume `|det basis|`.
    pub fn covolume(&self) -> BigRational {
        self.basis.determinant().expect("square basis")
    }

    /// Coordinates of ambient vectors (as columns) in this basis.
    pub fn coordinates(&self, m: &RatMat) -> RatMat {
        &self.basis.inverse().expect("nonsingular basis") * m
    }

    pub fn contains_vector(&self, v: &[BigRational]) -> bool {
        let col = RatMat::from_columns(&[v.to_vec()]).expect("column");
        self.coordinates(&col).is_integral()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.coordinates(&other.basis).is_integral()
    }

    pub fn scale(&self, c: &BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidInput("cannot scale a lattice by zero".into()));
        }
        Lattice::new(&self.basis.scale(c))
    }

    /// Image `g L`.
    pub fn image(&self, g: &RatMat) -> Result<Self> {
        Lattice::new(&(g * &self.basis))
    }

    /// Matrix of `g` in this basis.
    pub fn matrix_of(&self, g: &RatMat) -> RatMat {
        self.coordinates(&(g * &self.basis))
    }

    /// `g L` is contained in `L`.
    pub fn is_preserved_by(&self, g: &RatMat) -> bool {
        self.matrix_of(g).is_integral()
    }

    /// Gram matrix of an ambient bilinear form in this basis.
    pub fn gram(&self, form: &RatMat) -> RatMat {
        &(&self.basis.transpose() * form) * &self.basis
    }

    /// `L^dual = { x : omega_0(x, L) in Z }`, basis `(J B)^{-t}`.
    pub fn symplectic_dual(&self) -> Result<Self> {
        let n = half_dim(&self.basis)?;
        let jb = &RatMat::standard_j(n) * &self.basis;
        Lattice::new(&jb.transpose().inverse()?)
    }

    /// The positive `c` with `L^dual = c L`, when one exists.
    pub fn homothety_multiplier(&self) -> Result<Option<BigRational>> {
        let dual = self.symplectic_dual()?;
        let c = &dual.basis[(0, 0)] / &self.basis[(0, 0)];
        Ok((dual.basis == self.basis.scale(&c)).then_some(c))
    }
}

/// `gamma L` and `q gamma^-1 L` are both contained in `L`.
///
/// For ordinary `gamma` this is checked against the elementary-divisor
/// criterion and a disagreement is reported as an internal error.
pub fn lattice_gamma_conditions(l: &Lattice, gamma: &RatMat, q: &BigInt) -> Result<bool> {
    let qr = BigRational::from_integer(q.clone());
    let inclusions = l.is_preserved_by(gamma) && l.is_preserved_by(&gamma.inverse()?.scale(&qr));
    if let Some(p) = gamma.charpoly()?.to_int() {
        if is_ordinary(&p, q) && inclusions != smith_gamma_criterion(l, gamma, q)? {
            return Err(Error::Internal("inclusions disagree with elementary divisors".into()));
        }
    }
    Ok(inclusions)
}

/// The matrix of `gamma` in the basis of `L` is integral with elementary
/// divisors `(1^n, q^n)`.
pub fn smith_gamma_criterion(l: &Lattice, gamma: &RatMat, q: &BigInt) -> Result<bool> {
    let n = half_dim(gamma)?;
    let Some(m) = l.matrix_of(gamma).to_int() else {
        return Ok(false);
    };
    let diag = smith_normal_form(&m).diagonal();
    let expect: Vec<BigInt> = (0..2 * n)
        .map(|i| if i < n { BigInt::one() } else { q.clone() })
        .collect();
    Ok(diag == expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn dual_and_homothety() {
        let z2 = Lattice::standard(2);
        assert_eq!(z2.symplectic_dual().unwrap(), z2);
        assert_eq!(z2.homothety_multiplier().unwrap(), Some(rat(1, 1)));
        let l = Lattice::new(&RatMat::diag(&[rat(2, 1), rat(1, 1)])).unwrap();
        assert_eq!(
            l.symplectic_dual().unwrap(),
            Lattice::new(&RatMat::diag(&[rat(1, 1), rat(1, 2)])).unwrap()
        );
        assert_eq!(l.homothety_multiplier().unwrap(), Some(rat(1, 2)));
        // diag(2, 1, 1, 1) has dual diag(1, 1, 1/2, 1), not homothetic
        let l4 = Lattice::new(&RatMat::diag(&[rat(2, 1), rat(1, 1), rat(1, 1), rat(1, 1)])).unwrap();
        assert_eq!(l4.homothety_multiplier().unwrap(), None);
    }

    #[test]
    fn gamma_conditions() {
        let q = int(5);
        let g = RatMat::from_i64(&[&[1, -4], &[1, 1]]);
        assert!(lattice_gamma_conditions(&Lattice::standard(2), &g, &q).unwrap());
        let l = Lattice::new(&RatMat::diag(&[rat(1, 1), rat(2, 1)])).unwrap();
        assert!(!lattice_gamma_conditions(&l, &g, &q).unwrap());
        let g2 = RatMat::from_i64(&[&[0, 5], &[-1, 0]]);
        assert!(lattice_gamma_conditions(&Lattice::standard(2), &g2, &q).unwrap());
        assert!(smith_gamma_criterion(&Lattice::standard(2), &g2, &q).unwrap());
    }

    #[test]
    fn non_ordinary_gap() {
        // 2I with q = 4: both inclusions hold, elementary divisors are (2, 2).
        let g = RatMat::scalar(2, rat(2, 1));
        let z2 = Lattice::standard(2);
        assert!(lattice_gamma_conditions(&z2, &g, &int(4)).unwrap());
        assert!(!smith_gamma_criterion(&z2, &g, &int(4)).unwrap());
    }
}
