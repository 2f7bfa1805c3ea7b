//! Symplectic linear algebra over Q and Z: similitude multipliers, Darboux
//! bases, lattices and their symplectic duals, q-inversive elements and
//! companion matrices, signature profiles, and Siegel reduction.

mod darboux;
mod lattice;
mod qinv;
mod signature;
mod siegel;

use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{IntMat, RatMat};
use crate::{Error, Result};

pub use darboux::{darboux_basis, Ring};
pub use lattice::{lattice_gamma_conditions, smith_gamma_criterion, Lattice};
pub use qinv::{
    a_block_relation, companion, companion_general, is_q_inversive, q_inversive_from_pair,
    QInversive,
};
pub use signature::{signature_profile, SignatureEntry, SignatureProfile};
pub use siegel::{siegel_reduce, siegel_reduce_int};

/// Half the size of a square even-dimensional matrix.
pub(crate) fn half_dim(g: &RatMat) -> Result<usize> {
    if !g.is_square() || !g.rows().is_multiple_of(2) || g.rows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a nonempty 2n x 2n matrix, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    Ok(g.rows() / 2)
}

/// The scalar `c` with `g^t J g = c J`.
pub fn gsp_multiplier(g: &RatMat) -> Result<BigRational> {
    let n = half_dim(g)?;
    let j = RatMat::standard_j(n);
    let form = &(&g.transpose() * &j) * g;
    let c = form[(0, n)].clone();
    if c.is_zero() {
        return Err(Error::NotSimilitude("multiplier would be zero".into()));
    }
    if form != j.scale(&c) {
        return Err(Error::NotSimilitude("g^t J g is not a multiple of J".into()));
    }
    Ok(c)
}

/// Element of `GSp_2n(Q)` with its multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticElement {
    mat: RatMat,
    multiplier: BigRational,
}

impl SymplecticElement {
    pub fn new(mat: RatMat) -> Result<Self> {
        let multiplier = gsp_multiplier(&mat)?;
        Ok(SymplecticElement { mat, multiplier })
    }

    pub fn from_int(mat: &IntMat) -> Result<Self> {
        Self::new(mat.to_rat())
    }

    pub fn mat(&self) -> &RatMat {
        &self.mat
    }

    pub fn multiplier(&self) -> &BigRational {
        &self.multiplier
    }

    pub fn n(&self) -> usize {
        self.mat.rows() / 2
    }

    pub fn to_int(&self) -> Option<IntMat> {
        self.mat.to_int()
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.mat.inverse()?)
    }
}

/// `diag(lambda X, X^-t)`, the standard embedding of `GL_n`.
pub fn delta(lambda: &BigRational, x: &RatMat) -> Result<RatMat> {
    let xt_inv = x.transpose().inverse()?;
    let z = RatMat::zeros(x.rows(), x.rows());
    RatMat::from_blocks(&x.scale(lambda), &z, &z, &xt_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn multipliers() {
        assert_eq!(gsp_multiplier(&RatMat::standard_j(2)).unwrap(), rat(1, 1));
        assert_eq!(gsp_multiplier(&RatMat::standard_tau(2)).unwrap(), rat(-1, 1));
        assert_eq!(gsp_multiplier(&RatMat::from_i64(&[&[1, -4], &[1, 1]])).unwrap(), rat(5, 1));
        let bad = RatMat::from_i64(&[&[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(gsp_multiplier(&bad).is_err());
    }

    #[test]
    fn delta_embedding_is_symplectic() {
        let x = RatMat::from_i64(&[&[2, 1], &[1, 1]]);
        let d = delta(&rat(3, 1), &x).unwrap();
        assert_eq!(gsp_multiplier(&d).unwrap(), rat(3, 1));
    }
}
