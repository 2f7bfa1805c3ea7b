use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{gsp_multiplier, half_dim};
use crate::exact::{is_square, IntPoly, RatMat, RatPoly};
use crate::weil::{counterpart_unchecked, is_ordinary, is_q_palindromic, real_counterpart};
use crate::{Error, Result};

/// q-inversive element `gamma = (A, B; C, A^t)` with `B`, `C` symmetric and `A^2 - BC = qI`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QInversive {
    a: RatMat,
    b: RatMat,
    c: RatMat,
    q: BigInt,
    gamma: RatMat,
}

fn check_blocks(a: &RatMat, b: &RatMat, c: &RatMat, q: &BigInt) -> Result<()> {
    if !b.is_symmetric() {
        return Err(Error::Precondition("block B is not symmetric".into()));
    }
    if !c.is_symmetric() {
        return Err(Error::Precondition("block C is not symmetric".into()));
    }
    let n = a.rows();
    let lhs = &(a * a) - &(b * c);
    if lhs != RatMat::scalar(n, BigRational::from_integer(q.clone())) {
        return Err(Error::Precondition("A^2 - BC != qI".into()));
    }
    Ok(())
}

impl QInversive {
    pub fn from_blocks(a: RatMat, b: RatMat, c: RatMat, q: &BigInt) -> Result<Self> {
        check_blocks(&a, &b, &c, q)?;
        let gamma = RatMat::from_blocks(&a, &b, &c, &a.transpose())?;
        let mult = gsp_multiplier(&gamma)?;
        if mult != BigRational::from_integer(q.clone()) {
            return Err(Error::Precondition(format!("multiplier is {mult}, expected {q}")));
        }
        Ok(QInversive { a, b, c, q: q.clone(), gamma })
    }

    /// Split a `2n x 2n` matrix into blocks and validate.
    pub fn from_matrix(g: &RatMat, q: &BigInt) -> Result<Self> {
        let n = half_dim(g)?;
        if g.block(n, n, n, n) != g.block(0, 0, n, n).transpose() {
            return Err(Error::Precondition("lower-right block is not A^t".into()));
        }
        Self::from_blocks(g.block(0, 0, n, n), g.block(0, n, n, n), g.block(n, 0, n, n), q)
    }

    pub fn a(&self) -> &RatMat {
        &self.a
    }

    pub fn b(&self) -> &RatMat {
        &self.b
    }

    pub fn c(&self) -> &RatMat {
        &self.c
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn gamma(&self) -> &RatMat {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn charpoly(&self) -> Result<RatPoly> {
        self.gamma.charpoly()
    }
}

/// Block symmetry, `A^2 - BC = qI`, and multiplier `q`.
pub fn is_q_inversive(g: &RatMat, q: &BigInt) -> bool {
    QInversive::from_matrix(g, q).is_ok()
}

/// `gamma = (A, (A^2 - qI) C^-1; C, A^t)` for symmetric nonsingular `C` with `A^t C = C A`.
pub fn q_inversive_from_pair(a: &RatMat, c: &RatMat, q: &BigInt) -> Result<QInversive> {
    if !a.is_square() || a.rows() != c.rows() || !c.is_square() {
        return Err(Error::Dimension("A and C must be square of equal size".into()));
    }
    if !c.is_symmetric() {
        return Err(Error::Precondition("C is not symmetric".into()));
    }
    let c_inv = c.inverse().map_err(|_| Error::Precondition("C is singular".into()))?;
    if &a.transpose() * c != c * a {
        return Err(Error::Precondition("A^t C != C A".into()));
    }
    let n = a.rows();
    let b = &(&(a * a) - &RatMat::scalar(n, BigRational::from_integer(q.clone()))) * &c_inv;
    QInversive::from_blocks(a.clone(), b, c.clone(), q)
}

/// `2^-n h(2x)`, the monic polynomial whose roots are half those of `h`.
fn halved_roots(h: &RatPoly) -> RatPoly {
    let two = BigRational::from_integer(BigInt::from(2));
    let r = h.rescale_arg(&two);
    r.monic()
}

/// The real counterpart `h` of `charpoly(gamma)` and whether `charpoly(A) = 2^-n h(2x)`.
pub fn a_block_relation(g: &QInversive) -> Result<(IntPoly, bool)> {
    let p = g
        .charpoly()?
        .to_int()
        .ok_or_else(|| Error::Precondition("characteristic polynomial is not integral".into()))?;
    let h = real_counterpart(&p, g.q())?;
    let ok = g.a().charpoly()? == halved_roots(&h.to_rat());
    Ok((h, ok))
}

/// `(A, B, C)` blocks for a monic `g(x) = x^d - h_{d-1} x^{d-1} - ... - h_0`.
fn companion_blocks(g: &RatPoly, q: &BigInt) -> Result<(RatMat, RatMat, RatMat)> {
    let d = g.degree().expect("nonconstant factor");
    let h: Vec<BigRational> = (0..d).map(|i| -g.coeff(i)).collect();
    let mut a = RatMat::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            a[(i + 1, i)] = BigRational::one();
        }
        a[(i, d - 1)] = h[i].clone();
    }
    let mut b = RatMat::zeros(d, d);
    for i in 0..d.saturating_sub(1) {
        for j in 0..d - 1 {
            if i + j + 2 >= d {
                b[(i, j)] = h[i + j + 2 - d].clone();
            }
        }
    }
    b[(d - 1, d - 1)] = BigRational::one();
    let b_inv = b
        .inverse()
        .map_err(|_| Error::Unsupported("companion Hankel block is singular (root at 0)".into()))?;
    let qi = RatMat::scalar(d, BigRational::from_integer(q.clone()));
    let c = &b_inv * &(&(&a * &a) - &qi);
    Ok((a, b, c))
}

/// Symplectic companion matrix of any monic q-palindromic `p`, with the
/// real-root blocks at `+-sqrt q` and squarefree blocks for repeated roots.
pub fn companion_general(p: &IntPoly, q: &BigInt) -> Result<QInversive> {
    if !is_q_palindromic(p, q)? {
        return Err(Error::NotPalindromic { q: q.to_string() });
    }
    let pr = p.to_rat();
    let n = p.degree().expect("checked") / 2;
    let mut rest = halved_roots(&counterpart_unchecked(&pr, q, n));
    let qr = BigRational::from_integer(q.clone());
    let zero = || RatMat::zeros(1, 1);
    let mut blocks: Vec<(RatMat, RatMat, RatMat)> = Vec::new();

    if is_square(q) {
        let s = BigRational::from_integer(q.sqrt());
        for root in [s.clone(), -s] {
            let lin = RatPoly::new(vec![-root.clone(), BigRational::one()]);
            while rest.eval(&root).is_zero() {
                rest = rest.exact_div(&lin)?;
                blocks.push((RatMat::scalar(1, root.clone()), zero(), zero()));
            }
        }
    } else {
        let x2q = RatPoly::new(vec![-qr.clone(), BigRational::zero(), BigRational::one()]);
        let a = RatMat::from_rows(vec![
            vec![BigRational::zero(), BigRational::one()],
            vec![qr.clone(), BigRational::zero()],
        ])?;
        while rest.degree().unwrap_or(0) >= 2 && rest.rem(&x2q)?.is_zero() {
            rest = rest.exact_div(&x2q)?;
            blocks.push((a.clone(), RatMat::zeros(2, 2), RatMat::zeros(2, 2)));
        }
    }

    if rest.degree().unwrap_or(0) > 0 {
        if rest.is_squarefree() {
            blocks.push(companion_blocks(&rest, q)?);
        } else {
            for (factor, mult) in rest.squarefree_decomposition() {
                let blk = companion_blocks(&factor, q)?;
                for _ in 0..mult {
                    blocks.push(blk.clone());
                }
            }
        }
    }

    let a = RatMat::block_diag(&blocks.iter().map(|b| b.0.clone()).collect::<Vec<_>>());
    let b = RatMat::block_diag(&blocks.iter().map(|b| b.1.clone()).collect::<Vec<_>>());
    let c = RatMat::block_diag(&blocks.iter().map(|b| b.2.clone()).collect::<Vec<_>>());
    let g = QInversive::from_blocks(a, b, c, q)?;
    if g.charpoly()? != pr {
        return Err(Error::Internal("companion has the wrong characteristic polynomial".into()));
    }
    Ok(g)
}

/// Companion matrix of an ordinary q-palindromic polynomial.
pub fn companion(p: &IntPoly, q: &BigInt) -> Result<QInversive> {
    if !is_q_palindromic(p, q)? {
        return Err(Error::NotPalindromic { q: q.to_string() });
    }
    if !is_ordinary(p, q) {
        return Err(Error::NotOrdinary("middle coefficient is zero or shares a factor with q".into()));
    }
    companion_general(p, q)
}
