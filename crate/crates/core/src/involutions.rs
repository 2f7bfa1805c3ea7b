//! Involutions in GSp over Q and Z: normal forms, the mod-2 classification
//! of the `S` block, and the class sets of size `(3n+1)/2` or `(3n+2)/2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::{gcd_all, common_denominator, IntMat, RatMat};
use crate::symplectic::{darboux_basis, gsp_multiplier, siegel_reduce_int, Ring, SymplecticElement};
use crate::{Error, Result};

type Vectors = Vec<Vec<BigRational>>;

/// Normal form over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QNormalForm {
    /// `diag(-I, I)`, multiplier `-1`.
    Tau0,
    /// `diag(I_r, -I_{n-r}, I_r, -I_{n-r})`, multiplier `+1`.
    TauR(usize),
}

/// Shape of the `S` block over `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SType {
    /// `I_r + 0`; rank 0 is reported with this tag.
    Identity,
    /// `H + .. + H + 0`.
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SClass {
    pub rank: usize,
    pub kind: SType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionClass {
    pub multiplier: i64,
    pub over_q: QNormalForm,
    pub over_z: Option<SClass>,
}

/// `diag(I_r, -I_{n-r}, I_r, -I_{n-r})`.
pub fn tau_r(n: usize, r: usize) -> RatMat {
    let mut t = RatMat::identity(2 * n);
    for i in r..n {
        t[(i, i)] = -BigRational::one();
        t[(n + i, n + i)] = -BigRational::one();
    }
    t
}

/// `(I, S; 0, -I)`.
pub fn s_form(s: &IntMat) -> IntMat {
    let n = s.rows();
    let mut m = IntMat::identity(2 * n);
    m.set_block(0, n, s);
    for i in 0..n {
        m[(n + i, n + i)] = -BigInt::one();
    }
    m
}

/// The representative `S` of a class in dimension `n`.
pub fn s_representative(n: usize, class: SClass) -> Result<IntMat> {
    if class.rank > n || (class.kind == SType::Hyperbolic && !class.rank.is_multiple_of(2)) {
        return Err(Error::InvalidInput(format!("no class {class:?} in dimension {n}")));
    }
    let mut s = IntMat::zeros(n, n);
    for i in 0..class.rank {
        match class.kind {
            SType::Identity => s[(i, i)] = BigInt::one(),
            SType::Hyperbolic => s[(i, i ^ 1)] = BigInt::one(),
        }
    }
    Ok(s)
}

fn check_involution(tau: &RatMat) -> Result<i64> {
    if !(tau * tau).is_identity() {
        return Err(Error::InvalidInput("matrix is not an involution".into()));
    }
    let c = gsp_multiplier(tau)?;
    if c == BigRational::one() {
        Ok(1)
    } else if c == -BigRational::one() {
        Ok(-1)
    } else {
        Err(Error::NotSimilitude(format!("involution multiplier {c} is not +-1")))
    }
}

fn eigenspace(tau: &RatMat, sign: i64) -> RatMat {
    let m = tau - &RatMat::scalar(tau.rows(), BigRational::from_integer(sign.into()));
    let basis = m.nullspace();
    if basis.is_empty() {
        RatMat::zeros(tau.rows(), 0)
    } else {
        RatMat::from_columns(&basis).expect("uniform columns")
    }
}

/// `g` in `Sp_2n(Q)` with `g tau g^-1` in normal form.
pub fn normalize_involution_q(tau: &RatMat) -> Result<(SymplecticElement, InvolutionClass)> {
    let mult = check_involution(tau)?;
    let n = tau.rows() / 2;
    let j = RatMat::standard_j(n);
    let plus = eigenspace(tau, 1);
    let minus = eigenspace(tau, -1);
    let (p, over_q) = if mult == -1 {
        if plus.cols() != n || minus.cols() != n {
            return Err(Error::Internal("eigenspaces are not Lagrangian".into()));
        }
        let pairing = &(&minus.transpose() * &j) * &plus;
        let dual = &plus * &pairing.inverse()?;
        let cols: Vec<Vec<BigRational>> =
            (0..n).map(|i| minus.column(i)).chain((0..n).map(|i| dual.column(i))).collect();
        (RatMat::from_columns(&cols)?, QNormalForm::Tau0)
    } else {
        if !plus.cols().is_multiple_of(2) {
            return Err(Error::Internal("fixed space has odd dimension".into()));
        }
        let r = plus.cols() / 2;
        let halves = |space: &RatMat| -> Result<(Vectors, Vectors)> {
            let k = space.cols() / 2;
            if k == 0 {
                return Ok((Vec::new(), Vec::new()));
            }
            let gram = &(&space.transpose() * &j) * space;
            let d = space * &darboux_basis(&gram, Ring::Rational)?;
            Ok(((0..k).map(|i| d.column(i)).collect(), (k..2 * k).map(|i| d.column(i)).collect()))
        };
        let (xp, yp) = halves(&plus)?;
        let (xm, ym) = halves(&minus)?;
        let cols: Vec<Vec<BigRational>> = xp.into_iter().chain(xm).chain(yp).chain(ym).collect();
        (RatMat::from_columns(&cols)?, QNormalForm::TauR(r))
    };
    let g = SymplecticElement::new(p.inverse()?)?;
    let target = match over_q {
        QNormalForm::Tau0 => RatMat::standard_tau(n),
        QNormalForm::TauR(r) => tau_r(n, r),
    };
    if &(g.mat() * tau) * &p != target {
        return Err(Error::Internal("normal form check failed".into()));
    }
    Ok((g, InvolutionClass { multiplier: mult, over_q, over_z: None }))
}

fn int_inverse(g: &IntMat) -> Result<IntMat> {
    g.to_rat()
        .inverse()?
        .to_int()
        .ok_or_else(|| Error::Internal("inverse is not integral".into()))
}

/// Primitive integral vector spanning the line of a rational vector.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = gcd_all(&ints);
    ints.into_iter().map(|x| x / &g).collect()
}

/// `g` in `Sp_2n(Z)` with `g tau g^-1 = (I, B; 0, -I)` for some symmetric `B`.
fn upper_triangularize(tau: &IntMat) -> Result<IntMat> {
    let n = tau.rows() / 2;
    let fixed = eigenspace(&tau.to_rat(), 1);
    if fixed.cols() == 0 {
        return Err(Error::Internal("involution has no fixed vector".into()));
    }
    let v = primitive(&fixed.column(0));
    let g1 = siegel_reduce_int(&v)?;
    if n == 1 {
        return Ok(g1);
    }
    let t1 = &(&g1 * tau) * &int_inverse(&g1)?;
    let idx: Vec<usize> = (1..n).chain(n + 1..2 * n).collect();
    let g2 = upper_triangularize(&t1.submatrix(&idx, &idx))?;
    let mut embed = IntMat::identity(2 * n);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &k) in idx.iter().enumerate() {
            embed[(i, k)] = g2[(a, b)].clone();
        }
    }
    Ok(&embed * &g1)
}

/// Congruence `X S X^t` over `Z/2` bringing `S` to `I_a + H^b + 0`, then
/// `I_1 + H -> I_3` while both kinds are present. Returns unimodular `X`.
fn normalize_mod2(s: &IntMat) -> IntMat {
    let n = s.rows();
    let mut m: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| if s[(i, j)].is_odd() { 1 } else { 0 }).collect())
        .collect();
    let mut x = IntMat::identity(n);
    let swap = |m: &mut Vec<Vec<u8>>, x: &mut IntMat, i: usize, j: usize| {
        if i == j {
            return;
        }
        m.swap(i, j);
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for c in 0..n {
            let t = x[(i, c)].clone();
            x[(i, c)] = x[(j, c)].clone();
            x[(j, c)] = t;
        }
    };
    // row/col l += row/col k
    let add = |m: &mut Vec<Vec<u8>>, x: &mut IntMat, l: usize, k: usize| {
        let src = m[k].clone();
        for (a, b) in m[l].iter_mut().zip(&src) {
            *a ^= b;
        }
        for row in m.iter_mut() {
            row[l] ^= row[k];
        }
        for c in 0..n {
            let t = &x[(l, c)] + &x[(k, c)];
            x[(l, c)] = t;
        }
    };
    let mut k = 0;
    let mut ones = 0;
    let mut hyper = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| m[i][i] == 1) {
            swap(&mut m, &mut x, k, i);
            for l in k + 1..n {
                if m[l][k] == 1 {
                    add(&mut m, &mut x, l, k);
                }
            }
            ones += 1;
            k += 1;
        } else if let Some((i, j)) =
            (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] == 1)
        {
            swap(&mut m, &mut x, k, i);
            let j = if j == k { i } else { j };
            swap(&mut m, &mut x, k + 1, j);
            for l in k + 2..n {
                if m[l][k] == 1 {
                    add(&mut m, &mut x, l, k + 1);
                }
                if m[l][k + 1] == 1 {
                    add(&mut m, &mut x, l, k);
                }
            }
            hyper += 1;
            k += 2;
        } else {
            break;
        }
    }
    debug_assert!(k == ones + 2 * hyper);
    // I_1 + H = I_3 via the basis u+v, u+w, u+v+w.
    while ones > 0 && hyper > 0 {
        let (u, v, w) = (ones - 1, ones, ones + 1);
        let mut y = IntMat::identity(n);
        for (r, cols) in [(u, [u, v].as_slice()), (v, [u, w].as_slice()), (w, [u, v, w].as_slice())] {
            y[(r, r)] = BigInt::zero();
            for &c in cols {
                y[(r, c)] = BigInt::one();
            }
        }
        x = &y * &x;
        ones += 2;
        hyper -= 1;
    }
    x
}

fn rank_mod2(s: &IntMat) -> usize {
    let n = s.rows();
    let mut m: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..s.cols()).map(|j| if s[(i, j)].is_odd() { 1 } else { 0 }).collect())
        .collect();
    let mut rank = 0;
    for c in 0..s.cols() {
        let Some(p) = (rank..n).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..n {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (a, b) in m[r].iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Class of a symmetric matrix over `Z/2` under congruence.
pub fn classify_mod2(s: &IntMat) -> Result<SClass> {
    if !s.is_square() {
        return Err(Error::Dimension("S must be square".into()));
    }
    let n = s.rows();
    for i in 0..n {
        for j in 0..i {
            if (&s[(i, j)] - &s[(j, i)]).is_odd() {
                return Err(Error::InvalidInput("S is not symmetric mod 2".into()));
            }
        }
    }
    let rank = rank_mod2(s);
    let odd_diag = (0..n).any(|i| s[(i, i)].is_odd());
    let kind = if rank == 0 || odd_diag { SType::Identity } else { SType::Hyperbolic };
    Ok(SClass { rank, kind })
}

/// Result of the integral normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZNormalForm {
    pub g: IntMat,
    pub s: IntMat,
    pub class: InvolutionClass,
}

/// `g` in `Sp_2n(Z)` with `g tau g^-1 = (I, S; 0, -I)` and `S` a class representative.
pub fn normalize_involution_z(tau: &IntMat) -> Result<ZNormalForm> {
    if check_involution(&tau.to_rat())? != -1 {
        return Err(Error::Precondition("integral normal form needs multiplier -1".into()));
    }
    let n = tau.rows() / 2;
    let g = upper_triangularize(tau)?;
    let t = &(&g * tau) * &int_inverse(&g)?;
    let b = t.block(0, n, n, n);
    if t != s_form(&b) || !b.is_symmetric() {
        return Err(Error::Internal("triangularization did not reach (I, B; 0, -I)".into()));
    }
    let x = normalize_mod2(&b);
    let x_inv_t = int_inverse(&x)?.transpose();
    let z = IntMat::zeros(n, n);
    let delta = IntMat::from_blocks(&x, &z, &z, &x_inv_t)?;
    let b2 = &(&x * &b) * &x.transpose();
    let half = b2.map(|v| v.div_floor(&BigInt::from(2)));
    let mut shear = IntMat::identity(2 * n);
    shear.set_block(0, n, &half);
    let g = &(&shear * &delta) * &g;
    let s = b2.map(|v| v.mod_floor(&BigInt::from(2)));
    let check = &(&g * tau) * &int_inverse(&g)?;
    if check != s_form(&s) {
        return Err(Error::Internal("normal form check failed".into()));
    }
    let class = classify_mod2(&s)?;
    if s != s_representative(n, class)? {
        return Err(Error::Internal("S is not the class representative".into()));
    }
    Ok(ZNormalForm {
        g,
        s,
        class: InvolutionClass { multiplier: -1, over_q: QNormalForm::Tau0, over_z: Some(class) },
    })
}

/// `(3n+1)/2` for odd `n`, `(3n+2)/2` for even `n`.
pub fn h1_size(n: usize) -> u64 {
    let n = n as u64;
    if n % 2 == 1 {
        (3 * n).div_ceil(2)
    } else {
        (3 * n + 2) / 2
    }
}

/// One class per rank; two classes for even rank at least 2.
pub fn h1_classes(n: usize) -> Vec<SClass> {
    let mut out = Vec::new();
    for rank in 0..=n {
        out.push(SClass { rank, kind: SType::Identity });
        if rank >= 2 && rank % 2 == 0 {
            out.push(SClass { rank, kind: SType::Hyperbolic });
        }
    }
    out
}

pub fn h1_enumerate(n: usize) -> Vec<IntMat> {
    h1_classes(n)
        .into_iter()
        .map(|c| s_representative(n, c).expect("valid class"))
        .collect()
}

/// Random word of the given length in `J` and elementary symmetric shears.
pub fn random_sp_word<R: Rng>(n: usize, length: usize, rng: &mut R) -> IntMat {
    let mut g = IntMat::identity(2 * n);
    for _ in 0..length {
        let gen = if rng.gen_bool(0.25) {
            IntMat::standard_j(n)
        } else {
            let i = rng.gen_range(0..n);
            let k = rng.gen_range(0..n);
            let sign = if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() };
            let mut m = IntMat::identity(2 * n);
            m[(i, n + k)] = sign.clone();
            m[(k, n + i)] = sign;
            m
        };
        g = &gen * &g;
    }
    g
}

pub fn random_sp_element(n: usize, length: usize, seed: u64) -> IntMat {
    random_sp_word(n, length, &mut ChaCha8Rng::seed_from_u64(seed))
}
