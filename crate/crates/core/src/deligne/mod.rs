//! Deligne modules `(T, F)` with polarizations, real structures and level
//! structures; positivity certificates; the duality involution; the fixed
//! lattice functor to totally real lattice modules; the unit/non-unit split
//! modulo `p^k`.

mod hensel;
mod positivity;
mod real;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::{IntMat, IntPoly, RatMat, RatPoly};
use crate::symplectic::Lattice;
use crate::weil::{is_ordinary, is_weil_q_polynomial, WeilContext};
use crate::{Error, Result};

pub use hensel::{hensel_split_mod_pk, HenselSplit};
pub use positivity::{certificate_n1, positivity_check, viability_search_n1, PolarizationCertificate};
pub use real::{
    check_real_structure_from_isomorphism, duality_involution, isogeny_class_equal,
    real_fixed_module, TotallyRealModule,
};

/// `(T, F)`: a lattice `T` in `Q^2n` and a rational matrix `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeligneModule {
    ctx: WeilContext,
    lattice: Lattice,
    f: RatMat,
}

/// Principal level `N` structure `beta: T/NT -> (Z/N)^2n`, in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub modulus: BigInt,
    pub beta: IntMat,
}

/// A Deligne module with a symplectic form and optional real and level structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedReal {
    pub base: DeligneModule,
    pub omega: RatMat,
    pub tau: Option<RatMat>,
    pub level: Option<Level>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &str, pass: bool, witness: impl FnOnce() -> String) {
        let witness = (!pass).then(witness);
        self.checks.push(Check { name: name.into(), pass, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn qr(q: &BigInt) -> BigRational {
    BigRational::from_integer(q.clone())
}

impl DeligneModule {
    pub fn new(ctx: WeilContext, lattice: Lattice, f: RatMat) -> Result<Self> {
        let dim = 2 * ctx.n();
        if lattice.dim() != dim || f.rows() != dim || f.cols() != dim {
            return Err(Error::Dimension(format!("expected {dim}x{dim} data for n = {}", ctx.n())));
        }
        Ok(DeligneModule { ctx, lattice, f })
    }

    /// `(Z^2n, F)`.
    pub fn standard(ctx: WeilContext, f: RatMat) -> Result<Self> {
        let l = Lattice::standard(2 * ctx.n());
        Self::new(ctx, l, f)
    }

    pub fn ctx(&self) -> &WeilContext {
        &self.ctx
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn f(&self) -> &RatMat {
        &self.f
    }

    /// `V = q F^-1`.
    pub fn v(&self) -> Result<RatMat> {
        Ok(self.f.inverse()?.scale(&qr(self.ctx.q())))
    }

    pub fn charpoly(&self) -> Result<RatPoly> {
        self.f.charpoly()
    }

    /// Squarefree part of the characteristic polynomial, which is the
    /// minimal polynomial exactly when `F` is semisimple.
    pub fn radical(&self) -> Result<RatPoly> {
        Ok(self.charpoly()?.squarefree_part().monic())
    }

    pub fn is_semisimple(&self) -> Result<bool> {
        Ok(self.f.eval_poly(&self.radical()?).is_zero())
    }

    /// Matrix of `F` in the lattice basis.
    pub fn f_on_lattice(&self) -> RatMat {
        self.lattice.matrix_of(&self.f)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let q = self.ctx.q();
        r.push("F preserves T", self.lattice.is_preserved_by(&self.f), || {
            format!("F in the basis of T: {:?}", self.f_on_lattice())
        });
        match self.v() {
            Ok(v) => r.push("V = qF^-1 preserves T", self.lattice.is_preserved_by(&v), || {
                format!("V in the basis of T: {:?}", self.lattice.matrix_of(&v))
            }),
            Err(e) => r.push("V = qF^-1 preserves T", false, || e.to_string()),
        }
        let semisimple = self.is_semisimple();
        r.push("F semisimple", matches!(semisimple, Ok(true)), || match &semisimple {
            Ok(_) => "radical of the characteristic polynomial does not annihilate F".into(),
            Err(e) => e.to_string(),
        });
        let p = self.charpoly().ok().and_then(|c| c.to_int());
        let weil = match &p {
            Some(p) => is_weil_q_polynomial(p, q).map_err(|e| e.to_string()),
            None => Err("characteristic polynomial is not integral".to_string()),
        };
        r.push("charpoly is a Weil q-polynomial", matches!(weil, Ok(true)), || match &weil {
            Ok(_) => format!("{:?} has roots off the Weil circle", p),
            Err(e) => e.clone(),
        });
        let ord = p.as_ref().is_some_and(|p| is_ordinary(p, q));
        r.push("charpoly is ordinary", ord, || {
            format!("middle coefficient of {:?} is zero or not prime to q", p.as_ref().map(IntPoly::coeffs))
        });
        r
    }
}

fn gcd_is_one(a: &BigInt, b: &BigInt) -> bool {
    a.gcd(b).is_one()
}

impl PolarizedReal {
    pub fn new(base: DeligneModule, omega: RatMat) -> Self {
        PolarizedReal { base, omega, tau: None, level: None }
    }

    pub fn with_tau(mut self, tau: RatMat) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.level = Some(level);
        self
    }

    /// `(Z^2n, F, omega_0, tau_0)`.
    pub fn standard(ctx: WeilContext, f: RatMat) -> Result<Self> {
        let n = ctx.n();
        let base = DeligneModule::standard(ctx, f)?;
        Ok(PolarizedReal::new(base, RatMat::standard_j(n)).with_tau(RatMat::standard_tau(n)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = self.base.validate();
        let l = &self.base.lattice;
        let f = &self.base.f;
        let w = &self.omega;
        let dim = f.rows();
        let shape_ok = w.rows() == dim && w.cols() == dim;
        r.push("omega has the ambient shape", shape_ok, || format!("{}x{}", w.rows(), w.cols()));
        if !shape_ok {
            return r;
        }
        let nondeg = w.is_antisymmetric() && w.determinant().is_ok_and(|d| !d.is_zero());
        r.push("omega antisymmetric and nondegenerate", nondeg, || format!("{w:?}"));
        let gram = l.gram(w);
        r.push("omega integral on T", gram.is_integral(), || format!("Gram on T: {gram:?}"));
        let v = self.base.v().unwrap_or_else(|_| RatMat::zeros(dim, dim));
        let adj = &f.transpose() * w == w * &v;
        r.push("omega(Fx, y) = omega(x, Vy)", adj, || "F^t omega != omega V".into());

        if let Some(t) = &self.tau {
            r.push("tau^2 = I", (t * t).is_identity(), || format!("{:?}", t * t));
            let tt = l.is_preserved_by(t) && t.inverse().is_ok_and(|ti| l.is_preserved_by(&ti));
            r.push("tau T = T", tt, || format!("tau in the basis of T: {:?}", l.matrix_of(t)));
            let swap = t.inverse().is_ok_and(|ti| &(t * f) * &ti == v);
            r.push("tau F tau^-1 = V", swap, || "tau F tau^-1 differs from V".into());
            let anti = &(&t.transpose() * w) * t == w.scale(&-BigRational::one());
            r.push("omega(tau x, tau y) = -omega(x, y)", anti, || "tau^t omega tau != -omega".into());
        }

        if let Some(lv) = &self.level {
            self.validate_level(lv, &gram, &mut r);
        }
        r
    }

    fn validate_level(&self, lv: &Level, gram: &RatMat, r: &mut ValidationReport) {
        let nmod = &lv.modulus;
        let ctx = &self.base.ctx;
        let n = ctx.n();
        let l = &self.base.lattice;
        r.push("N >= 1 and p does not divide N", nmod >= &BigInt::one() && gcd_is_one(nmod, ctx.p()), || {
            format!("N = {nmod}, p = {}", ctx.p())
        });
        if nmod < &BigInt::one() {
            return;
        }
        let red = |m: &IntMat| m.reduce_mod(nmod);
        let f_t = self.base.f_on_lattice().to_int();
        let f_ok = f_t.as_ref().is_some_and(|m| red(m) == red(&IntMat::identity(2 * n)));
        r.push("F = I mod N on T", f_ok, || format!("F on T: {f_t:?}"));
        let beta = &lv.beta;
        let beta_ok = beta.rows() == 2 * n
            && beta.cols() == 2 * n
            && beta.determinant().is_ok_and(|d| gcd_is_one(&d, nmod));
        r.push("beta invertible mod N", beta_ok, || format!("beta = {beta:?}"));
        if !beta_ok {
            return;
        }
        let g_int = gram.to_int();
        let j = IntMat::standard_j(n);
        let pulled = &(&beta.transpose() * &j) * beta;
        let form_ok = g_int.as_ref().is_some_and(|g| red(g) == red(&pulled));
        r.push("beta carries omega to the standard form mod N", form_ok, || {
            format!("Gram on T {g_int:?} vs beta^t J beta {pulled:?}")
        });
        if let Some(t) = &self.tau {
            let t_t = l.matrix_of(t).to_int();
            let tau0 = IntMat::standard_tau(n);
            let inv_ok = t_t.as_ref().is_some_and(|tt| red(&(beta * tt)) == red(&(&tau0 * beta)));
            r.push("beta carries tau to the standard involution mod N", inv_ok, || {
                format!("tau on T: {t_t:?}")
            });
            let p_ok = (ctx.p() - BigInt::one()).is_multiple_of(nmod);
            r.push("p = 1 mod N", p_ok, || format!("p = {}, N = {nmod}", ctx.p()));
        }
    }
}
