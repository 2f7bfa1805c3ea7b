use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use weilkit::deligne::{DeligneModule, Level, PolarizedReal};
use weilkit::exact::{format_rational, parse_rational, IntMat, IntPoly, Matrix, RatMat, RatPoly, Scalar};
use weilkit::symplectic::Lattice;
use weilkit::weil::WeilContext;
use weilkit::Error;

pub type Result<T> = std::result::Result<T, Error>;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// A number written as a decimal string `"-3"`, a fraction `"1/2"` or a JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            Num::Str(s) => parse_rational(s),
        }
    }

    pub fn integer(&self) -> Result<BigInt> {
        let r = self.rational()?;
        r.is_integer().then(|| r.to_integer()).ok_or_else(|| bad(format!("{r} is not an integer")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyIn {
    pub coeffs: Vec<Num>,
}

impl PolyIn {
    pub fn rat(&self) -> Result<RatPoly> {
        Ok(RatPoly::new(self.coeffs.iter().map(Num::rational).collect::<Result<_>>()?))
    }

    pub fn int(&self) -> Result<IntPoly> {
        Ok(IntPoly::new(self.coeffs.iter().map(Num::integer).collect::<Result<_>>()?))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixIn {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Num>>,
}

impl MatrixIn {
    pub fn rat(&self) -> Result<RatMat> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(bad(format!("matrix data does not have shape {}x{}", self.rows, self.cols)));
        }
        let rows = self
            .data
            .iter()
            .map(|r| r.iter().map(Num::rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if self.rows == 0 || self.cols == 0 {
            return Err(bad("empty matrix"));
        }
        RatMat::from_rows(rows)
    }

    pub fn int(&self) -> Result<IntMat> {
        self.rat()?.to_int().ok_or_else(|| bad("matrix is not integral"))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CtxIn {
    pub q: Num,
    pub n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelIn {
    #[serde(rename = "N")]
    pub modulus: Num,
    pub beta: MatrixIn,
}

/// `{ctx, lattice?, F, omega?, tau?, level?}`; the lattice defaults to `Z^2n` and `omega` to `J`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleIn {
    pub ctx: CtxIn,
    #[serde(default)]
    pub lattice: Option<MatrixIn>,
    #[serde(rename = "F")]
    pub f: MatrixIn,
    #[serde(default)]
    pub omega: Option<MatrixIn>,
    #[serde(default)]
    pub tau: Option<MatrixIn>,
    #[serde(default)]
    pub level: Option<LevelIn>,
}

impl ModuleIn {
    pub fn build(&self) -> Result<PolarizedReal> {
        let ctx = WeilContext::new(&self.ctx.q.integer()?, self.ctx.n)?;
        let n = self.ctx.n;
        let lattice = match &self.lattice {
            Some(m) => Lattice::new(&m.rat()?)?,
            None => Lattice::standard(2 * n),
        };
        let f = self.f.rat()?;
        if f.rows() != 2 * n || f.cols() != 2 * n {
            return Err(Error::Dimension(format!("F must be {0}x{0}", 2 * n)));
        }
        let base = DeligneModule::new(ctx, lattice, f)?;
        let omega = match &self.omega {
            Some(m) => m.rat()?,
            None => RatMat::standard_j(n),
        };
        let mut pr = PolarizedReal::new(base, omega);
        if let Some(t) = &self.tau {
            pr = pr.with_tau(t.rat()?);
        }
        if let Some(l) = &self.level {
            pr = pr.with_level(Level { modulus: l.modulus.integer()?, beta: l.beta.int()? });
        }
        Ok(pr)
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| bad(format!("malformed payload: {e}")))
}

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn rat(v: &BigRational) -> Value {
    Value::String(format_rational(v))
}

pub fn poly<T: Scalar + ToString>(p: &weilkit::exact::Poly<T>) -> Value {
    json!({"coeffs": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()})
}

pub fn rat_poly(p: &RatPoly) -> Value {
    json!({"coeffs": p.coeffs().iter().map(format_rational).collect::<Vec<_>>()})
}

pub fn matrix<T: Scalar>(m: &Matrix<T>, fmt: impl Fn(&T) -> String) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.to_rows().iter().map(|r| r.iter().map(&fmt).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn rat_mat(m: &RatMat) -> Value {
    matrix(m, format_rational)
}

pub fn int_mat(m: &IntMat) -> Value {
    matrix(m, |v| v.to_string())
}
