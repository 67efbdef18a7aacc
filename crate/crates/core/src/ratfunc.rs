//! Reduced quotients of ring polynomials.

use std::fmt;

use crate::arith::{GaussianRational, QBase};
use crate::error::{Error, Result};
use crate::poly::{HalfInt, Kind, RingPoly};

/// `num / den` in lowest terms.
///
/// Additive kind: `den` is monic. Multiplicative kind: monomials are units,
/// so `den` has no `z` factor and its constant coefficient is 1; any power of
/// `z` lives in `num`. With these conventions the representation is unique,
/// and structural equality is equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: RingPoly,
    den: RingPoly,
}

impl RatFunc {
    pub fn new(num: RingPoly, den: RingPoly) -> Result<Self> {
        if num.kind() != den.kind() {
            return Err(Error::KindMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: RingPoly) -> Self {
        let kind = p.kind();
        RatFunc {
            num: p,
            den: RingPoly::one(kind),
        }
    }

    pub fn constant(kind: Kind, c: GaussianRational) -> Self {
        Self::from_poly(RingPoly::constant(kind, c))
    }

    pub fn zero(kind: Kind) -> Self {
        Self::from_poly(RingPoly::zero(kind))
    }

    pub fn one(kind: Kind) -> Self {
        Self::from_poly(RingPoly::one(kind))
    }

    fn normalize(num: RingPoly, den: RingPoly) -> Self {
        let kind = num.kind();
        if num.is_zero() {
            return Self::zero(kind);
        }
        let (a, n) = num.split_monomial();
        let (b, d) = den.split_monomial();
        let g = n.gcd(&d).expect("kinds checked");
        let (n, d) = if g.is_constant() {
            (n, d)
        } else {
            (
                n.exact_div(&g).expect("gcd divides"),
                d.exact_div(&g).expect("gcd divides"),
            )
        };
        match kind {
            Kind::Additive => {
                let m = a.min(b);
                let n = n.mul_var_pow(a - m);
                let d = d.mul_var_pow(b - m);
                let lc = d.leading_coeff().unwrap().inv().expect("nonzero");
                RatFunc {
                    num: n.scale(&lc),
                    den: d.scale(&lc),
                }
            }
            Kind::Multiplicative => {
                let c0 = d.coeff(0).inv().expect("trailing coefficient nonzero");
                RatFunc {
                    num: n.mul_var_pow(a - b).scale(&c0),
                    den: d.scale(&c0),
                }
            }
        }
    }

    pub fn kind(&self) -> Kind {
        self.num.kind()
    }

    pub fn num(&self) -> &RingPoly {
        &self.num
    }

    pub fn den(&self) -> &RingPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(p)` when the function is a (Laurent) polynomial.
    pub fn as_poly(&self) -> Option<&RingPoly> {
        (self.den.is_constant()).then_some(&self.num)
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.combine(other, true)
    }

    fn combine(&self, other: &RatFunc, negate: bool) -> Result<RatFunc> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch);
        }
        let pick = |l: RingPoly, r: RingPoly| if negate { &l - &r } else { &l + &r };
        if self.den == other.den {
            return RatFunc::new(pick(self.num.clone(), other.num.clone()), self.den.clone());
        }
        let num = pick(&self.num * &other.den, &other.num * &self.den);
        RatFunc::new(num, &self.den * &other.den)
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch);
        }
        RatFunc::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch);
        }
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn mul_poly(&self, p: &RingPoly) -> Result<RatFunc> {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &GaussianRational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.kind());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    /// The `*`-conjugate `f*(x) = f(x*)*`.
    pub fn star(&self) -> RatFunc {
        Self::normalize(self.num.star(), self.den.star())
    }

    /// `f(x + i·c·γ)`, see [`RingPoly::shift_substitute`].
    pub fn shift(&self, c: HalfInt, qbase: Option<&QBase>) -> Result<RatFunc> {
        RatFunc::new(
            self.num.shift_substitute(c, qbase)?,
            self.den.shift_substitute(c, qbase)?,
        )
    }
}

/// An unreduced product `c·∏num_k / ∏den_k`.
///
/// Comparing two of these by cross-multiplication avoids the gcd work that
/// keeping a [`RatFunc`] in lowest terms costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    kind: Kind,
    scale: GaussianRational,
    num: Vec<RingPoly>,
    den: Vec<RingPoly>,
}

impl Factored {
    pub fn constant(kind: Kind, c: GaussianRational) -> Self {
        Factored {
            kind,
            scale: c,
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    pub fn from_ratfunc(f: &RatFunc) -> Self {
        Factored {
            kind: f.kind(),
            scale: GaussianRational::one(),
            num: vec![f.num.clone()],
            den: vec![f.den.clone()],
        }
    }

    /// `num / den` as a new factor pair.
    pub fn ratio(num: RingPoly, den: RingPoly) -> Result<Self> {
        if num.kind() != den.kind() {
            return Err(Error::KindMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Factored {
            kind: num.kind(),
            scale: GaussianRational::one(),
            num: vec![num],
            den: vec![den],
        })
    }

    pub fn mul(mut self, other: Factored) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        self.scale = &self.scale * &other.scale;
        self.num.extend(other.num);
        self.den.extend(other.den);
        Ok(self)
    }

    pub fn scale(mut self, c: &GaussianRational) -> Self {
        self.scale = &self.scale * c;
        self
    }

    pub fn star(&self) -> Self {
        Factored {
            kind: self.kind,
            scale: self.scale.conj(),
            num: self.num.iter().map(RingPoly::star).collect(),
            den: self.den.iter().map(RingPoly::star).collect(),
        }
    }

    pub fn shift(&self, c: HalfInt, qbase: Option<&QBase>) -> Result<Self> {
        let sh = |v: &[RingPoly]| -> Result<Vec<RingPoly>> {
            v.iter().map(|p| p.shift_substitute(c, qbase)).collect()
        };
        Ok(Factored {
            kind: self.kind,
            scale: self.scale.clone(),
            num: sh(&self.num)?,
            den: sh(&self.den)?,
        })
    }

    fn product(&self, polys: &[RingPoly]) -> RingPoly {
        polys
            .iter()
            .fold(RingPoly::one(self.kind), |acc, p| &acc * p)
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn equals(&self, other: &Factored) -> Result<bool> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let l = (&self.product(&self.num) * &other.product(&other.den)).scale(&self.scale);
        let r = (&other.product(&other.num) * &self.product(&self.den)).scale(&other.scale);
        Ok(l == r)
    }

    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        Ok(RatFunc::new(self.product(&self.num), self.product(&self.den))?.scale(&self.scale))
    }
}

/// Operation selector for [`ratfunc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
    Star,
}

/// Checked arithmetic on rational functions; `Star` ignores `g`.
pub fn ratfunc_arith(f: &RatFunc, g: &RatFunc, op: RatOp) -> Result<RatFunc> {
    match op {
        RatOp::Add => f.add(g),
        RatOp::Sub => f.sub(g),
        RatOp::Mul => f.mul(g),
        RatOp::Div => f.div(g),
        RatOp::Star => Ok(f.star()),
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.coeff(0).is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{{{}}}", self.kind(), self)
    }
}
