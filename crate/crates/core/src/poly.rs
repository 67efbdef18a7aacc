//! Dense polynomials in `x` and Laurent polynomials in `z = e^{ix}` over the
//! Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, QBase};
use crate::error::{Error, Result};

/// Which ring a polynomial lives in.
///
/// `Additive` is `ℚ(i)[x]` with imaginary shifts `x ↦ x + ic`;
/// `Multiplicative` is `ℚ(i)[z, z⁻¹]` with `z = e^{ix}`, where the same shift
/// acts as `z ↦ q^{-c} z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Additive,
    Multiplicative,
}

/// A half-integer `c`, stored as `2c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub fn twice(self) -> i64 {
        self.0
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

/// `Σ coeffs[k]·v^{low+k}`, with `coeffs` trimmed so its first and last
/// entries are nonzero. The zero polynomial has no coefficients and `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPoly {
    kind: Kind,
    low: i64,
    coeffs: Vec<GaussianRational>,
}

impl RingPoly {
    pub fn zero(kind: Kind) -> Self {
        RingPoly {
            kind,
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(kind: Kind, c: GaussianRational) -> Self {
        Self::monomial(kind, c, 0)
    }

    pub fn one(kind: Kind) -> Self {
        Self::constant(kind, GaussianRational::one())
    }

    /// `c·v^deg`. Panics on a negative degree for the additive kind.
    pub fn monomial(kind: Kind, c: GaussianRational, deg: i64) -> Self {
        assert!(
            kind == Kind::Multiplicative || deg >= 0,
            "negative degree in an additive polynomial"
        );
        if c.is_zero() {
            return Self::zero(kind);
        }
        RingPoly {
            kind,
            low: deg,
            coeffs: vec![c],
        }
    }

    /// The ring variable (`x` or `z`).
    pub fn var(kind: Kind) -> Self {
        Self::monomial(kind, GaussianRational::one(), 1)
    }

    pub fn from_coeffs(kind: Kind, low: i64, coeffs: Vec<GaussianRational>) -> Result<Self> {
        let p = Self::raw(kind, low, coeffs);
        if kind == Kind::Additive && p.low < 0 && !p.is_zero() {
            return Err(Error::InvalidParameter(
                "additive polynomial with negative degree".into(),
            ));
        }
        Ok(p)
    }

    fn raw(kind: Kind, mut low: i64, mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            low += lead_zeros as i64;
        }
        if coeffs.is_empty() {
            low = 0;
        }
        RingPoly { kind, low, coeffs }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> GaussianRational {
        let idx = k - self.low;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            GaussianRational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// `(exponent, coefficient)` pairs with nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    /// Dense coefficients from the lowest exponent upward.
    pub(crate) fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    fn check_kind(&self, other: &RingPoly) -> Result<()> {
        if self.kind != other.kind {
            Err(Error::KindMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_kind(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn try_sub(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_kind(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn try_mul(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_kind(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &RingPoly, negate: bool) -> RingPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let low = self.low.min(other.low);
        let high = self.degree().unwrap().max(other.degree().unwrap());
        let mut out = vec![GaussianRational::zero(); (high - low + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[(self.low - low) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            let slot = &mut out[(other.low - low) as usize + k];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        RingPoly::raw(self.kind, low, out)
    }

    fn mul_unchecked(&self, other: &RingPoly) -> RingPoly {
        if self.is_zero() || other.is_zero() {
            return RingPoly::zero(self.kind);
        }
        let out = crate::intpoly::mul(&self.coeffs, &other.coeffs);
        RingPoly::raw(self.kind, self.low + other.low, out)
    }

    pub fn scale(&self, c: &GaussianRational) -> RingPoly {
        if c.is_zero() {
            return RingPoly::zero(self.kind);
        }
        RingPoly {
            kind: self.kind,
            low: self.low,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> RingPoly {
        self.scale(&GaussianRational::real(r.clone()))
    }

    pub fn pow(&self, e: u32) -> RingPoly {
        let mut acc = RingPoly::one(self.kind);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiply by `v^k` (Laurent shift of exponents).
    pub fn mul_var_pow(&self, k: i64) -> RingPoly {
        if self.is_zero() {
            return self.clone();
        }
        let out = RingPoly {
            kind: self.kind,
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        };
        assert!(
            out.kind == Kind::Multiplicative || out.low >= 0,
            "negative degree in an additive polynomial"
        );
        out
    }

    /// Realizes `x ↦ x + i·c·γ`.
    ///
    /// Additive kind (`γ = 1`): exact Taylor shift by `i·c`.
    /// Multiplicative kind (`γ = log q`): `z ↦ q^{-c}·z`, i.e. the coefficient
    /// of `z^k` is multiplied by `s^{-4ck}`.
    pub fn shift_substitute(&self, c: HalfInt, qbase: Option<&QBase>) -> Result<RingPoly> {
        match self.kind {
            Kind::Additive => Ok(self.taylor_shift(c)),
            Kind::Multiplicative => {
                let qb = qbase.ok_or(Error::MissingQBase)?;
                if c == HalfInt::ZERO || self.is_zero() {
                    return Ok(self.clone());
                }
                let coeffs = self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, a)| {
                        let e = self.low + k as i64;
                        a.scale(&qb.quarter_pow(-2 * c.twice() * e))
                    })
                    .collect();
                Ok(RingPoly::raw(self.kind, self.low, coeffs))
            }
        }
    }

    fn taylor_shift(&self, c: HalfInt) -> RingPoly {
        if c == HalfInt::ZERO || self.is_zero() {
            return self.clone();
        }
        let h = GaussianRational::new(BigRational::zero(), crate::arith::rat(c.twice(), 2));
        // full dense vector from degree 0
        let mut a: Vec<GaussianRational> = vec![GaussianRational::zero(); self.low as usize];
        a.extend(self.coeffs.iter().cloned());
        let n = a.len();
        // synthetic division: repeatedly fold by (x + h)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * &h;
                a[j] += &t;
            }
        }
        RingPoly::raw(self.kind, 0, a)
    }

    /// The `*`-operation `f*(x) = f(x*)*`.
    ///
    /// Additive: conjugate coefficients. Multiplicative: conjugate
    /// coefficients and send `z^k ↦ z^{-k}`.
    pub fn star(&self) -> RingPoly {
        match self.kind {
            Kind::Additive => RingPoly {
                kind: self.kind,
                low: self.low,
                coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            },
            Kind::Multiplicative => {
                if self.is_zero() {
                    return self.clone();
                }
                let high = self.degree().unwrap();
                RingPoly {
                    kind: self.kind,
                    low: -high,
                    coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
                }
            }
        }
    }

    /// Exact quotient `p / d`; fails with the remainder if `d ∤ p`.
    pub fn exact_div(&self, d: &RingPoly) -> Result<RingPoly> {
        self.check_kind(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let qlow = self.low - d.low;
        if !(self.kind == Kind::Additive && qlow < 0) {
            if let Some(q) = crate::intpoly::exact_quotient(&self.coeffs, &d.coeffs) {
                return Ok(RingPoly::raw(self.kind, qlow, q));
            }
        }
        let (q, r) = div_rem_vec(&self.coeffs, &d.coeffs)?;
        if r.iter().any(|c| !c.is_zero()) || (self.kind == Kind::Additive && qlow < 0) {
            let rem = RingPoly::raw(self.kind, self.low, r);
            return Err(Error::NotDivisible {
                remainder: rem.to_string(),
            });
        }
        Ok(RingPoly::raw(self.kind, qlow, q))
    }

    /// Value at a point of the ring variable (`z` must be nonzero when
    /// negative exponents are present).
    pub fn eval(&self, v: &GaussianRational) -> Result<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * v) + c;
        }
        Ok(&acc * &v.pow(self.low)?)
    }

    /// Monic greatest common divisor, treating monomials as units in the
    /// Laurent ring. For the additive kind the common power of `x` is kept.
    pub fn gcd(&self, other: &RingPoly) -> Result<RingPoly> {
        self.check_kind(other)?;
        if self.is_zero() {
            return Ok(other.monic());
        }
        if other.is_zero() {
            return Ok(self.monic());
        }
        let g = gcd_vec(&self.coeffs, &other.coeffs);
        let low = match self.kind {
            Kind::Additive => self.low.min(other.low),
            Kind::Multiplicative => 0,
        };
        Ok(RingPoly::raw(self.kind, low, g))
    }

    pub fn monic(&self) -> RingPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Drop the monomial factor: returns `(low, p̃)` with `p = v^low · p̃` and
    /// `p̃(0) ≠ 0`.
    pub(crate) fn split_monomial(&self) -> (i64, RingPoly) {
        (
            self.low,
            RingPoly {
                kind: self.kind,
                low: 0,
                coeffs: self.coeffs.clone(),
            },
        )
    }
}

/// Ordinary polynomial long division on dense coefficient vectors (index =
/// exponent). Returns `(quotient, remainder)`.
fn div_rem_vec(
    p: &[GaussianRational],
    d: &[GaussianRational],
) -> Result<(Vec<GaussianRational>, Vec<GaussianRational>)> {
    let lc_inv = d.last().ok_or(Error::DivisionByZero)?.inv()?;
    if p.len() < d.len() {
        return Ok((Vec::new(), p.to_vec()));
    }
    let mut r = p.to_vec();
    let qlen = p.len() - d.len() + 1;
    let mut q = vec![GaussianRational::zero(); qlen];
    for i in (0..qlen).rev() {
        let top = &r[i + d.len() - 1];
        if top.is_zero() {
            continue;
        }
        let t = top * &lc_inv;
        for (j, dc) in d.iter().enumerate() {
            let sub = &t * dc;
            r[i + j] -= &sub;
        }
        q[i] = t;
    }
    r.truncate(d.len() - 1);
    Ok((q, r))
}

fn trim(v: &mut Vec<GaussianRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn make_monic(v: &mut [GaussianRational]) {
    if let Some(lc) = v.last() {
        let inv = lc.inv().expect("trimmed vector has nonzero leading coefficient");
        for c in v.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

fn gcd_vec(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    // a cheap modular test settles the coprime case without coefficient growth
    if crate::modular::coprime_mod_p(&a, &b) {
        return vec![GaussianRational::one()];
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    make_monic(&mut a);
    make_monic(&mut b);
    while !b.is_empty() {
        let (_, mut r) = div_rem_vec(&a, &b).expect("nonzero divisor");
        trim(&mut r);
        make_monic(&mut r);
        a = b;
        b = r;
    }
    make_monic(&mut a);
    a
}

impl Add for &RingPoly {
    type Output = RingPoly;
    fn add(self, rhs: &RingPoly) -> RingPoly {
        self.try_add(rhs).expect("polynomial kinds must match")
    }
}

impl Sub for &RingPoly {
    type Output = RingPoly;
    fn sub(self, rhs: &RingPoly) -> RingPoly {
        self.try_sub(rhs).expect("polynomial kinds must match")
    }
}

impl Mul for &RingPoly {
    type Output = RingPoly;
    fn mul(self, rhs: &RingPoly) -> RingPoly {
        self.try_mul(rhs).expect("polynomial kinds must match")
    }
}

impl Neg for &RingPoly {
    type Output = RingPoly;
    fn neg(self) -> RingPoly {
        RingPoly {
            kind: self.kind,
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let var = match self.kind {
            Kind::Additive => "x",
            Kind::Multiplicative => "z",
        };
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}){var}")?,
                _ => write!(f, "({c}){var}^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.kind, self)
    }
}

/// Arithmetic selector for [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Scale(GaussianRational),
}

/// Checked ring arithmetic; `Scale` ignores the second operand.
pub fn poly_arith(p: &RingPoly, q: &RingPoly, op: PolyOp) -> Result<RingPoly> {
    match op {
        PolyOp::Add => p.try_add(q),
        PolyOp::Sub => p.try_sub(q),
        PolyOp::Mul => p.try_mul(q),
        PolyOp::Scale(c) => Ok(p.scale(&c)),
    }
}
