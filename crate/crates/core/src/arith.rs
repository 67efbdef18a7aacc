//! Exact Gaussian-rational arithmetic and (q-)shifted factorials.
//!
//! Every coefficient in the crate is a [`GaussianRational`], `re + im·i` with
//! arbitrary-precision rational parts. Powers of the base `q` are always taken
//! through its fourth root `s` ([`QBase`]), so `q^{m/4}` stays rational.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Build a rational from a small numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// An exact complex number `re + im·i` over the rationals.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::real(rat(num, den))
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`, i.e. `conj(c)·c`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

/// `p/q`, or `p` for integers.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats as `p/q`, `p/qi` or `a/b+c/di`; never uses decimals.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im = fmt_rational(&self.im);
        if self.re.is_zero() {
            return write!(f, "{im}i");
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", fmt_rational(&self.re), im)
        } else {
            write!(f, "{}+{}i", fmt_rational(&self.re), im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse `p`, `p/q` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
    let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(s)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_rational(&body[..k])?;
                let im_str = &body[k..];
                let im_str = im_str.strip_prefix('+').unwrap_or(im_str);
                Ok(GaussianRational::new(re, parse_rational(im_str)?))
            }
            None => {
                let im = match body {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    b => parse_rational(b)?,
                };
                Ok(GaussianRational::new(BigRational::zero(), im))
            }
        }
    }
}

/// The base of the q-families, carried as its fourth root: `q = s⁴`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QBase {
    s: BigRational,
}

impl QBase {
    pub fn new(s: BigRational) -> Result<Self> {
        if !s.is_positive() || s >= BigRational::one() {
            return Err(Error::InvalidParameter(format!(
                "q-base root s must lie in (0,1), got {}",
                fmt_rational(&s)
            )));
        }
        Ok(QBase { s })
    }

    pub fn s(&self) -> &BigRational {
        &self.s
    }

    /// `q^{m/4} = s^m`.
    pub fn quarter_pow(&self, m: i64) -> BigRational {
        rational_pow(&self.s, m)
    }

    pub fn q(&self) -> BigRational {
        self.quarter_pow(4)
    }
}

/// `r^e` for a nonzero rational and any integer exponent.
pub fn rational_pow(r: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Rising factorial `(a)_k = a(a+1)…(a+k−1)`.
pub fn pochhammer(a: &GaussianRational, k: usize) -> GaussianRational {
    let mut acc = GaussianRational::one();
    let mut term = a.clone();
    let one = GaussianRational::one();
    for _ in 0..k {
        acc = &acc * &term;
        term += &one;
    }
    acc
}

/// `(a; p)_k = ∏_{j<k} (1 − a·p^j)` for a rational step `p` (typically a
/// quarter power of q obtained from [`QBase::quarter_pow`]).
pub fn q_pochhammer(a: &GaussianRational, step: &BigRational, k: usize) -> GaussianRational {
    let mut acc = GaussianRational::one();
    let mut term = a.clone();
    let one = GaussianRational::one();
    for _ in 0..k {
        acc = &acc * &(&one - &term);
        term = term.scale(step);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn basic_ops() {
        let a = g((1, 1), (1, 1));
        assert_eq!(&a * &a.conj(), GaussianRational::from_int(2));
        assert_eq!(g((3, 2), (5, 1)).conj(), g((3, 2), (-5, 1)));
        let q = GaussianRational::from_int(2)
            .checked_div(&GaussianRational::from_int(4))
            .unwrap();
        assert_eq!(q, GaussianRational::from_frac(1, 2));
        assert_eq!(
            GaussianRational::one().checked_div(&GaussianRational::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form() {
        let c = GaussianRational::new(
            BigRational::new(BigInt::from(4), BigInt::from(-6)),
            rat(0, 5),
        );
        assert_eq!(c.re.numer(), &BigInt::from(-2));
        assert_eq!(c.re.denom(), &BigInt::from(3));
        assert!(c.is_real());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(
            pochhammer(&GaussianRational::from_int(2), 3),
            GaussianRational::from_int(24)
        );
        assert_eq!(pochhammer(&g((7, 3), (1, 2)), 0), GaussianRational::one());
        assert!(pochhammer(&GaussianRational::from_int(-2), 4).is_zero());
    }

    #[test]
    fn q_pochhammer_examples() {
        let qb = QBase::new(rat(1, 2)).unwrap();
        let q = qb.q();
        let a = g((5, 7), (0, 1));
        assert!(q_pochhammer(&a, &q, 0).is_one());
        assert!(q_pochhammer(&GaussianRational::one(), &q, 3).is_zero());
        let qm2 = GaussianRational::real(qb.quarter_pow(-8));
        assert!(q_pochhammer(&qm2, &q, 3).is_zero());
        // first two factors are nonzero
        assert!(!q_pochhammer(&qm2, &q, 2).is_zero());
    }

    #[test]
    fn display_round_trip() {
        for c in [
            g((3, 2), (0, 1)),
            g((0, 1), (-5, 7)),
            g((-1, 3), (2, 9)),
            g((4, 1), (-1, 1)),
            GaussianRational::zero(),
        ] {
            let s = c.to_string();
            assert!(!s.contains('.'));
            assert_eq!(s.parse::<GaussianRational>().unwrap(), c, "{s}");
        }
        assert_eq!(g((-3, 2), (0, 1)).to_string(), "-3/2");
    }

    #[test]
    fn qbase_rejects_out_of_range() {
        assert!(QBase::new(rat(1, 1)).is_err());
        assert!(QBase::new(rat(0, 1)).is_err());
        assert!(QBase::new(rat(3, 2)).is_err());
    }

    #[test]
    fn integer_powers() {
        let c = g((1, 2), (1, 3));
        let c3 = c.pow(3).unwrap();
        assert_eq!(c3, &(&c * &c) * &c);
        assert_eq!(&c.pow(-2).unwrap() * &c.pow(2).unwrap(), GaussianRational::one());
        assert_eq!(GaussianRational::i_pow(-1), -GaussianRational::i());
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Serialized as the fraction string of `s`.
impl Serialize for QBase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.s))
    }
}

impl<'de> Deserialize<'de> for QBase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .and_then(QBase::new)
            .map_err(de::Error::custom)
    }
}

/// Serde adapter for `Option<BigRational>` as a fraction string.
pub mod opt_rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(
        r: &Option<BigRational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}
