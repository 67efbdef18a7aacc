//! Energies, shift-operator factors, twist constants, potentials and the
//! `r_j` factors of each family.

use num_rational::BigRational;
use num_traits::One;

use super::{b1, b4, twist_params, FamilyName, FamilySpec, ParamPoint};
use crate::arith::{rational_pow, GaussianRational as GQ};
use crate::error::Result;
use crate::poly::{Kind, RingPoly};
use crate::ratfunc::RatFunc;

fn int(n: i64) -> GQ {
    GQ::from_int(n)
}

fn real(r: BigRational) -> GQ {
    GQ::real(r)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// cqJ/cqL exponent helpers: `q^{(α+½)/2}` and `q^{(β+½)/2}`.
fn jacobi_roots(p: &ParamPoint) -> Result<(GQ, Option<GQ>)> {
    let h = half();
    let a = real(p.eff_q_pow(&((p.real_value(0) + &h) * &h))?);
    let b = if p.values.len() > 1 {
        Some(real(p.eff_q_pow(&((p.real_value(1) + &h) * &h))?))
    } else {
        None
    };
    Ok((a, b))
}

/// The AW-type parameters `(a_1, …, a_m)` entering the potential and the
/// `r_j` factors.
fn aw_params(spec: &FamilySpec, p: &ParamPoint) -> Result<Vec<GQ>> {
    let sq = || p.eff_quarter_pow(2).map(real);
    Ok(match spec.name {
        FamilyName::CqJ => {
            let (a, b) = jacobi_roots(p)?;
            let b = b.expect("cqJ has two exponents");
            let s2 = sq()?;
            vec![a.clone(), &a * &s2, -&b, -&(&b * &s2)]
        }
        FamilyName::CqL => {
            let (a, _) = jacobi_roots(p)?;
            vec![a.clone(), &a * &sq()?]
        }
        _ => p.values.clone(),
    })
}

/// `E_n(λ)`, for any integer `n`.
pub fn energy(spec: &FamilySpec, n: i64, p: &ParamPoint) -> Result<GQ> {
    let nn = int(n);
    Ok(match spec.name {
        FamilyName::W | FamilyName::CH => &nn * &(&(&nn + &b1(spec, p)) - &int(1)),
        FamilyName::CdH => nn,
        FamilyName::MP => real(BigRational::from_integer((2 * n).into()) * p.mp_sin()),
        FamilyName::AW => {
            let q = p.eff_q()?;
            let a = real(rational_pow(&q, -n) - BigRational::one());
            let b = &int(1) - &(&b4(p) * &real(rational_pow(&q, n - 1)));
            &a * &b
        }
        FamilyName::CqJ => {
            let q = p.eff_q()?;
            let e = BigRational::from_integer(n.into())
                + p.real_value(0)
                + p.real_value(1)
                + BigRational::one();
            let a = rational_pow(&q, -n) - BigRational::one();
            real(a * (BigRational::one() - p.eff_q_pow(&e)?))
        }
        FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH | FamilyName::CqH | FamilyName::CqL => {
            real(rational_pow(&p.eff_q()?, -n) - BigRational::one())
        }
    })
}

/// `(f_n(λ), b_{n−1}(λ))` of the forward and backward shift relations.
pub fn shift_coefficients(spec: &FamilySpec, n: i64, p: &ParamPoint) -> Result<(GQ, GQ)> {
    let nn = int(n);
    Ok(match spec.name {
        FamilyName::W => (-&energy(spec, n, p)?, int(-1)),
        FamilyName::CdH => (-&nn, int(-1)),
        FamilyName::CH => (&(&nn + &b1(spec, p)) - &int(1), nn),
        FamilyName::MP => (real(BigRational::from_integer(2.into()) * p.mp_sin()), nn),
        FamilyName::AW => {
            let qh = real(p.eff_quarter_pow(2 * n)?);
            (&qh * &energy(spec, n, p)?, qh.inv()?)
        }
        FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH | FamilyName::CqH => {
            let qh = real(p.eff_quarter_pow(2 * n)?);
            (&qh * &energy(spec, n, p)?, qh.inv()?)
        }
        FamilyName::CqJ => {
            let h = half();
            let (al, be) = (p.real_value(0), p.real_value(1));
            let one = BigRational::one();
            let c = real(p.eff_q_pow(&((al + &h + &one) * &h))?);
            let d1 = &int(1) + &real(p.eff_q_pow(&((al + be + &one) * &h))?);
            let d2 = &int(1) + &real(p.eff_q_pow(&((al + be + &one + &one) * &h))?);
            let q_minus_n = real(rational_pow(&p.eff_q()?, -n));
            let e = BigRational::from_integer(n.into()) + al + be + &one;
            let t = &int(1) - &real(p.eff_q_pow(&e)?);
            let f = (&(&c * &q_minus_n) * &t).checked_div(&(&d1 * &d2))?;
            let q_n = real(rational_pow(&p.eff_q()?, n));
            let b = &(&(&c.inv()? * &q_n) * &(&q_minus_n - &int(1))) * &(&d1 * &d2);
            (f, b)
        }
        FamilyName::CqL => {
            let h = half();
            let one = BigRational::one();
            let c = real(p.eff_q_pow(&((p.real_value(0) + &h + &one) * &h))?);
            let q_minus_n = real(rational_pow(&p.eff_q()?, -n));
            let q_n = real(rational_pow(&p.eff_q()?, n));
            (
                &c * &q_minus_n,
                &(&c.inv()? * &q_n) * &(&q_minus_n - &int(1)),
            )
        }
    })
}

/// `(α(λ), α′(λ))` from the literal tables.
pub fn twist_constants(spec: &FamilySpec, p: &ParamPoint) -> Result<(GQ, GQ)> {
    Ok(match spec.name {
        FamilyName::W => (int(1), -&(&b1(spec, p) - &int(2))),
        FamilyName::AW => {
            let q = real(p.eff_q()?);
            let a = b4(p).checked_div(&(&q * &q))?;
            (a.clone(), -&(&(&int(1) - &q) * &(&int(1) - &a)))
        }
        FamilyName::CdH => (int(-1), int(-1)),
        FamilyName::CH => (int(1), &int(2) - &b1(spec, p)),
        FamilyName::MP => (
            int(-1),
            real(BigRational::from_integer((-2).into()) * p.mp_sin()),
        ),
        FamilyName::CqJ => {
            let q = real(p.eff_q()?);
            let a = real(p.eff_q_pow(&(p.real_value(0) + p.real_value(1)))?);
            (a.clone(), &(&q - &int(1)) * &(&int(1) - &a))
        }
        FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH | FamilyName::CqH | FamilyName::CqL => {
            let q = real(p.eff_q()?);
            (q.clone(), &q - &int(1))
        }
    })
}

fn lin_x(c: GQ, x_coeff: GQ) -> RingPoly {
    let k = Kind::Additive;
    &RingPoly::constant(k, c) + &RingPoly::monomial(k, x_coeff, 1)
}

/// `1 − c·z^e`.
fn one_minus(c: &GQ, e: i64) -> RingPoly {
    let k = Kind::Multiplicative;
    &RingPoly::one(k) - &RingPoly::monomial(k, c.clone(), e)
}

/// `V(x; λ)` at the point's own parameters and effective base.
fn base_potential(spec: &FamilySpec, p: &ParamPoint) -> Result<RatFunc> {
    let i = GQ::i();
    match spec.name {
        FamilyName::W | FamilyName::CdH => {
            let mut num = RingPoly::one(Kind::Additive);
            for a in &p.values {
                num = &num * &lin_x(a.clone(), i.clone());
            }
            // 2ix(2ix + 1)
            let two_i = &i * &int(2);
            let den = &lin_x(GQ::zero(), two_i.clone()) * &lin_x(int(1), two_i);
            RatFunc::new(num, den)
        }
        FamilyName::CH => {
            let mut num = RingPoly::one(Kind::Additive);
            for a in &p.values {
                num = &num * &lin_x(a.clone(), i.clone());
            }
            Ok(RatFunc::from_poly(num))
        }
        FamilyName::MP => {
            let c = &i * &p.values[1].conj();
            Ok(RatFunc::from_poly(lin_x(p.values[0].clone(), i).scale(&c)))
        }
        _ => {
            let mut num = RingPoly::one(Kind::Multiplicative);
            for a in aw_params(spec, p)? {
                num = &num * &one_minus(&a, 1);
            }
            let q = real(p.eff_q()?);
            let den = &one_minus(&int(1), 2) * &one_minus(&q, 2);
            RatFunc::new(num, den)
        }
    }
}

/// `V(x; λ)`, or the twisted `V′(x; λ)` when `twisted` is set.
///
/// `V′(x; λ) = V(x; 𝔱(λ))`; for Group (B) it is `V*(x; 𝔱(λ), q⁻¹)`.
pub fn potential(spec: &FamilySpec, p: &ParamPoint, twisted: bool) -> Result<RatFunc> {
    if !twisted {
        return base_potential(spec, p);
    }
    let t = twist_params(spec, p)?;
    let v = base_potential(spec, &t)?;
    Ok(if spec.inverts_base { v.star() } else { v })
}

/// `(c + s·ix)_m` as a polynomial in `x`.
fn rising_x(c: &GQ, sign: i64, m: usize) -> RingPoly {
    let mut acc = RingPoly::one(Kind::Additive);
    for l in 0..m {
        acc = &acc * &lin_x(c + &int(l as i64), &GQ::i() * &int(sign));
    }
    acc
}

/// `(c z^e; step)_m` as a Laurent polynomial.
fn q_rising_z(c: &GQ, e: i64, step: &BigRational, m: usize) -> RingPoly {
    let mut acc = RingPoly::one(Kind::Multiplicative);
    let mut cl = c.clone();
    for _ in 0..m {
        acc = &acc * &one_minus(&cl, e);
        cl = cl.scale(step);
    }
    acc
}

/// `r_j(x; λ, M+1)` as a polynomial in the unshifted variable, `1 ≤ j ≤ M+1`.
///
/// The overall constant is fixed so that the product has unit prefactor at
/// `j = (M+2)/2`; only the relative normalization between rows matters.
pub fn r_factor(spec: &FamilySpec, j: usize, m: usize, p: &ParamPoint) -> Result<RingPoly> {
    assert!(j >= 1 && j <= m + 1, "r_j index out of range");
    let lo = j - 1;
    let hi = m + 1 - j;
    let half_m = GQ::from_frac(m as i64, 2);
    match spec.name {
        FamilyName::W | FamilyName::CdH => {
            let mut acc = RingPoly::one(Kind::Additive);
            for a in &p.values {
                let c = a - &half_m;
                acc = &(&acc * &rising_x(&c, 1, lo)) * &rising_x(&c, -1, hi);
            }
            Ok(acc)
        }
        FamilyName::CH => {
            let mut acc = RingPoly::one(Kind::Additive);
            for a in &p.values {
                acc = &(&acc * &rising_x(&(a - &half_m), 1, lo))
                    * &rising_x(&(&a.conj() - &half_m), -1, hi);
            }
            Ok(acc)
        }
        FamilyName::MP => {
            let c = &p.values[0] - &half_m;
            let phase = (&-GQ::i() * &p.values[1]).pow(m as i64 + 2 - 2 * j as i64)?;
            Ok((&rising_x(&c, 1, lo) * &rising_x(&c, -1, hi)).scale(&phase))
        }
        _ => {
            let mono = RingPoly::monomial(
                Kind::Multiplicative,
                GQ::one(),
                2 * (m as i64 + 2 - 2 * j as i64),
            );
            let q_m2 = real(p.eff_quarter_pow(-2 * m as i64)?);
            // The theta-function quasi-periodicity inside ν(x_j)/ν(x) leaves a
            // j-dependent constant q^{−(M+2−2j)²/2} that the bare product
            // omits; it matters once M ≥ 2.
            let t = m as i64 + 2 - 2 * j as i64;
            let mut acc = mono.scale_rational(&p.eff_quarter_pow(-2 * t * t)?);
            match spec.name {
                FamilyName::CqJ | FamilyName::CqL => {
                    let (a, b) = jacobi_roots(p)?;
                    let step = p.eff_quarter_pow(2)?;
                    let mut roots = vec![&a * &q_m2];
                    if let Some(b) = b {
                        roots.push(-&(&b * &q_m2));
                    }
                    for r in roots {
                        acc = &(&acc * &q_rising_z(&r, 1, &step, 2 * lo))
                            * &q_rising_z(&r, -1, &step, 2 * hi);
                    }
                }
                _ => {
                    let q = p.eff_q()?;
                    for a in &p.values {
                        let r = a * &q_m2;
                        acc = &(&acc * &q_rising_z(&r, 1, &q, lo)) * &q_rising_z(&r, -1, &q, hi);
                    }
                }
            }
            Ok(acc)
        }
    }
}
