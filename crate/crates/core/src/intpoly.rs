//! Coefficient kernels over a common denominator.
//!
//! Products and exact quotients of polynomials with large rational
//! coefficients spend nearly all their time in per-term gcd normalization.
//! Lifting a coefficient vector to Gaussian integers over one denominator
//! lets the quadratic inner loops run on plain integers; the result is
//! normalized once per output coefficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::GaussianRational;

/// `coeff_k = (re_k + i·im_k) / den`; `im` is `None` when every coefficient
/// is real.
pub(crate) struct IntForm {
    den: BigInt,
    re: Vec<BigInt>,
    im: Option<Vec<BigInt>>,
}

impl IntForm {
    pub(crate) fn new(cs: &[GaussianRational]) -> Self {
        let real = cs.iter().all(|c| c.is_real());
        let mut den = BigInt::one();
        for c in cs {
            if !c.re.denom().is_one() {
                den = den.lcm(c.re.denom());
            }
            if !real && !c.im.denom().is_one() {
                den = den.lcm(c.im.denom());
            }
        }
        let lift = |r: &BigRational| {
            if r.denom() == &den {
                r.numer().clone()
            } else {
                r.numer() * (&den / r.denom())
            }
        };
        let re = cs.iter().map(|c| lift(&c.re)).collect();
        let im = (!real).then(|| cs.iter().map(|c| lift(&c.im)).collect());
        IntForm { den, re, im }
    }

    fn im_or_zero(&self) -> Vec<BigInt> {
        self.im
            .clone()
            .unwrap_or_else(|| vec![BigInt::zero(); self.re.len()])
    }
}

fn rebuild(re: Vec<BigInt>, im: Option<Vec<BigInt>>, den: &BigInt) -> Vec<GaussianRational> {
    match im {
        None => re
            .into_iter()
            .map(|r| GaussianRational::real(BigRational::new(r, den.clone())))
            .collect(),
        Some(im) => re
            .into_iter()
            .zip(im)
            .map(|(r, i)| {
                GaussianRational::new(
                    BigRational::new(r, den.clone()),
                    BigRational::new(i, den.clone()),
                )
            })
            .collect(),
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn sub_vec(mut a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
    a
}

fn add_vec(mut a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Dense product of two nonempty coefficient vectors.
pub(crate) fn mul(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let (a, b) = (IntForm::new(a), IntForm::new(b));
    let den = &a.den * &b.den;
    let re0 = convolve(&a.re, &b.re);
    let (re, im) = match (&a.im, &b.im) {
        (None, None) => (re0, None),
        (Some(ai), None) => (re0, Some(convolve(ai, &b.re))),
        (None, Some(bi)) => (re0, Some(convolve(&a.re, bi))),
        (Some(ai), Some(bi)) => (
            sub_vec(re0, convolve(ai, bi)),
            Some(add_vec(convolve(&a.re, bi), convolve(ai, &b.re))),
        ),
    };
    rebuild(re, im, &den)
}

/// Quotient `p / d` when the division leaves no remainder; `None` otherwise.
/// Both vectors must be nonempty with nonzero leading entries.
pub(crate) fn exact_quotient(
    p: &[GaussianRational],
    d: &[GaussianRational],
) -> Option<Vec<GaussianRational>> {
    if p.len() < d.len() {
        return None;
    }
    let pf = IntForm::new(p);
    let df = IntForm::new(d);
    let (mut pr, mut pi) = (pf.re.clone(), pf.im_or_zero());
    let (mut dr, mut di) = (df.re.clone(), df.im_or_zero());
    let dl = dr.len();
    // Make the divisor's leading coefficient a rational integer by
    // multiplying both sides by its conjugate.
    let (lr, li) = (dr[dl - 1].clone(), di[dl - 1].clone());
    if !li.is_zero() {
        let conj_mul = |re: &mut Vec<BigInt>, im: &mut Vec<BigInt>| {
            for (a, b) in re.iter_mut().zip(im.iter_mut()) {
                let nr = &*a * &lr + &*b * &li;
                let ni = &*b * &lr - &*a * &li;
                *a = nr;
                *b = ni;
            }
        };
        conj_mul(&mut pr, &mut pi);
        conj_mul(&mut dr, &mut di);
    }
    let lead = dr[dl - 1].clone();
    let qlen = pr.len() - dl + 1;
    let mut qr = vec![BigInt::zero(); qlen];
    let mut qi = vec![BigInt::zero(); qlen];
    // The true remainder is `(pr + i·pi) / scale`.
    let mut scale = BigInt::one();
    for i in (0..qlen).rev() {
        let top = i + dl - 1;
        if pr[top].is_zero() && pi[top].is_zero() {
            continue;
        }
        let g = pr[top].gcd(&pi[top]).gcd(&lead);
        let m = &lead / &g;
        if !m.abs().is_one() {
            for x in pr[..=top].iter_mut().chain(pi[..=top].iter_mut()) {
                *x *= &m;
            }
            for x in qr[i + 1..].iter_mut().chain(qi[i + 1..].iter_mut()) {
                *x *= &m;
            }
            scale *= &m;
        }
        let tr = &pr[top] / &lead;
        let ti = &pi[top] / &lead;
        for j in 0..dl {
            if dr[j].is_zero() && di[j].is_zero() {
                continue;
            }
            let sr = &tr * &dr[j] - &ti * &di[j];
            let si = &tr * &di[j] + &ti * &dr[j];
            pr[i + j] -= sr;
            pi[i + j] -= si;
        }
        qr[i] = tr;
        qi[i] = ti;
    }
    if pr[..dl - 1].iter().chain(&pi[..dl - 1]).any(|x| !x.is_zero()) {
        return None;
    }
    // q = Q / scale · dd / dp
    let den = &scale * &pf.den;
    let num_scale = &df.den;
    let out = qr
        .into_iter()
        .zip(qi)
        .map(|(r, i)| {
            GaussianRational::new(
                BigRational::new(r * num_scale, den.clone()),
                BigRational::new(i * num_scale, den.clone()),
            )
        })
        .collect();
    Some(out)
}

/// A Laurent polynomial with Gaussian-integer coefficients; `im` is `None`
/// when every coefficient is real. Kept trimmed: no zero coefficient at
/// either end, and the zero polynomial has empty vectors.
#[derive(Clone, Debug)]
pub(crate) struct GaussIntPoly {
    low: i64,
    re: Vec<BigInt>,
    im: Option<Vec<BigInt>>,
}

impl GaussIntPoly {
    fn trimmed(mut low: i64, mut re: Vec<BigInt>, mut im: Option<Vec<BigInt>>) -> Self {
        let zero_at = |re: &[BigInt], im: &Option<Vec<BigInt>>, k: usize| {
            re[k].is_zero() && im.as_ref().is_none_or(|v| v[k].is_zero())
        };
        while !re.is_empty() && zero_at(&re, &im, re.len() - 1) {
            re.pop();
            if let Some(v) = im.as_mut() {
                v.pop();
            }
        }
        let lead = (0..re.len()).take_while(|&k| zero_at(&re, &im, k)).count();
        if lead > 0 {
            re.drain(..lead);
            if let Some(v) = im.as_mut() {
                v.drain(..lead);
            }
            low += lead as i64;
        }
        if im.as_ref().is_some_and(|v| v.iter().all(Zero::is_zero)) {
            im = None;
        }
        if re.is_empty() {
            low = 0;
        }
        GaussIntPoly { low, re, im }
    }

    pub(crate) fn one() -> Self {
        GaussIntPoly {
            low: 0,
            re: vec![BigInt::one()],
            im: None,
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_empty()
    }

    /// `scale · p`, which must have Gaussian-integer coefficients.
    pub(crate) fn lift(low: i64, cs: &[GaussianRational], scale: &BigInt) -> Self {
        let int = |r: &BigRational| {
            let v = r * BigRational::from_integer(scale.clone());
            debug_assert!(v.is_integer());
            v.to_integer()
        };
        let re = cs.iter().map(|c| int(&c.re)).collect();
        let im = cs
            .iter()
            .any(|c| !c.is_real())
            .then(|| cs.iter().map(|c| int(&c.im)).collect());
        Self::trimmed(low, re, im)
    }

    /// Least common denominator of a coefficient vector.
    pub(crate) fn common_den(cs: &[GaussianRational]) -> BigInt {
        let mut den = BigInt::one();
        for c in cs {
            for r in [&c.re, &c.im] {
                if !r.denom().is_one() {
                    den = den.lcm(r.denom());
                }
            }
        }
        den
    }

    /// `(low, coefficients / den)`.
    pub(crate) fn to_coeffs(&self, den: &BigInt) -> (i64, Vec<GaussianRational>) {
        (self.low, rebuild(self.re.clone(), self.im.clone(), den))
    }

    pub(crate) fn neg(&self) -> Self {
        GaussIntPoly {
            low: self.low,
            re: self.re.iter().map(|x| -x).collect(),
            im: self.im.as_ref().map(|v| v.iter().map(|x| -x).collect()),
        }
    }

    pub(crate) fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::trimmed(0, vec![], None);
        }
        let re0 = convolve(&self.re, &o.re);
        let (re, im) = match (&self.im, &o.im) {
            (None, None) => (re0, None),
            (Some(ai), None) => (re0, Some(convolve(ai, &o.re))),
            (None, Some(bi)) => (re0, Some(convolve(&self.re, bi))),
            (Some(ai), Some(bi)) => (
                sub_vec(re0, convolve(ai, bi)),
                Some(add_vec(convolve(&self.re, bi), convolve(ai, &o.re))),
            ),
        };
        Self::trimmed(self.low + o.low, re, im)
    }

    pub(crate) fn sub(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.neg();
        }
        let low = self.low.min(o.low);
        let high = (self.low + self.re.len() as i64).max(o.low + o.re.len() as i64);
        let len = (high - low) as usize;
        let complex = self.im.is_some() || o.im.is_some();
        let mut re = vec![BigInt::zero(); len];
        let mut im = complex.then(|| vec![BigInt::zero(); len]);
        for (p, sign) in [(self, false), (o, true)] {
            let off = (p.low - low) as usize;
            for (k, x) in p.re.iter().enumerate() {
                if sign {
                    re[off + k] -= x;
                } else {
                    re[off + k] += x;
                }
            }
            if let (Some(dst), Some(src)) = (im.as_mut(), p.im.as_ref()) {
                for (k, x) in src.iter().enumerate() {
                    if sign {
                        dst[off + k] -= x;
                    } else {
                        dst[off + k] += x;
                    }
                }
            }
        }
        Self::trimmed(low, re, im)
    }

    /// Quotient in `ℤ[i][z, z⁻¹]`; `None` if `d` does not divide `self`
    /// there.
    pub(crate) fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let dl = d.re.len();
        if self.re.len() < dl {
            return None;
        }
        let mut pr = self.re.clone();
        let mut pi = self.im.clone().unwrap_or_else(|| vec![BigInt::zero(); pr.len()]);
        let dr = &d.re;
        let zeros = vec![BigInt::zero(); dl];
        let di = d.im.as_ref().unwrap_or(&zeros);
        let (lr, li) = (&dr[dl - 1], &di[dl - 1]);
        let norm = lr * lr + li * li;
        let qlen = pr.len() - dl + 1;
        let mut qr = vec![BigInt::zero(); qlen];
        let mut qi = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = i + dl - 1;
            if pr[top].is_zero() && pi[top].is_zero() {
                continue;
            }
            // t / lc = t·conj(lc) / |lc|²
            let (nr, nrem) = (&pr[top] * lr + &pi[top] * li).div_rem(&norm);
            let (ni, nirem) = (&pi[top] * lr - &pr[top] * li).div_rem(&norm);
            if !nrem.is_zero() || !nirem.is_zero() {
                return None;
            }
            for j in 0..dl {
                if dr[j].is_zero() && di[j].is_zero() {
                    continue;
                }
                pr[i + j] -= &nr * &dr[j] - &ni * &di[j];
                pi[i + j] -= &nr * &di[j] + &ni * &dr[j];
            }
            qr[i] = nr;
            qi[i] = ni;
        }
        if pr.iter().chain(&pi).any(|x| !x.is_zero()) {
            return None;
        }
        Some(Self::trimmed(self.low - d.low, qr, Some(qi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussianRational {
        GaussianRational::new(rat(a, b), rat(c, d))
    }

    fn schoolbook(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
        let mut out = vec![GaussianRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += &(x * y);
            }
        }
        out
    }

    #[test]
    fn product_and_quotient_round_trip() {
        let a = vec![g(1, 2, 0, 1), g(-3, 7, 2, 5), g(5, 3, 0, 1)];
        let b = vec![g(2, 9, -1, 4), g(0, 1, 0, 1), g(7, 1, 1, 3), g(-1, 6, 0, 1)];
        let real = vec![g(3, 4, 0, 1), g(-2, 5, 0, 1)];
        for (x, y) in [(&a, &b), (&b, &a), (&a, &real), (&real, &real)] {
            let prod = mul(x, y);
            assert_eq!(prod, schoolbook(x, y));
            assert_eq!(exact_quotient(&prod, y).as_ref(), Some(x));
            assert_eq!(exact_quotient(&prod, x).as_ref(), Some(y));
        }
    }

    #[test]
    fn remainder_is_detected() {
        let a = vec![g(1, 1, 0, 1), g(1, 1, 0, 1)];
        let b = vec![g(1, 1, 0, 1), g(0, 1, 0, 1), g(1, 1, 0, 1)];
        assert!(exact_quotient(&b, &a).is_none());
    }
}
