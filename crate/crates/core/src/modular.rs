//! Reduction of Gaussian-rational polynomials modulo a prime `p ≡ 1 (mod 4)`,
//! where `i` maps to a square root of −1. Used as a fast coprimality filter
//! before running Euclid over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::GaussianRational;

const P: u64 = 1_000_000_009;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, P - 2)
}

fn sqrt_minus_one() -> u64 {
    (2..)
        .map(|g| pow_mod(g, (P - 1) / 4))
        .find(|r| mul_mod(*r, *r) == P - 1)
        .expect("p is 1 mod 4")
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("reduced value fits")
}

fn reduce_rat(r: &BigRational) -> Option<u64> {
    let d = reduce_int(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul_mod(reduce_int(r.numer()), inv_mod(d)))
}

fn reduce(c: &GaussianRational, root: u64) -> Option<u64> {
    let re = reduce_rat(&c.re)?;
    let im = reduce_rat(&c.im)?;
    Some((re + mul_mod(im, root)) % P)
}

fn reduce_poly(v: &[GaussianRational], root: u64) -> Option<Vec<u64>> {
    let out: Vec<u64> = v.iter().map(|c| reduce(c, root)).collect::<Option<_>>()?;
    // the leading coefficient must survive so the degree is preserved
    if out.last().is_some_and(|&c| c == 0) {
        return None;
    }
    Some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() {
            let t = mul_mod(*a.last().unwrap(), inv);
            let off = a.len() - b.len();
            for (j, bc) in b.iter().enumerate() {
                a[off + j] = (a[off + j] + P - mul_mod(t, *bc)) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// `true` only when the two dense polynomials are certainly coprime over
/// `ℚ(i)`. A `false` answer is inconclusive.
pub(crate) fn coprime_mod_p(a: &[GaussianRational], b: &[GaussianRational]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let root = sqrt_minus_one();
    let (Some(ra), Some(rb)) = (reduce_poly(a, root), reduce_poly(b, root)) else {
        return false;
    };
    gcd_degree(ra, rb) == 0
}
