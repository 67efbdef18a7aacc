//! Seeded draws of generic rational parameter points.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{circle_point, FamilyName, FamilySpec, ParamPoint};
use crate::arith::{fmt_rational, rat, GaussianRational as GQ, QBase};
use crate::error::{Error, Result};
use crate::poly::Kind;

/// Largest `|k|` for which a parameter product `±s^k` counts as resonant.
const RESONANCE_RANGE: i64 = 48;

const ADDITIVE_DENOMS: [i64; 4] = [3, 4, 5, 7];
/// Denominators of the multiplicative parameters; the primes 11 and 13 keep
/// four-parameter draws away from the lattice spanned by the base.
const Q_PARAM_DENOMS: [i64; 5] = [5, 7, 9, 11, 13];
/// Draw attempts before the sampler gives up on a base.
const MAX_DRAWS: usize = 10_000;
const BASE_ROOTS: [(i64, i64); 6] = [(1, 2), (2, 3), (1, 3), (3, 4), (2, 5), (3, 5)];

fn rng_for(spec: &FamilySpec, seed: u64) -> ChaCha8Rng {
    let idx = FamilyName::ALL
        .iter()
        .position(|n| *n == spec.name)
        .expect("registered family") as u64;
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (idx + 1))
}

fn small_positive(rng: &mut ChaCha8Rng) -> BigRational {
    let d = *ADDITIVE_DENOMS.choose(rng).unwrap();
    rat(rng.gen_range(1..=2 * d), d)
}

fn unit_interval(rng: &mut ChaCha8Rng) -> BigRational {
    let d = rng.gen_range(2..=7);
    rat(rng.gen_range(1..d), d)
}

fn q_param(rng: &mut ChaCha8Rng) -> BigRational {
    let d = *Q_PARAM_DENOMS.choose(rng).unwrap();
    rat(rng.gen_range(1..d), d)
}

fn twice_is_integer(r: &BigRational) -> bool {
    (r + r).is_integer()
}

/// No `2a_i`, `2(a_i ± a_j)` or twice a subset sum is an integer.
fn additive_generic(vals: &[BigRational]) -> bool {
    let n = vals.len();
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            if twice_is_integer(&(a - b)) {
                return false;
            }
        }
    }
    (1u32..(1 << n)).all(|mask| {
        let s: BigRational = (0..n)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| vals[k].clone())
            .sum();
        !twice_is_integer(&s)
    })
}

/// `{s^k : |k| ≤ RESONANCE_RANGE}`.
fn resonant_powers(s: &BigRational) -> HashSet<BigRational> {
    let mut out = HashSet::new();
    let mut up = BigRational::one();
    let mut down = BigRational::one();
    for _ in 0..=RESONANCE_RANGE {
        out.insert(up.clone());
        out.insert(down.clone());
        up *= s;
        down /= s;
    }
    out
}

/// `r = ±s^k` for some `|k| ≤ RESONANCE_RANGE`.
#[cfg(test)]
fn is_signed_power(r: &BigRational, s: &BigRational) -> bool {
    resonant_powers(s).contains(&r.abs())
}

/// No ratio of products over disjoint parameter subsets is `±s^k`.
fn multiplicative_generic(vals: &[BigRational], s: &BigRational) -> bool {
    let powers = resonant_powers(s);
    let n = vals.len() as u32;
    let combos = 3u32.pow(n);
    (1..combos).all(|mut code| {
        let mut r = BigRational::one();
        for v in vals {
            match code % 3 {
                1 => r *= v,
                2 => r /= v,
                _ => {}
            }
            code /= 3;
        }
        !powers.contains(&r.abs())
    })
}

fn draw_base(rng: &mut ChaCha8Rng, sbase: Option<&BigRational>) -> Result<QBase> {
    match sbase {
        Some(s) => QBase::new(s.clone()),
        None => {
            let (n, d) = *BASE_ROOTS.choose(rng).unwrap();
            QBase::new(rat(n, d))
        }
    }
}

/// A generic point for `spec`, reproducible from `seed`.
pub fn sample_params(spec: &FamilySpec, seed: u64) -> ParamPoint {
    sample_params_with_base(spec, seed, None).expect("built-in bases are valid")
}

/// As [`sample_params`], with the q-base root `s` (q = s⁴) fixed when given.
pub fn sample_params_with_base(
    spec: &FamilySpec,
    seed: u64,
    sbase: Option<&BigRational>,
) -> Result<ParamPoint> {
    let mut rng = rng_for(spec, seed);
    let mut point = ParamPoint {
        family: spec.name,
        values: Vec::new(),
        qbase: None,
        base_inverted: false,
        mp_circle: None,
        generic: true,
    };
    if spec.kind == Kind::Multiplicative {
        point.qbase = Some(draw_base(&mut rng, sbase)?);
    }
    let reals: Vec<BigRational> = match spec.name {
        FamilyName::W | FamilyName::CdH | FamilyName::CH => loop {
            let v: Vec<_> = (0..spec.n_params).map(|_| small_positive(&mut rng)).collect();
            // cH: a_3, a_4 are the conjugates, equal to a_1, a_2 for real draws
            let sum: BigRational = v.iter().sum();
            if additive_generic(&v) && !twice_is_integer(&(&sum + &sum)) {
                break v;
            }
        },
        FamilyName::MP => {
            let a = loop {
                let a = small_positive(&mut rng);
                if !twice_is_integer(&a) {
                    break a;
                }
            };
            let t = unit_interval(&mut rng);
            let w = circle_point(&t);
            point.mp_circle = Some(t);
            point.values = vec![GQ::real(a), w];
            return Ok(point);
        }
        FamilyName::CqJ => {
            let alpha = rat(2 * rng.gen_range(0..3) + 1, 2);
            let beta = BigRational::from_integer(BigInt::from(rng.gen_range(0..3)));
            vec![alpha, beta]
        }
        FamilyName::CqL => vec![rat(2 * rng.gen_range(0..4) + 1, 2)],
        FamilyName::CqH => Vec::new(),
        FamilyName::AW | FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH => {
            let s = point.qbase.as_ref().unwrap().s().clone();
            let mut found = None;
            for _ in 0..MAX_DRAWS {
                let v: Vec<_> = (0..spec.n_params).map(|_| q_param(&mut rng)).collect();
                if multiplicative_generic(&v, &s) {
                    found = Some(v);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "no generic parameters found for base s = {}",
                    fmt_rational(&s)
                ))
            })?
        }
    };
    point.values = reals.into_iter().map(GQ::real).collect();
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_detection() {
        let s = rat(1, 2);
        assert!(is_signed_power(&rat(1, 16), &s));
        assert!(is_signed_power(&rat(-8, 1), &s));
        assert!(!is_signed_power(&rat(1, 3), &s));
        assert!(!multiplicative_generic(&[rat(1, 3), rat(2, 3)], &s));
        assert!(multiplicative_generic(&[rat(1, 3), rat(3, 5)], &s));
    }

    #[test]
    fn additive_policy() {
        assert!(!additive_generic(&[rat(1, 3), rat(4, 3)]));
        assert!(!additive_generic(&[rat(1, 4), rat(1, 4)]));
        assert!(additive_generic(&[rat(1, 3), rat(2, 5)]));
    }
}
