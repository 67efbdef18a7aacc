//! Determinants of square matrices with ring-polynomial entries.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::intpoly::GaussIntPoly;
use crate::poly::{Kind, RingPoly};

/// Sizes below this use cofactor expansion; larger ones use fraction-free
/// elimination over the Gaussian integers.
pub const COFACTOR_LIMIT: usize = 4;

fn check_square(m: &[Vec<RingPoly>], kind: Kind) -> Result<()> {
    for row in m {
        if row.len() != m.len() {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        if row.iter().any(|e| e.kind() != kind) {
            return Err(Error::KindMismatch);
        }
    }
    Ok(())
}

/// Determinant with the default strategy.
pub fn determinant(m: &[Vec<RingPoly>], kind: Kind) -> Result<RingPoly> {
    if m.len() < COFACTOR_LIMIT {
        determinant_cofactor(m, kind)
    } else {
        determinant_integral(m, kind)
    }
}

/// Laplace expansion along the first row.
pub fn determinant_cofactor(m: &[Vec<RingPoly>], kind: Kind) -> Result<RingPoly> {
    check_square(m, kind)?;
    let cols: Vec<usize> = (0..m.len()).collect();
    Ok(cofactor(m, 0, &cols, kind))
}

fn cofactor(m: &[Vec<RingPoly>], row: usize, cols: &[usize], kind: Kind) -> RingPoly {
    match cols.len() {
        0 => RingPoly::one(kind),
        1 => m[row][cols[0]].clone(),
        2 => {
            let a = &m[row][cols[0]] * &m[row + 1][cols[1]];
            let b = &m[row][cols[1]] * &m[row + 1][cols[0]];
            &a - &b
        }
        _ => {
            let mut acc = RingPoly::zero(kind);
            for (k, &c) in cols.iter().enumerate() {
                let e = &m[row][c];
                if e.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&j| j != c).collect();
                let term = e * &cofactor(m, row + 1, &rest, kind);
                acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Fraction-free (Bareiss) elimination with row pivoting. Every division is
/// exact in the polynomial ring.
pub fn determinant_bareiss(m: &[Vec<RingPoly>], kind: Kind) -> Result<RingPoly> {
    check_square(m, kind)?;
    let n = m.len();
    if n == 0 {
        return Ok(RingPoly::one(kind));
    }
    let mut a: Vec<Vec<RingPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = RingPoly::one(kind);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(RingPoly::zero(kind)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = t.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Bareiss elimination after clearing each row's denominators, so every
/// step runs in `ℤ[i][z, z⁻¹]`; the row scales are divided out at the end.
pub fn determinant_integral(m: &[Vec<RingPoly>], kind: Kind) -> Result<RingPoly> {
    check_square(m, kind)?;
    let n = m.len();
    if n == 0 {
        return Ok(RingPoly::one(kind));
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<GaussIntPoly>> = m
        .iter()
        .map(|row| {
            let mut den = BigInt::one();
            for e in row {
                den = num_integer::Integer::lcm(&den, &GaussIntPoly::common_den(e.coeffs()));
            }
            scale *= &den;
            row.iter()
                .map(|e| GaussIntPoly::lift(e.low_degree().unwrap_or(0), e.coeffs(), &den))
                .collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = GaussIntPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(RingPoly::zero(kind)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.exact_div(&prev).ok_or_else(|| Error::NotDivisible {
                    remainder: "Bareiss step over the Gaussian integers".into(),
                })?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = if negate { a[n - 1][n - 1].neg() } else { a[n - 1][n - 1].clone() };
    let (low, coeffs) = d.to_coeffs(&scale);
    RingPoly::from_coeffs(kind, low, coeffs)
}
