//! Polynomials in the sinusoidal coordinate `η(x)` and their conversion to and
//! from the `x`/`z` rings.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::GaussianRational;
use crate::error::{Error, Result};
use crate::poly::{Kind, RingPoly};

/// Which sinusoidal coordinate a family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EtaKind {
    /// `η = x²`
    XSquared,
    /// `η = x`
    X,
    /// `η = cos x = (z + z⁻¹)/2`
    CosX,
}

impl EtaKind {
    pub fn ring_kind(self) -> Kind {
        match self {
            EtaKind::XSquared | EtaKind::X => Kind::Additive,
            EtaKind::CosX => Kind::Multiplicative,
        }
    }

    /// `η(x)` as an element of the family's ring.
    pub fn eta_in_ring(self) -> RingPoly {
        match self {
            EtaKind::XSquared => RingPoly::var(Kind::Additive).pow(2),
            EtaKind::X => RingPoly::var(Kind::Additive),
            EtaKind::CosX => {
                let half = GaussianRational::from_frac(1, 2);
                let z = RingPoly::monomial(Kind::Multiplicative, half.clone(), 1);
                let zi = RingPoly::monomial(Kind::Multiplicative, half, -1);
                &z + &zi
            }
        }
    }
}

/// `Σ coeffs[k]·η^k`, trimmed so the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EtaPoly {
    kind: EtaKind,
    coeffs: Vec<GaussianRational>,
}

impl EtaPoly {
    pub fn new(kind: EtaKind, mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        EtaPoly { kind, coeffs }
    }

    pub fn zero(kind: EtaKind) -> Self {
        EtaPoly {
            kind,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(kind: EtaKind, c: GaussianRational) -> Self {
        Self::new(kind, vec![c])
    }

    pub fn one(kind: EtaKind) -> Self {
        Self::constant(kind, GaussianRational::one())
    }

    /// The coordinate `η` itself.
    pub fn eta(kind: EtaKind) -> Self {
        Self::new(kind, vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// `a + b·η`.
    pub fn linear(kind: EtaKind, a: GaussianRational, b: GaussianRational) -> Self {
        Self::new(kind, vec![a, b])
    }

    pub fn kind(&self) -> EtaKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &GaussianRational) -> EtaPoly {
        EtaPoly::new(self.kind, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The polynomial in `x` (or `z`) obtained by substituting `η(x)`.
    pub fn embed(&self) -> RingPoly {
        let kind = self.kind.ring_kind();
        let eta = self.kind.eta_in_ring();
        let mut acc = RingPoly::zero(kind);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &eta) + &RingPoly::constant(kind, c.clone());
        }
        acc
    }

    /// Chebyshev polynomials `T_0..=T_n` in the η basis.
    fn chebyshev(n: usize) -> Vec<EtaPoly> {
        let k = EtaKind::CosX;
        let mut t = vec![EtaPoly::one(k), EtaPoly::eta(k)];
        let two_eta = EtaPoly::eta(k).scale(&GaussianRational::from_int(2));
        while t.len() <= n {
            let m = t.len();
            let next = &(&two_eta * &t[m - 1]) - &t[m - 2];
            t.push(next);
        }
        t.truncate(n + 1);
        t
    }
}

/// Express `p` as a polynomial in `η`; fails when `p` is not in the image.
pub fn to_eta_basis(p: &RingPoly, kind: EtaKind) -> Result<EtaPoly> {
    if p.kind() != kind.ring_kind() {
        return Err(Error::KindMismatch);
    }
    if p.is_zero() {
        return Ok(EtaPoly::zero(kind));
    }
    match kind {
        EtaKind::X => {
            let deg = p.degree().unwrap();
            let coeffs = (0..=deg).map(|k| p.coeff(k)).collect();
            Ok(EtaPoly::new(kind, coeffs))
        }
        EtaKind::XSquared => {
            if let Some((e, _)) = p.terms().find(|(e, _)| e % 2 != 0) {
                return Err(Error::NotInEtaImage(format!("odd power x^{e} in {p}")));
            }
            let deg = p.degree().unwrap();
            let coeffs = (0..=deg / 2).map(|k| p.coeff(2 * k)).collect();
            Ok(EtaPoly::new(kind, coeffs))
        }
        EtaKind::CosX => {
            let deg = p.degree().unwrap().max(-p.low_degree().unwrap());
            for k in 1..=deg {
                if p.coeff(k) != p.coeff(-k) {
                    return Err(Error::NotInEtaImage(format!(
                        "z^{k} and z^-{k} coefficients differ in {p}"
                    )));
                }
            }
            let t = EtaPoly::chebyshev(deg as usize);
            let two = GaussianRational::from_int(2);
            let mut acc = EtaPoly::constant(kind, p.coeff(0));
            for (k, tk) in t.iter().enumerate().skip(1) {
                let c = &p.coeff(k as i64) * &two;
                if !c.is_zero() {
                    acc = &acc + &tk.scale(&c);
                }
            }
            Ok(acc)
        }
    }
}

/// Outcome of a proportionality test `p = c·q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proportionality {
    pub verdict: bool,
    /// `c` with `p = c·q`; `None` when both sides are zero or the test fails.
    pub ratio: Option<GaussianRational>,
}

fn proportional_terms<'a>(
    p: impl Iterator<Item = (i64, &'a GaussianRational)>,
    q: impl Iterator<Item = (i64, &'a GaussianRational)>,
) -> Proportionality {
    let p: Vec<_> = p.filter(|(_, c)| !c.is_zero()).collect();
    let q: Vec<_> = q.filter(|(_, c)| !c.is_zero()).collect();
    let fail = Proportionality {
        verdict: false,
        ratio: None,
    };
    match (p.is_empty(), q.is_empty()) {
        (true, true) => {
            return Proportionality {
                verdict: true,
                ratio: None,
            }
        }
        (true, false) | (false, true) => return fail,
        _ => {}
    }
    if p.len() != q.len() {
        return fail;
    }
    let (pe0, pc0) = p[0];
    let (qe0, qc0) = q[0];
    if pe0 != qe0 {
        return fail;
    }
    // p_k·q_0 = q_k·p_0 for every k
    for (&(pe, pc), &(qe, qc)) in p.iter().zip(q.iter()).skip(1) {
        if pe != qe || pc * qc0 != qc * pc0 {
            return fail;
        }
    }
    Proportionality {
        verdict: true,
        ratio: Some(pc0.checked_div(qc0).expect("nonzero coefficient")),
    }
}

/// Proportionality of two ring polynomials by cross-multiplication.
pub fn proportional(p: &RingPoly, q: &RingPoly) -> Proportionality {
    proportional_terms(p.terms(), q.terms())
}

/// Proportionality of two η-polynomials by cross-multiplication.
pub fn proportional_eta(p: &EtaPoly, q: &EtaPoly) -> Proportionality {
    let pt = p.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c));
    let qt = q.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c));
    proportional_terms(pt, qt)
}

impl Add for &EtaPoly {
    type Output = EtaPoly;
    fn add(self, rhs: &EtaPoly) -> EtaPoly {
        assert_eq!(self.kind, rhs.kind, "η kinds must match");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        EtaPoly::new(self.kind, coeffs)
    }
}

impl Neg for &EtaPoly {
    type Output = EtaPoly;
    fn neg(self) -> EtaPoly {
        EtaPoly::new(self.kind, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &EtaPoly {
    type Output = EtaPoly;
    fn sub(self, rhs: &EtaPoly) -> EtaPoly {
        self + &(-rhs)
    }
}

impl Mul for &EtaPoly {
    type Output = EtaPoly;
    fn mul(self, rhs: &EtaPoly) -> EtaPoly {
        assert_eq!(self.kind, rhs.kind, "η kinds must match");
        if self.is_zero() || rhs.is_zero() {
            return EtaPoly::zero(self.kind);
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        EtaPoly::new(self.kind, out)
    }
}

impl fmt::Display for EtaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})η")?,
                _ => write!(f, "({c})η^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EtaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.kind, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn eta_basis_examples() {
        let x = RingPoly::var(Kind::Additive);
        let p = &x.pow(4) + &x.pow(2).scale(&g(2));
        let e = to_eta_basis(&p, EtaKind::XSquared).unwrap();
        assert_eq!(e, EtaPoly::new(EtaKind::XSquared, vec![g(0), g(2), g(1)]));

        let cos = EtaKind::CosX.eta_in_ring();
        assert_eq!(to_eta_basis(&cos, EtaKind::CosX).unwrap(), EtaPoly::eta(EtaKind::CosX));

        let half = GaussianRational::from_frac(1, 2);
        let c2 = &RingPoly::monomial(Kind::Multiplicative, half.clone(), 2)
            + &RingPoly::monomial(Kind::Multiplicative, half, -2);
        assert_eq!(
            to_eta_basis(&c2, EtaKind::CosX).unwrap(),
            EtaPoly::new(EtaKind::CosX, vec![g(-1), g(0), g(2)])
        );
    }

    #[test]
    fn eta_basis_rejects_outside_image() {
        let x = RingPoly::var(Kind::Additive);
        assert!(matches!(
            to_eta_basis(&(&x.pow(2) + &x), EtaKind::XSquared),
            Err(Error::NotInEtaImage(_))
        ));
        let z = RingPoly::var(Kind::Multiplicative);
        assert!(matches!(
            to_eta_basis(&z, EtaKind::CosX),
            Err(Error::NotInEtaImage(_))
        ));
    }

    #[test]
    fn proportional_examples() {
        let x = RingPoly::var(Kind::Additive);
        let one = RingPoly::one(Kind::Additive);
        let p = &x.pow(2).scale(&g(2)) + &one.scale(&g(4));
        let q = &x.pow(2) + &one.scale(&g(2));
        assert_eq!(
            proportional(&p, &q),
            Proportionality {
                verdict: true,
                ratio: Some(g(2))
            }
        );
        assert!(!proportional(&(&x + &one), &(&x - &one)).verdict);
        let zero = RingPoly::zero(Kind::Additive);
        assert_eq!(
            proportional(&zero, &zero),
            Proportionality {
                verdict: true,
                ratio: None
            }
        );
        assert!(!proportional(&zero, &x).verdict);
    }
}
