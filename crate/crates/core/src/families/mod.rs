//! Registry of the eleven polynomial families and their parameter points.

mod data;
mod sampling;
mod series;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, QBase};
use crate::error::{Error, Result};
use crate::eta::EtaKind;
use crate::poly::{Kind, RingPoly};
#[cfg(test)]
use crate::poly::HalfInt;

pub use data::{energy, potential, r_factor, shift_coefficients, twist_constants};
pub use sampling::{sample_params, sample_params_with_base};
pub use series::{eigen_eta, eigen_poly, pseudo_eta, pseudo_poly, MAX_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyName {
    W,
    AW,
    #[serde(rename = "cdH")]
    CdH,
    #[serde(rename = "cH")]
    CH,
    MP,
    #[serde(rename = "cqJ")]
    CqJ,
    #[serde(rename = "cdqH")]
    CdqH,
    ASC,
    #[serde(rename = "cbqH")]
    CbqH,
    #[serde(rename = "cqH")]
    CqH,
    #[serde(rename = "cqL")]
    CqL,
}

impl FamilyName {
    pub const ALL: [FamilyName; 11] = [
        FamilyName::W,
        FamilyName::AW,
        FamilyName::CdH,
        FamilyName::CH,
        FamilyName::MP,
        FamilyName::CqJ,
        FamilyName::CdqH,
        FamilyName::ASC,
        FamilyName::CbqH,
        FamilyName::CqH,
        FamilyName::CqL,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::W => "W",
            FamilyName::AW => "AW",
            FamilyName::CdH => "cdH",
            FamilyName::CH => "cH",
            FamilyName::MP => "MP",
            FamilyName::CqJ => "cqJ",
            FamilyName::CdqH => "cdqH",
            FamilyName::ASC => "ASC",
            FamilyName::CbqH => "cbqH",
            FamilyName::CqH => "cqH",
            FamilyName::CqL => "cqL",
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// The auxiliary function `φ(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiKind {
    /// `2x`
    TwoX,
    /// `1`
    One,
    /// `2 sin x`
    TwoSinX,
}

/// Static data of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: FamilyName,
    pub kind: Kind,
    pub n_params: usize,
    /// Parameter shift `δ`, as `(numerator, denominator)` pairs.
    pub delta: &'static [(i64, i64)],
    pub eta_kind: EtaKind,
    pub phi_kind: PhiKind,
    /// Pseudo-virtual twist inverts the base `q`.
    pub inverts_base: bool,
}

const HALF4: &[(i64, i64)] = &[(1, 2), (1, 2), (1, 2), (1, 2)];
const HALF3: &[(i64, i64)] = &[(1, 2), (1, 2), (1, 2)];
const HALF2: &[(i64, i64)] = &[(1, 2), (1, 2)];

static REGISTRY: [FamilySpec; 11] = [
    FamilySpec {
        name: FamilyName::W,
        kind: Kind::Additive,
        n_params: 4,
        delta: HALF4,
        eta_kind: EtaKind::XSquared,
        phi_kind: PhiKind::TwoX,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::AW,
        kind: Kind::Multiplicative,
        n_params: 4,
        delta: HALF4,
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::CdH,
        kind: Kind::Additive,
        n_params: 3,
        delta: HALF3,
        eta_kind: EtaKind::XSquared,
        phi_kind: PhiKind::TwoX,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::CH,
        kind: Kind::Additive,
        n_params: 2,
        delta: HALF2,
        eta_kind: EtaKind::X,
        phi_kind: PhiKind::One,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::MP,
        kind: Kind::Additive,
        n_params: 2,
        delta: &[(1, 2), (0, 1)],
        eta_kind: EtaKind::X,
        phi_kind: PhiKind::One,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::CqJ,
        kind: Kind::Multiplicative,
        n_params: 2,
        delta: &[(1, 1), (1, 1)],
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: false,
    },
    FamilySpec {
        name: FamilyName::CdqH,
        kind: Kind::Multiplicative,
        n_params: 3,
        delta: HALF3,
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: true,
    },
    FamilySpec {
        name: FamilyName::ASC,
        kind: Kind::Multiplicative,
        n_params: 2,
        delta: HALF2,
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: true,
    },
    FamilySpec {
        name: FamilyName::CbqH,
        kind: Kind::Multiplicative,
        n_params: 1,
        delta: &[(1, 2)],
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: true,
    },
    FamilySpec {
        name: FamilyName::CqH,
        kind: Kind::Multiplicative,
        n_params: 0,
        delta: &[],
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: true,
    },
    FamilySpec {
        name: FamilyName::CqL,
        kind: Kind::Multiplicative,
        n_params: 1,
        delta: &[(1, 1)],
        eta_kind: EtaKind::CosX,
        phi_kind: PhiKind::TwoSinX,
        inverts_base: true,
    },
];

/// Look up a family by its short name.
pub fn family(name: &str) -> Result<&'static FamilySpec> {
    let n: FamilyName = name.parse()?;
    Ok(FamilySpec::get(n))
}

impl FamilySpec {
    pub fn get(name: FamilyName) -> &'static FamilySpec {
        REGISTRY
            .iter()
            .find(|s| s.name == name)
            .expect("registry covers every name")
    }

    pub fn all() -> &'static [FamilySpec] {
        &REGISTRY
    }

    pub fn is_multiplicative(&self) -> bool {
        self.kind == Kind::Multiplicative
    }

    /// `κ`: 1 for the additive families, `q⁻¹` (system base) otherwise.
    pub fn kappa(&self, p: &ParamPoint) -> Result<GaussianRational> {
        match self.kind {
            Kind::Additive => Ok(GaussianRational::one()),
            Kind::Multiplicative => {
                let qb = p.qbase.as_ref().ok_or(Error::MissingQBase)?;
                Ok(GaussianRational::real(qb.quarter_pow(-4)))
            }
        }
    }

    /// `φ(x)` in the family's ring.
    pub fn phi(&self) -> RingPoly {
        match self.phi_kind {
            PhiKind::TwoX => RingPoly::var(Kind::Additive).scale(&GaussianRational::from_int(2)),
            PhiKind::One => RingPoly::one(self.kind),
            PhiKind::TwoSinX => {
                // 2 sin x = −i(z − z⁻¹)
                let mi = -GaussianRational::i();
                let z = RingPoly::monomial(Kind::Multiplicative, mi.clone(), 1);
                let zi = RingPoly::monomial(Kind::Multiplicative, -mi, -1);
                &z + &zi
            }
        }
    }
}

/// A concrete parameter point of one family.
///
/// `values` holds the family parameters: `a_j` for W, cdH, cH (only `a_1,
/// a_2`; `a_3, a_4` are their conjugates), AW, cdqH, ASC, cbqH; `[a, e^{iφ}]`
/// for MP; `[α, β]` for cqJ and `[α]` for cqL (exponents with `2α ∈ ℤ`).
/// Multiplicative families carry the system base in `qbase`; when
/// `base_inverted` is set, every polynomial-level quantity uses `q⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamPoint {
    pub family: FamilyName,
    pub values: Vec<GaussianRational>,
    #[serde(rename = "s", default, skip_serializing_if = "Option::is_none")]
    pub qbase: Option<QBase>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub base_inverted: bool,
    /// MP only: `t` with `e^{iφ} = ((1−t²) + 2ti)/(1+t²)`.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::arith::opt_rational_str"
    )]
    pub mp_circle: Option<BigRational>,
    /// Cleared by the verifier when the draw shows an accidental degree drop.
    pub generic: bool,
}

/// `e^{iφ}` on the rational unit circle.
pub fn circle_point(t: &BigRational) -> GaussianRational {
    let one = BigRational::one();
    let t2 = t * t;
    let den = &one + &t2;
    GaussianRational::new((&one - &t2) / &den, (t + t) / &den)
}

impl ParamPoint {
    pub fn spec(&self) -> &'static FamilySpec {
        FamilySpec::get(self.family)
    }

    pub fn value(&self, j: usize) -> &GaussianRational {
        &self.values[j]
    }

    /// Real part of a parameter known to be real (cqJ/cqL exponents).
    pub(crate) fn real_value(&self, j: usize) -> &BigRational {
        &self.values[j].re
    }

    pub fn qbase(&self) -> Result<&QBase> {
        self.qbase.as_ref().ok_or(Error::MissingQBase)
    }

    /// `q_eff^{m/4}`, where `q_eff` is `q` or `q⁻¹` per `base_inverted`.
    pub fn eff_quarter_pow(&self, m: i64) -> Result<BigRational> {
        let qb = self.qbase()?;
        Ok(qb.quarter_pow(if self.base_inverted { -m } else { m }))
    }

    pub fn eff_q(&self) -> Result<BigRational> {
        self.eff_quarter_pow(4)
    }

    /// `q_eff^r` for an exponent with `4r ∈ ℤ`.
    pub fn eff_q_pow(&self, r: &BigRational) -> Result<BigRational> {
        let four = r * BigRational::from_integer(4.into());
        if !four.is_integer() {
            return Err(Error::InvalidParameter(format!(
                "q-exponent {} is not a multiple of 1/4",
                crate::arith::fmt_rational(r)
            )));
        }
        let m: i64 = num_traits::ToPrimitive::to_i64(four.numer())
            .ok_or_else(|| Error::InvalidParameter("q-exponent too large".into()))?;
        self.eff_quarter_pow(m)
    }

    /// MP: `sin φ` as an exact rational.
    pub(crate) fn mp_sin(&self) -> BigRational {
        self.values[1].im.clone()
    }
}

/// `𝔱(λ)`. Group (B) families also flip the base.
pub fn twist_params(spec: &FamilySpec, p: &ParamPoint) -> Result<ParamPoint> {
    let mut out = p.clone();
    let one = GaussianRational::one();
    match spec.name {
        FamilyName::W | FamilyName::CdH => {
            out.values = p.values.iter().map(|a| &one - a).collect();
        }
        FamilyName::CH => {
            out.values = p.values.iter().map(|a| &one - &a.conj()).collect();
        }
        FamilyName::MP => {
            out.values = vec![&one - &p.values[0], -p.values[1].conj()];
            out.mp_circle = p.mp_circle.as_ref().map(|t| t.recip());
        }
        FamilyName::AW => {
            let q = GaussianRational::real(p.eff_q()?);
            out.values = p
                .values
                .iter()
                .map(|a| q.checked_div(a))
                .collect::<Result<_>>()?;
        }
        FamilyName::CqJ | FamilyName::CqL => {
            out.values = p.values.iter().map(|a| -a).collect();
        }
        FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH | FamilyName::CqH => {
            let qinv = p.eff_q()?.recip();
            out.values = p.values.iter().map(|a| a.scale(&qinv)).collect();
        }
    }
    if spec.inverts_base {
        out.base_inverted = !p.base_inverted;
    }
    Ok(out)
}

/// `λ + k·δ`.
pub fn shift_params(spec: &FamilySpec, p: &ParamPoint, k: i64) -> Result<ParamPoint> {
    let mut out = p.clone();
    if k == 0 {
        return Ok(out);
    }
    match spec.kind {
        Kind::Additive => {
            for (v, &(dn, dd)) in out.values.iter_mut().zip(spec.delta) {
                *v = &*v + &GaussianRational::from_frac(k * dn, dd);
            }
        }
        Kind::Multiplicative => match spec.name {
            FamilyName::CqJ | FamilyName::CqL => {
                for (v, &(dn, dd)) in out.values.iter_mut().zip(spec.delta) {
                    *v = &*v + &GaussianRational::from_frac(k * dn, dd);
                }
            }
            _ => {
                for (v, &(dn, dd)) in out.values.iter_mut().zip(spec.delta) {
                    // q^{kδ} with δ = dn/dd; here δ is always 1/2
                    debug_assert_eq!(dd, 2);
                    let f = p.eff_quarter_pow(2 * k * dn)?;
                    *v = v.scale(&f);
                }
            }
        },
    }
    Ok(out)
}

/// Sum `a_1 + a_2 + a_3 + a_4` (cH completes the conjugate pair).
pub(crate) fn b1(spec: &FamilySpec, p: &ParamPoint) -> GaussianRational {
    let mut acc = GaussianRational::zero();
    for a in &p.values {
        acc += a;
    }
    if spec.name == FamilyName::CH {
        for a in &p.values {
            acc += &a.conj();
        }
    }
    acc
}

/// Product of the AW-type parameters (zero for the reduced families with
/// fewer than four).
pub(crate) fn b4(p: &ParamPoint) -> GaussianRational {
    if p.values.len() < 4 {
        return GaussianRational::zero();
    }
    p.values.iter().fold(GaussianRational::one(), |acc, a| &acc * a)
}

/// `x ↦ x + i·c·γ` with the system base of `p`.
#[cfg(test)]
pub(crate) fn shifted(poly: &RingPoly, c: HalfInt, p: &ParamPoint) -> Result<RingPoly> {
    poly.shift_substitute(c, p.qbase.as_ref())
}

#[cfg(test)]
mod tests;
