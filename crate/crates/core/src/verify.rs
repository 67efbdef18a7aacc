//! Exact checks of the identities, each producing a [`VerificationReport`].
//!
//! A check runs at one sampled parameter point ([`evaluate`]) or, through
//! [`run_check`], at a seeded draw that is resampled when it turns out to be
//! degenerate (an accidental degree drop or a vanishing denominator).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{rational_pow, GaussianRational as GQ};
use crate::casoratian::{
    casoratian_matrix, deformed_potential_ka_factored, deformed_potential_pv_factored, dualize, ell_d, p_dn,
    xi_d, xibar_d, IndexSet,
};
use crate::det::{determinant_bareiss, determinant_cofactor, determinant_integral};
use crate::error::{Error, Result};
use crate::eta::{proportional_eta, EtaPoly};
use crate::families::{
    eigen_eta, eigen_poly, energy, potential, sample_params_with_base, shift_coefficients,
    shift_params, twist_constants, twist_params, FamilyName, FamilySpec, ParamPoint,
};
use crate::poly::{HalfInt, RingPoly};
use crate::ratfunc::RatFunc;

/// Draws tried per check before a report is left as `Degenerate`.
pub const MAX_ATTEMPTS: u32 = 10;

/// Largest Casoratian the cofactor oracle re-expands.
const ORACLE_SIZE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    ShiftRelations,
    DifferenceEq,
    TwistRelations,
    EnergyReflection,
    EnergyDuality,
    MainIdentity,
    Poldual,
    PotentialDuality,
    ShapeReduction,
    ConsecutiveConstant,
    XiTwistLink,
    Awqi,
    PseudoDiffeqDual,
    DetOracle,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::ShiftRelations,
        CheckId::DifferenceEq,
        CheckId::TwistRelations,
        CheckId::EnergyReflection,
        CheckId::EnergyDuality,
        CheckId::MainIdentity,
        CheckId::Poldual,
        CheckId::PotentialDuality,
        CheckId::ShapeReduction,
        CheckId::ConsecutiveConstant,
        CheckId::XiTwistLink,
        CheckId::Awqi,
        CheckId::PseudoDiffeqDual,
        CheckId::DetOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::ShiftRelations => "shift_relations",
            CheckId::DifferenceEq => "difference_eq",
            CheckId::TwistRelations => "twist_relations",
            CheckId::EnergyReflection => "energy_reflection",
            CheckId::EnergyDuality => "energy_duality",
            CheckId::MainIdentity => "main_identity",
            CheckId::Poldual => "poldual",
            CheckId::PotentialDuality => "potential_duality",
            CheckId::ShapeReduction => "shape_reduction",
            CheckId::ConsecutiveConstant => "consecutive_constant",
            CheckId::XiTwistLink => "xi_twist_link",
            CheckId::Awqi => "awqi",
            CheckId::PseudoDiffeqDual => "pseudo_diffeq_dual",
            CheckId::DetOracle => "det_oracle",
        }
    }

    /// Whether the check is defined for `family`.
    pub fn applies_to(self, family: FamilyName) -> bool {
        match self {
            CheckId::Awqi => matches!(family, FamilyName::AW | FamilyName::CqJ),
            _ => true,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
            Verdict::Degenerate => "Degenerate",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Pass" => Ok(Verdict::Pass),
            "Fail" => Ok(Verdict::Fail),
            "Degenerate" => Ok(Verdict::Degenerate),
            _ => Err(Error::Parse(format!("unknown verdict {s:?}"))),
        }
    }
}

/// A deliberate corruption of one registry constant, for negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// `α → 2α`.
    Alpha,
    /// `α′ → α′ + 1`.
    AlphaPrime,
    /// `κ → 2κ`.
    Kappa,
    /// `f_n → 2f_n`.
    ForwardFactor,
    /// `b_{n−1} → 2b_{n−1}`.
    BackwardFactor,
    /// Negates the first twisted parameter (or skips the base inversion
    /// when there is none).
    TwistSign,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::Alpha,
        Mutation::AlphaPrime,
        Mutation::Kappa,
        Mutation::ForwardFactor,
        Mutation::BackwardFactor,
        Mutation::TwistSign,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub mutation: Option<Mutation>,
    /// Record `elapsed_ms`; off by default so reports are reproducible.
    pub timings: bool,
}

impl Options {
    fn is(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    fn kappa(&self, spec: &FamilySpec, p: &ParamPoint) -> Result<GQ> {
        let k = spec.kappa(p)?;
        Ok(if self.is(Mutation::Kappa) { &k * &GQ::from_int(2) } else { k })
    }

    fn twist_constants(&self, spec: &FamilySpec, p: &ParamPoint) -> Result<(GQ, GQ)> {
        let (mut a, mut b) = twist_constants(spec, p)?;
        if self.is(Mutation::Alpha) {
            a = &a * &GQ::from_int(2);
        }
        if self.is(Mutation::AlphaPrime) {
            b = &b + &GQ::one();
        }
        Ok((a, b))
    }

    fn shift_coefficients(&self, spec: &FamilySpec, n: usize, p: &ParamPoint) -> Result<(GQ, GQ)> {
        let (mut f, mut b) = shift_coefficients(spec, n as i64, p)?;
        if self.is(Mutation::ForwardFactor) {
            f = &f * &GQ::from_int(2);
        }
        if self.is(Mutation::BackwardFactor) {
            b = &b * &GQ::from_int(2);
        }
        Ok((f, b))
    }

    fn twist(&self, spec: &FamilySpec, p: &ParamPoint) -> Result<ParamPoint> {
        let mut t = twist_params(spec, p)?;
        if self.is(Mutation::TwistSign) {
            match t.values.first_mut() {
                Some(v) => *v = -&*v,
                None => t.base_inverted = p.base_inverted,
            }
        }
        Ok(t)
    }

    /// `V′(x; λ)`, built from [`Options::twist`].
    fn twisted_potential(&self, spec: &FamilySpec, p: &ParamPoint) -> Result<RatFunc> {
        let v = potential(spec, &self.twist(spec, p)?, false)?;
        Ok(if spec.inverts_base { v.star() } else { v })
    }

    fn xi(&self, spec: &FamilySpec, d: &IndexSet, p: &ParamPoint) -> Result<EtaPoly> {
        if self.is(Mutation::TwistSign) {
            xibar_d(spec, d, &self.twist(spec, p)?)
        } else {
            xi_d(spec, d, p)
        }
    }
}

/// One check with its index data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    ShiftRelations { n_max: usize },
    DifferenceEq { n_max: usize, v_max: usize },
    TwistRelations,
    EnergyReflection { v_max: usize },
    EnergyDuality { n_top: usize, n_max: usize, v_max: usize },
    MainIdentity { dset: IndexSet, n_top: usize },
    Poldual { dset: IndexSet, n_top: usize, n_max: usize },
    PotentialDuality { dset: IndexSet, n_top: usize },
    /// Requires `0 ∉ dset`.
    ShapeReduction { dset: IndexSet },
    /// `Ξ̄_{{0,…,n}}` is a nonzero constant.
    ConsecutiveConstant { n: usize },
    XiTwistLink { dset: IndexSet },
    Awqi { n_max: usize },
    PseudoDiffeqDual { v: usize, n_top: usize },
    DetOracle { dset: IndexSet, n_top: usize },
}

impl Check {
    pub fn id(&self) -> CheckId {
        match self {
            Check::ShiftRelations { .. } => CheckId::ShiftRelations,
            Check::DifferenceEq { .. } => CheckId::DifferenceEq,
            Check::TwistRelations => CheckId::TwistRelations,
            Check::EnergyReflection { .. } => CheckId::EnergyReflection,
            Check::EnergyDuality { .. } => CheckId::EnergyDuality,
            Check::MainIdentity { .. } => CheckId::MainIdentity,
            Check::Poldual { .. } => CheckId::Poldual,
            Check::PotentialDuality { .. } => CheckId::PotentialDuality,
            Check::ShapeReduction { .. } => CheckId::ShapeReduction,
            Check::ConsecutiveConstant { .. } => CheckId::ConsecutiveConstant,
            Check::XiTwistLink { .. } => CheckId::XiTwistLink,
            Check::Awqi { .. } => CheckId::Awqi,
            Check::PseudoDiffeqDual { .. } => CheckId::PseudoDiffeqDual,
            Check::DetOracle { .. } => CheckId::DetOracle,
        }
    }

    fn dset(&self) -> Option<IndexSet> {
        match self {
            Check::MainIdentity { dset, .. }
            | Check::Poldual { dset, .. }
            | Check::PotentialDuality { dset, .. }
            | Check::ShapeReduction { dset }
            | Check::XiTwistLink { dset }
            | Check::DetOracle { dset, .. } => Some(dset.clone()),
            Check::PseudoDiffeqDual { v, .. } => Some(IndexSet::new(vec![*v]).expect("singleton")),
            _ => None,
        }
    }

    fn n_top(&self) -> Option<usize> {
        match self {
            Check::EnergyDuality { n_top, .. }
            | Check::MainIdentity { n_top, .. }
            | Check::Poldual { n_top, .. }
            | Check::PotentialDuality { n_top, .. }
            | Check::PseudoDiffeqDual { n_top, .. }
            | Check::DetOracle { n_top, .. } => Some(*n_top),
            _ => None,
        }
    }

    /// The level bound the check runs up to (`n_max`, `v_max`, `v` or `n`).
    fn n_or_v(&self) -> Option<usize> {
        match self {
            Check::ShiftRelations { n_max }
            | Check::DifferenceEq { n_max, .. }
            | Check::EnergyDuality { n_max, .. }
            | Check::Poldual { n_max, .. }
            | Check::Awqi { n_max } => Some(*n_max),
            Check::EnergyReflection { v_max } => Some(*v_max),
            Check::PseudoDiffeqDual { v, .. } => Some(*v),
            Check::ConsecutiveConstant { n } => Some(*n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: CheckId,
    pub family: FamilyName,
    pub verdict: Verdict,
    pub params: ParamPoint,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub dset: Option<IndexSet>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n_top: Option<usize>,
    #[serde(rename = "n", default, skip_serializing_if = "Option::is_none")]
    pub n_or_v: Option<usize>,
    /// Proportionality constant (or the constant value) of the last relation
    /// checked.
    pub ratio: Option<GQ>,
    /// Fail: the nonzero difference. Degenerate: what went wrong.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_degree: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed_degree: Option<i64>,
    pub seed: u64,
    /// Draws used, counting resamples.
    pub attempts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

enum Stop {
    Fail(String),
    Degenerate {
        expected: Option<i64>,
        observed: Option<i64>,
        note: String,
    },
    Config(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Stop {
        match e {
            Error::NotDivisible { .. } | Error::NotInEtaImage(_) | Error::DivisionByZero => {
                Stop::Degenerate {
                    expected: None,
                    observed: None,
                    note: e.to_string(),
                }
            }
            e => Stop::Config(e),
        }
    }
}

type Flow<T = ()> = std::result::Result<T, Stop>;

#[derive(Default)]
struct Acc {
    ratio: Option<GQ>,
    expected: Option<i64>,
    observed: Option<i64>,
}

impl Acc {
    fn degree(&mut self, e: &EtaPoly, expected: i64, what: &str) -> Flow {
        let observed = e.degree().map(|d| d as i64);
        self.expected = Some(expected);
        self.observed = observed;
        if observed == Some(expected) {
            return Ok(());
        }
        Err(Stop::Degenerate {
            expected: Some(expected),
            observed,
            note: format!("{what}: expected η-degree {expected}, observed {observed:?}"),
        })
    }

    fn proportional(&mut self, l: &EtaPoly, r: &EtaPoly, what: &str) -> Flow {
        let pr = proportional_eta(l, r);
        match (pr.verdict, pr.ratio) {
            (true, Some(c)) => {
                self.ratio = Some(c);
                Ok(())
            }
            _ => Err(Stop::Fail(cross_witness(l, r, what))),
        }
    }
}

/// `lhs·c_r − rhs·c_l` with `c` the leading coefficients: zero iff the two
/// sides are proportional.
fn cross_witness(l: &EtaPoly, r: &EtaPoly, what: &str) -> String {
    let lead = |e: &EtaPoly| e.coeffs().last().cloned().unwrap_or_else(GQ::zero);
    let d = &l.scale(&lead(r)) - &r.scale(&lead(l));
    format!("{what}: not proportional; lhs·lc(rhs) − rhs·lc(lhs) = {d}; lhs = {l}; rhs = {r}")
}

fn same_ratfunc(l: &RatFunc, r: &RatFunc, what: &str) -> Flow {
    let d = l.sub(r)?;
    if d.is_zero() {
        Ok(())
    } else {
        Err(Stop::Fail(format!("{what}: lhs − rhs = {d}")))
    }
}

fn same_poly(l: &RingPoly, r: &RingPoly, what: &str) -> Flow {
    let d = l - r;
    if d.is_zero() {
        Ok(())
    } else {
        Err(Stop::Fail(format!("{what}: lhs − rhs = {d}")))
    }
}

fn same_value(l: &GQ, r: &GQ, what: &str) -> Flow {
    if l == r {
        Ok(())
    } else {
        Err(Stop::Fail(format!("{what}: lhs = {l}, rhs = {r}, difference {}", l - r)))
    }
}

fn half(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// `V(x)(f(x−iγ) − f(x)) + V*(x)(f(x+iγ) − f(x))`.
fn hamiltonian(v: &RatFunc, f: &RingPoly, p: &ParamPoint) -> Result<RatFunc> {
    let qb = p.qbase.as_ref();
    let down = &f.shift_substitute(HalfInt::int(-1), qb)? - f;
    let up = &f.shift_substitute(HalfInt::int(1), qb)? - f;
    v.mul_poly(&down)?.add(&v.star().mul_poly(&up)?)
}

/// `φ(x − iγ)/φ(x)`.
fn phi_ratio(spec: &FamilySpec, p: &ParamPoint) -> Result<RatFunc> {
    let phi = spec.phi();
    RatFunc::new(phi.shift_substitute(HalfInt::int(-1), p.qbase.as_ref())?, phi)
}

fn shift_relations(o: &Options, spec: &FamilySpec, p: &ParamPoint, n_max: usize, acc: &mut Acc) -> Flow {
    let qb = p.qbase.as_ref();
    let phi = spec.phi();
    let up = shift_params(spec, p, 1)?;
    let v = potential(spec, p, false)?;
    let vs = v.star();
    for n in 1..=n_max {
        let pn = eigen_eta(spec, n, p)?;
        acc.degree(&pn, n as i64, &format!("P_{n}"))?;
        let pm = eigen_eta(spec, n - 1, &up)?;
        acc.degree(&pm, n as i64 - 1, &format!("P_{}(λ+δ)", n - 1))?;
        let (f, b) = o.shift_coefficients(spec, n, p)?;
        let (pn, pm) = (pn.embed(), pm.embed());

        let diff = (&pn.shift_substitute(half(-1), qb)? - &pn.shift_substitute(half(1), qb)?)
            .scale(&GQ::i());
        let lhs = match diff.exact_div(&phi) {
            Ok(l) => l,
            Err(Error::NotDivisible { remainder }) => {
                return Err(Stop::Fail(format!(
                    "forward shift n={n}: not divisible by φ, remainder {remainder}"
                )))
            }
            Err(e) => return Err(e.into()),
        };
        same_poly(&lhs, &pm.scale(&f), &format!("forward shift n={n}"))?;

        let g_down = &phi.shift_substitute(half(-1), qb)? * &pm.shift_substitute(half(-1), qb)?;
        let g_up = &phi.shift_substitute(half(1), qb)? * &pm.shift_substitute(half(1), qb)?;
        let lhs = v.mul_poly(&g_down)?.sub(&vs.mul_poly(&g_up)?)?.scale(&-GQ::i());
        same_ratfunc(&lhs, &RatFunc::from_poly(pn.scale(&b)), &format!("backward shift n={n}"))?;
    }
    let lhs = potential(spec, &up, false)?;
    let rhs = v
        .shift(half(-1), qb)?
        .mul(&phi_ratio(spec, p)?)?
        .scale(&o.kappa(spec, p)?.inv()?);
    same_ratfunc(&lhs, &rhs, "potential shape invariance")
}

fn difference_eq(
    o: &Options,
    spec: &FamilySpec,
    p: &ParamPoint,
    n_max: usize,
    v_max: usize,
    acc: &mut Acc,
) -> Flow {
    let v = potential(spec, p, false)?;
    for n in 0..=n_max {
        let pn = eigen_eta(spec, n, p)?;
        acc.degree(&pn, n as i64, &format!("P_{n}"))?;
        let pn = pn.embed();
        let e = energy(spec, n as i64, p)?;
        same_ratfunc(
            &hamiltonian(&v, &pn, p)?,
            &RatFunc::from_poly(pn.scale(&e)),
            &format!("difference equation n={n}"),
        )?;
    }
    // ξ_v solves the twisted equation with E_v(𝔱(λ)); the linear relation
    // between the two Hamiltonians maps that to E_{−v−1}(λ)
    let t = o.twist(spec, p)?;
    let vt = o.twisted_potential(spec, p)?;
    let (alpha, alpha_p) = o.twist_constants(spec, p)?;
    for k in 0..=v_max {
        let xi = eigen_eta(spec, k, &t)?;
        acc.degree(&xi, k as i64, &format!("ξ_{k}"))?;
        let xi = xi.embed();
        let e_twisted = energy(spec, k as i64, &t)?;
        same_ratfunc(
            &hamiltonian(&vt, &xi, p)?,
            &RatFunc::from_poly(xi.scale(&e_twisted)),
            &format!("pseudo difference equation v={k}"),
        )?;
        same_value(
            &(&(&alpha * &e_twisted) + &alpha_p),
            &energy(spec, -(k as i64) - 1, p)?,
            &format!("pseudo energy v={k}"),
        )?;
    }
    Ok(())
}

fn twist_relations(o: &Options, spec: &FamilySpec, p: &ParamPoint) -> Flow {
    let qb = p.qbase.as_ref();
    let v = potential(spec, p, false)?;
    let vs = v.star();
    let vt = o.twisted_potential(spec, p)?;
    let vts = vt.star();
    let (alpha, alpha_p) = o.twist_constants(spec, p)?;
    let lhs = v.mul(&vs.shift(HalfInt::int(-1), qb)?)?;
    let rhs = vt.mul(&vts.shift(HalfInt::int(-1), qb)?)?.scale(&(&alpha * &alpha));
    same_ratfunc(&lhs, &rhs, "product relation")?;
    let lhs = v.add(&vs)?;
    let rhs = vt
        .add(&vts)?
        .scale(&alpha)
        .sub(&RatFunc::constant(spec.kind, alpha_p))?;
    same_ratfunc(&lhs, &rhs, "sum relation")?;
    let rhs = vs
        .shift(HalfInt::int(-1), qb)?
        .mul(&phi_ratio(spec, p)?)?
        .scale(&alpha.inv()?);
    same_ratfunc(&vt, &rhs, "twisted potential")
}

fn energy_reflection(o: &Options, spec: &FamilySpec, p: &ParamPoint, v_max: usize) -> Flow {
    let t = o.twist(spec, p)?;
    let (alpha, alpha_p) = o.twist_constants(spec, p)?;
    same_value(&alpha_p, &energy(spec, -1, p)?, "α′ = E_{-1}")?;
    for v in 0..=v_max {
        let lhs = &(&alpha * &energy(spec, v as i64, &t)?) + &alpha_p;
        same_value(&lhs, &energy(spec, -(v as i64) - 1, p)?, &format!("reflection v={v}"))?;
    }
    Ok(())
}

fn energy_duality(
    o: &Options,
    spec: &FamilySpec,
    p: &ParamPoint,
    n_top: usize,
    n_max: usize,
    v_max: usize,
) -> Flow {
    let nn = n_top as i64;
    let bar = shift_params(spec, p, -nn - 1)?;
    let k = o.kappa(spec, p)?.pow(-nn - 1)?;
    let floor = energy(spec, -nn - 1, p)?;
    for n in 0..=n_max as i64 {
        same_value(
            &(&energy(spec, n, p)? - &floor),
            &(&k * &energy(spec, nn + 1 + n, &bar)?),
            &format!("eigen level n={n}"),
        )?;
    }
    for v in 0..=v_max.min(n_top) as i64 {
        same_value(
            &(&energy(spec, -v - 1, p)? - &floor),
            &(&k * &energy(spec, nn - v, &bar)?),
            &format!("pseudo level v={v}"),
        )?;
    }
    Ok(())
}

fn main_identity(
    o: &Options,
    spec: &FamilySpec,
    p: &ParamPoint,
    d: &IndexSet,
    n_top: usize,
    acc: &mut Acc,
) -> Flow {
    let dual = dualize(d, n_top)?;
    let bar = dual.params(p)?;
    let ell = ell_d(d);
    let l = o.xi(spec, d, p)?;
    acc.degree(&l, ell, "Ξ_D")?;
    let r = xibar_d(spec, &dual.dbar, &bar)?;
    acc.degree(&r, ell, "Ξ̄_D̄")?;
    acc.proportional(&l, &r, "Ξ_D(λ) ∝ Ξ̄_D̄(λ̄)")
}

fn poldual(
    spec: &FamilySpec,
    p: &ParamPoint,
    d: &IndexSet,
    n_top: usize,
    n_max: usize,
    acc: &mut Acc,
) -> Flow {
    let dual = dualize(d, n_top)?;
    let bar = dual.params(p)?;
    let m = d.len() as i64;
    for dj in d.elems() {
        let smaller = d.without(*dj);
        let l = xi_d(spec, &smaller, p)?;
        acc.degree(&l, ell_d(&smaller), &format!("Ξ_{{D∖{dj}}}"))?;
        let grown = dual.dbar.with(n_top - dj).expect("N − d_j is not in D̄");
        let r = xibar_d(spec, &grown, &bar)?;
        acc.degree(&r, ell_d(&smaller), &format!("Ξ̄_{{D̄∪{}}}", n_top - dj))?;
        acc.proportional(&l, &r, &format!("deleting d={dj}"))?;
    }
    for n in 0..=n_max {
        let expected = ell_d(d) + m + n as i64;
        let l = p_dn(spec, d, n, p)?;
        acc.degree(&l, expected, &format!("P_{{D,{n}}}"))?;
        let grown = dual.dbar.with(n_top + 1 + n).expect("N+1+n exceeds D̄");
        let r = xibar_d(spec, &grown, &bar)?;
        acc.degree(&r, expected, &format!("Ξ̄_{{D̄∪{}}}", n_top + 1 + n))?;
        acc.proportional(&l, &r, &format!("P_{{D,{n}}} ∝ Ξ̄"))?;
    }
    Ok(())
}

fn potential_duality(o: &Options, spec: &FamilySpec, p: &ParamPoint, d: &IndexSet, n_top: usize) -> Flow {
    let dual = dualize(d, n_top)?;
    let nn = n_top as i64;
    let vhat = deformed_potential_pv_factored(spec, d, p)?;
    let vka = deformed_potential_ka_factored(spec, &dual, p)?;
    let k = o.kappa(spec, p)?.pow(-nn - 1)?;
    let lhs = vka.scale(&k);
    let rhs = vhat.star().shift(half(-1), p.qbase.as_ref())?;
    if !lhs.equals(&rhs)? {
        let diff = lhs.to_ratfunc()?.sub(&rhs.to_ratfunc()?)?;
        return Err(Stop::Fail(format!("κ^{{-N-1}} V^KA − V̂*(x − iγ/2) = {diff}")));
    }
    if let (Some(dm), Some(mu)) = (d.largest(), dual.mu) {
        let bar = dual.params(p)?;
        same_value(
            &(&energy(spec, -(dm as i64) - 1, p)? - &energy(spec, -nn - 1, p)?),
            &(&k * &energy(spec, mu as i64, &bar)?),
            "energy of the new ground state",
        )?;
    }
    Ok(())
}

fn shape_reduction(spec: &FamilySpec, p: &ParamPoint, d: &IndexSet, acc: &mut Acc) -> Flow {
    let (Some(with0), Some(dec)) = (d.with(0), d.decremented()) else {
        return Err(Stop::Config(Error::InvalidParameter(format!(
            "shape reduction needs 0 ∉ D, got {d}"
        ))));
    };
    let l = xibar_d(spec, &with0, p)?;
    acc.degree(&l, ell_d(&with0), "Ξ̄_{D∪{0}}")?;
    let r = xibar_d(spec, &dec, &shift_params(spec, p, 1)?)?;
    acc.degree(&r, ell_d(&dec), "Ξ̄_{D−1}(λ+δ)")?;
    acc.proportional(&l, &r, "Ξ̄_{D∪{0}}(λ) ∝ Ξ̄_{D−1}(λ+δ)")
}

fn consecutive_constant(spec: &FamilySpec, p: &ParamPoint, n: usize, acc: &mut Acc) -> Flow {
    let e = xibar_d(spec, &IndexSet::range(n + 1), p)?;
    if e.is_zero() {
        return Err(Stop::Fail(format!("Ξ̄_{{0..{n}}} vanishes")));
    }
    if e.degree() != Some(0) {
        return Err(Stop::Fail(format!("Ξ̄_{{0..{n}}} is not constant: {e}")));
    }
    acc.expected = Some(0);
    acc.observed = Some(0);
    acc.ratio = Some(e.coeffs()[0].clone());
    Ok(())
}

fn xi_twist_link(o: &Options, spec: &FamilySpec, p: &ParamPoint, d: &IndexSet, acc: &mut Acc) -> Flow {
    let l = xi_d(spec, d, p)?;
    acc.degree(&l, ell_d(d), "Ξ_D")?;
    let r = xibar_d(spec, d, &o.twist(spec, p)?)?;
    if l != r {
        let diff = &l - &r;
        return Err(Stop::Fail(format!("Ξ_D(λ) − Ξ̄_D(𝔱(λ)) = {diff}")));
    }
    Ok(())
}

fn awqi(o: &Options, spec: &FamilySpec, p: &ParamPoint, n_max: usize, acc: &mut Acc) -> Flow {
    // left: twisted within base q; right: parameters over q with base q⁻¹
    let left = o.twist(spec, p)?;
    let mut right = p.clone();
    right.base_inverted = !p.base_inverted;
    let q = p.eff_q()?;
    match spec.name {
        FamilyName::AW => {
            let qinv = q.recip();
            right.values = p.values.iter().map(|a| a.scale(&qinv)).collect();
        }
        FamilyName::CqJ => right.values = p.values.iter().map(|a| -a).collect(),
        _ => {
            return Err(Stop::Config(Error::InvalidParameter(format!(
                "no base-inversion twin for {}",
                spec.name
            ))))
        }
    }
    let b4 = p.values.iter().fold(GQ::one(), |acc, a| &acc * a);
    for n in 0..=n_max {
        let l = eigen_eta(spec, n, &left)?;
        acc.degree(&l, n as i64, &format!("p_{n} twisted in q"))?;
        let r = eigen_eta(spec, n, &right)?;
        acc.degree(&r, n as i64, &format!("p_{n} over q⁻¹"))?;
        acc.proportional(&l, &r, &format!("n={n}"))?;
        if spec.name == FamilyName::AW {
            let nn = n as i64;
            let sign = if n % 2 == 0 { GQ::one() } else { -GQ::one() };
            let qpow = GQ::real(rational_pow(&q, nn * (3 * nn + 5) / 2));
            let expected = (&sign * &qpow).checked_div(&b4.pow(nn)?)?;
            same_value(acc.ratio.as_ref().expect("set above"), &expected, &format!("constant n={n}"))?;
        }
    }
    Ok(())
}

fn pseudo_diffeq_dual(
    o: &Options,
    spec: &FamilySpec,
    p: &ParamPoint,
    v: usize,
    n_top: usize,
    acc: &mut Acc,
) -> Flow {
    let dual = dualize(&IndexSet::new(vec![v])?, n_top)?;
    let bar = dual.params(p)?;
    let xi = xibar_d(spec, &dual.dbar, &bar)?;
    acc.degree(&xi, v as i64, "Ξ̄_D̄")?;
    let xi = xi.embed();
    let e = energy(spec, v as i64, &o.twist(spec, p)?)?;
    same_ratfunc(
        &hamiltonian(&o.twisted_potential(spec, p)?, &xi, p)?,
        &RatFunc::from_poly(xi.scale(&e)),
        "twisted difference equation for Ξ̄_D̄",
    )
}

fn det_oracle(spec: &FamilySpec, p: &ParamPoint, d: &IndexSet, n_top: usize) -> Flow {
    let dual = dualize(d, n_top)?;
    let bar = dual.params(p)?;
    let qb = p.qbase.as_ref();
    let twisted = twist_params(spec, p)?;
    let pseudo = d
        .elems()
        .iter()
        .map(|&k| eigen_poly(spec, k, &twisted))
        .collect::<Result<Vec<_>>>()?;
    let eigen = dual
        .dbar
        .elems()
        .iter()
        .map(|&k| eigen_poly(spec, k, &bar))
        .collect::<Result<Vec<_>>>()?;
    for (name, fs) in [("Ξ_D", pseudo), ("Ξ̄_D̄", eigen)] {
        if fs.len() > ORACLE_SIZE {
            continue;
        }
        let m = casoratian_matrix(&fs, spec.kind, qb)?;
        let c = determinant_cofactor(&m, spec.kind)?;
        let b = determinant_bareiss(&m, spec.kind)?;
        same_poly(&c, &b, &format!("{name}: cofactor vs fraction-free"))?;
        let z = determinant_integral(&m, spec.kind)?;
        same_poly(&c, &z, &format!("{name}: cofactor vs integral fraction-free"))?;
    }
    Ok(())
}

/// Runs `check` at the point `p` (no resampling).
///
/// Errors are configuration problems (index out of range, degree cap);
/// algebraic failures are verdicts.
pub fn evaluate(opts: &Options, check: &Check, p: &ParamPoint) -> Result<VerificationReport> {
    let spec = p.spec();
    if !check.id().applies_to(spec.name) {
        return Err(Error::InvalidParameter(format!(
            "{} does not apply to {}",
            check.id(),
            spec.name
        )));
    }
    let start = Instant::now();
    let mut acc = Acc::default();
    let flow = match check {
        Check::ShiftRelations { n_max } => shift_relations(opts, spec, p, *n_max, &mut acc),
        Check::DifferenceEq { n_max, v_max } => difference_eq(opts, spec, p, *n_max, *v_max, &mut acc),
        Check::TwistRelations => twist_relations(opts, spec, p),
        Check::EnergyReflection { v_max } => energy_reflection(opts, spec, p, *v_max),
        Check::EnergyDuality { n_top, n_max, v_max } => {
            energy_duality(opts, spec, p, *n_top, *n_max, *v_max)
        }
        Check::MainIdentity { dset, n_top } => main_identity(opts, spec, p, dset, *n_top, &mut acc),
        Check::Poldual { dset, n_top, n_max } => poldual(spec, p, dset, *n_top, *n_max, &mut acc),
        Check::PotentialDuality { dset, n_top } => potential_duality(opts, spec, p, dset, *n_top),
        Check::ShapeReduction { dset } => shape_reduction(spec, p, dset, &mut acc),
        Check::ConsecutiveConstant { n } => consecutive_constant(spec, p, *n, &mut acc),
        Check::XiTwistLink { dset } => xi_twist_link(opts, spec, p, dset, &mut acc),
        Check::Awqi { n_max } => awqi(opts, spec, p, *n_max, &mut acc),
        Check::PseudoDiffeqDual { v, n_top } => pseudo_diffeq_dual(opts, spec, p, *v, *n_top, &mut acc),
        Check::DetOracle { dset, n_top } => det_oracle(spec, p, dset, *n_top),
    };
    let (verdict, witness) = match flow {
        Ok(()) => (Verdict::Pass, None),
        Err(Stop::Fail(w)) => {
            acc.ratio = None;
            (Verdict::Fail, Some(w))
        }
        Err(Stop::Degenerate {
            expected,
            observed,
            note,
        }) => {
            acc.ratio = None;
            if expected.is_some() {
                acc.expected = expected;
                acc.observed = observed;
            }
            (Verdict::Degenerate, Some(note))
        }
        Err(Stop::Config(e)) => return Err(e),
    };
    let mut params = p.clone();
    if verdict == Verdict::Degenerate {
        params.generic = false;
    }
    Ok(VerificationReport {
        check_id: check.id(),
        family: spec.name,
        verdict,
        params,
        dset: check.dset(),
        n_top: check.n_top(),
        n_or_v: check.n_or_v(),
        ratio: acc.ratio,
        witness,
        expected_degree: acc.expected,
        observed_degree: acc.observed,
        seed: 0,
        attempts: 1,
        elapsed_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Seed of the `attempt`-th draw for a job seeded with `seed`.
pub fn draw_seed(seed: u64, attempt: u32) -> u64 {
    seed.wrapping_add(u64::from(attempt).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// One unit of a batch.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Job {
    pub family: FamilyName,
    pub check: Check,
    pub seed: u64,
}

/// Runs a job, resampling degenerate draws up to [`MAX_ATTEMPTS`] times.
pub fn run_check(opts: &Options, job: &Job, sbase: Option<&BigRational>) -> Result<VerificationReport> {
    let spec = FamilySpec::get(job.family);
    let start = Instant::now();
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let p = sample_params_with_base(spec, draw_seed(job.seed, attempt), sbase)?;
        let mut r = evaluate(opts, &job.check, &p)?;
        r.seed = job.seed;
        r.attempts = attempt + 1;
        if opts.timings {
            r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        if r.verdict != Verdict::Degenerate {
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("at least one attempt"))
}

/// Runs `jobs` on the rayon pool, handing each result to `sink` as it
/// completes.
pub fn run_batch_with<F>(opts: &Options, jobs: &[Job], sbase: Option<&BigRational>, sink: F)
where
    F: Fn(&Job, Result<VerificationReport>) + Sync,
{
    jobs.par_iter()
        .for_each(|job| sink(job, run_check(opts, job, sbase)));
}

/// Runs `jobs` in parallel; results are in job order.
pub fn run_batch(
    opts: &Options,
    jobs: &[Job],
    sbase: Option<&BigRational>,
) -> Vec<Result<VerificationReport>> {
    jobs.par_iter().map(|job| run_check(opts, job, sbase)).collect()
}

/// Index data of a standard batch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchConfig {
    pub dset: IndexSet,
    /// `None` resolves to `max(D)`.
    pub n_top: Option<usize>,
    pub n_extra: usize,
    pub n_max: usize,
    pub v_max: usize,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig {
            dset: IndexSet::new(vec![1, 2]).expect("distinct"),
            n_top: None,
            n_extra: 0,
            n_max: 3,
            v_max: 3,
        }
    }
}

impl BatchConfig {
    /// `N`, resolved against `D`.
    pub fn resolved_n(&self) -> Result<usize> {
        let max = self.dset.largest().unwrap_or(0);
        let n = self.n_top.unwrap_or(max) + self.n_extra;
        if n < max {
            return Err(Error::NTooSmall {
                n: n as i64,
                max: max as i64,
            });
        }
        Ok(n)
    }

    /// Every applicable check for `family`, once.
    pub fn checks(&self, family: FamilyName) -> Result<Vec<Check>> {
        let n_top = self.resolved_n()?;
        let d = self.dset.clone();
        let shape = {
            let positive = d.without(0);
            if positive.is_empty() {
                IndexSet::new(vec![1])?
            } else {
                positive
            }
        };
        let checks = vec![
            Check::ShiftRelations { n_max: self.n_max },
            Check::DifferenceEq {
                n_max: self.n_max,
                v_max: self.v_max,
            },
            Check::TwistRelations,
            Check::EnergyReflection { v_max: self.v_max },
            Check::EnergyDuality {
                n_top,
                n_max: self.n_max,
                v_max: self.v_max,
            },
            Check::MainIdentity {
                dset: d.clone(),
                n_top,
            },
            Check::Poldual {
                dset: d.clone(),
                n_top,
                n_max: self.n_max.min(2),
            },
            Check::PotentialDuality {
                dset: d.clone(),
                n_top,
            },
            Check::ShapeReduction { dset: shape },
            Check::ConsecutiveConstant { n: d.len() },
            Check::XiTwistLink { dset: d.clone() },
            Check::Awqi { n_max: self.n_max },
            Check::PseudoDiffeqDual {
                v: d.largest().unwrap_or(0),
                n_top,
            },
            Check::DetOracle { dset: d, n_top },
        ];
        Ok(checks
            .into_iter()
            .filter(|c| c.id().applies_to(family))
            .collect())
    }

    /// `draws` seeded jobs per applicable check for each family.
    pub fn jobs(&self, families: &[FamilyName], seed: u64, draws: u64) -> Result<Vec<Job>> {
        let mut out = Vec::new();
        for &family in families {
            for check in self.checks(family)? {
                for k in 0..draws {
                    out.push(Job {
                        family,
                        check: check.clone(),
                        seed: seed.wrapping_add(k),
                    });
                }
            }
        }
        Ok(out)
    }
}

/// Single-draw entry points.
pub fn verify_shift_relations(p: &ParamPoint, n_max: usize) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::ShiftRelations { n_max }, p)
}

pub fn verify_difference_eq(p: &ParamPoint, n_max: usize, v_max: usize) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::DifferenceEq { n_max, v_max }, p)
}

pub fn verify_twist_relations(p: &ParamPoint) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::TwistRelations, p)
}

pub fn verify_energy_duality(
    p: &ParamPoint,
    n_top: usize,
    n_max: usize,
    v_max: usize,
) -> Result<VerificationReport> {
    let check = Check::EnergyDuality { n_top, n_max, v_max };
    evaluate(&Options::default(), &check, p)
}

pub fn verify_main_identity(p: &ParamPoint, dset: &IndexSet, n_top: usize) -> Result<VerificationReport> {
    let check = Check::MainIdentity {
        dset: dset.clone(),
        n_top,
    };
    evaluate(&Options::default(), &check, p)
}

pub fn verify_poldual(
    p: &ParamPoint,
    dset: &IndexSet,
    n_top: usize,
    n_max: usize,
) -> Result<VerificationReport> {
    let check = Check::Poldual {
        dset: dset.clone(),
        n_top,
        n_max,
    };
    evaluate(&Options::default(), &check, p)
}

pub fn verify_potential_duality(
    p: &ParamPoint,
    dset: &IndexSet,
    n_top: usize,
) -> Result<VerificationReport> {
    let check = Check::PotentialDuality {
        dset: dset.clone(),
        n_top,
    };
    evaluate(&Options::default(), &check, p)
}

pub fn verify_shape_reduction(p: &ParamPoint, dset: &IndexSet) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::ShapeReduction { dset: dset.clone() }, p)
}

pub fn verify_xi_twist_link(p: &ParamPoint, dset: &IndexSet) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::XiTwistLink { dset: dset.clone() }, p)
}

pub fn verify_awqi(p: &ParamPoint, n_max: usize) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::Awqi { n_max }, p)
}

pub fn verify_pseudo_diffeq_dual(p: &ParamPoint, v: usize, n_top: usize) -> Result<VerificationReport> {
    evaluate(&Options::default(), &Check::PseudoDiffeqDual { v, n_top }, p)
}
