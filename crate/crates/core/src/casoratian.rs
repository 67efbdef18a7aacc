//! Casoratians, the auxiliary function `φ_M`, the polynomials `Ξ_D`, `Ξ̄_D`
//! and `P_{D,n}`, index duality and the two deformed-potential expressions.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{LazyLock, Mutex};

use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, QBase};
use crate::det::{determinant, determinant_cofactor};
use crate::error::{Error, Result};
use crate::eta::{to_eta_basis, EtaPoly};
use crate::families::{
    eigen_poly, potential, pseudo_poly, r_factor, shift_params, twist_params, FamilySpec,
    ParamPoint,
};
use crate::poly::{HalfInt, Kind, RingPoly};
use crate::ratfunc::{Factored, RatFunc};

/// A finite set of distinct non-negative integers, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "index set has repeated elements: {elems:?}"
            )));
        }
        Ok(IndexSet(elems))
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// `{0, 1, …, n−1}`.
    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, d: usize) -> bool {
        self.0.binary_search(&d).is_ok()
    }

    /// The set with `d` added; `None` if it is already present.
    pub fn with(&self, d: usize) -> Option<Self> {
        match self.0.binary_search(&d) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, d);
                Some(IndexSet(v))
            }
        }
    }

    pub fn without(&self, d: usize) -> Self {
        IndexSet(self.0.iter().copied().filter(|&e| e != d).collect())
    }

    /// Every element minus one; `None` if the set contains 0.
    pub fn decremented(&self) -> Option<Self> {
        if self.contains(0) {
            return None;
        }
        Some(IndexSet(self.0.iter().map(|e| e - 1).collect()))
    }

    /// `D′`: the set without its largest element.
    pub fn without_max(&self) -> Self {
        let mut v = self.0.clone();
        v.pop();
        IndexSet(v)
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(d: IndexSet) -> Vec<usize> {
        d.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for IndexSet {
    type Err = Error;
    /// Comma-separated integers, optionally in braces; `""` and `{}` are empty.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if body.is_empty() {
            return Ok(IndexSet::empty());
        }
        let elems = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad index {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        IndexSet::new(elems)
    }
}

/// `ℓ_D = Σ d_j − M(M−1)/2`.
pub fn ell_d(d: &IndexSet) -> i64 {
    let m = d.len() as i64;
    d.elems().iter().map(|&e| e as i64).sum::<i64>() - m * (m - 1) / 2
}

/// Shift of the evaluation point `x_j^{(n)} = x + i((n+1)/2 − j)γ`, `j ≥ 1`.
pub fn point_shift(n: usize, j: usize) -> HalfInt {
    HalfInt::from_twice(n as i64 + 1 - 2 * j as i64)
}

/// `i^k` for the Casoratian prefactor.
fn i_power(k: usize) -> GaussianRational {
    GaussianRational::i_pow((k % 4) as i64)
}

/// The matrix `f_k(x_j^{(n)})`: rows are points, columns are functions.
pub fn casoratian_matrix(
    fs: &[RingPoly],
    kind: Kind,
    qbase: Option<&QBase>,
) -> Result<Vec<Vec<RingPoly>>> {
    if fs.iter().any(|f| f.kind() != kind) {
        return Err(Error::KindMismatch);
    }
    let n = fs.len();
    (1..=n)
        .map(|j| {
            fs.iter()
                .map(|f| f.shift_substitute(point_shift(n, j), qbase))
                .collect()
        })
        .collect()
}

/// `W_γ[f_1, …, f_n](x) = i^{n(n−1)/2} det(f_k(x_j^{(n)}))`; 1 for `n = 0`.
pub fn casoratian(fs: &[RingPoly], kind: Kind, qbase: Option<&QBase>) -> Result<RingPoly> {
    let m = casoratian_matrix(fs, kind, qbase)?;
    let n = fs.len();
    Ok(determinant(&m, kind)?.scale(&i_power(n * n.saturating_sub(1) / 2)))
}

/// As [`casoratian`], always by cofactor expansion (reference path).
pub fn casoratian_cofactor(
    fs: &[RingPoly],
    kind: Kind,
    qbase: Option<&QBase>,
) -> Result<RingPoly> {
    let m = casoratian_matrix(fs, kind, qbase)?;
    let n = fs.len();
    Ok(determinant_cofactor(&m, kind)?.scale(&i_power(n * n.saturating_sub(1) / 2)))
}

/// `φ_M(x) = φ(x)^{[M/2]} ∏_{k=1}^{M−2} (φ(x − ikγ/2) φ(x + ikγ/2))^{[(M−k)/2]}`.
pub fn varphi_m(m: usize, spec: &FamilySpec, qbase: Option<&QBase>) -> Result<RingPoly> {
    let phi = spec.phi();
    if phi.is_constant() {
        return Ok(RingPoly::one(spec.kind));
    }
    let mut acc = phi.pow((m / 2) as u32);
    for k in 1..m.saturating_sub(1) {
        let e = ((m - k) / 2) as u32;
        if e == 0 {
            continue;
        }
        let down = phi.shift_substitute(HalfInt::from_twice(-(k as i64)), qbase)?;
        let up = phi.shift_substitute(HalfInt::from_twice(k as i64), qbase)?;
        acc = &acc * &(&down * &up).pow(e);
    }
    Ok(acc)
}

/// `φ_M^{-1}·W_γ[entries]` in the η basis.
fn reduced_casoratian(spec: &FamilySpec, entries: &[RingPoly], p: &ParamPoint) -> Result<EtaPoly> {
    let qb = p.qbase.as_ref();
    let w = casoratian(entries, spec.kind, qb)?;
    let phi = varphi_m(entries.len(), spec, qb)?;
    to_eta_basis(&w.exact_div(&phi)?, spec.eta_kind)
}

/// Entries kept by the `Ξ̄_D` memo before it is cleared wholesale.
const MEMO_CAP: usize = 4096;

type XiMemo = HashMap<(IndexSet, ParamPoint), EtaPoly>;

// Batches revisit the same (D, λ) pairs across checks and choices of N.
static XIBAR_MEMO: LazyLock<Mutex<XiMemo>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// `Ξ̄_D(η; λ)`: the reduced Casoratian of eigenpolynomials.
pub fn xibar_d(spec: &FamilySpec, d: &IndexSet, p: &ParamPoint) -> Result<EtaPoly> {
    let key = (d.clone(), p.clone());
    if let Some(e) = XIBAR_MEMO.lock().expect("memo lock").get(&key) {
        return Ok(e.clone());
    }
    let entries = d
        .elems()
        .iter()
        .map(|&k| eigen_poly(spec, k, p))
        .collect::<Result<Vec<_>>>()?;
    let e = reduced_casoratian(spec, &entries, p)?;
    let mut memo = XIBAR_MEMO.lock().expect("memo lock");
    if memo.len() >= MEMO_CAP {
        memo.clear();
    }
    memo.insert(key, e.clone());
    Ok(e)
}

/// `Ξ_D(η; λ)`: the reduced Casoratian of pseudo virtual polynomials, that
/// is `Ξ̄_D(η; 𝔱(λ))` (the Casoratian shifts keep the system base).
pub fn xi_d(spec: &FamilySpec, d: &IndexSet, p: &ParamPoint) -> Result<EtaPoly> {
    xibar_d(spec, d, &twist_params(spec, p)?)
}

type MinorMemo = HashMap<(IndexSet, ParamPoint), Vec<RingPoly>>;

static MINOR_MEMO: LazyLock<Mutex<MinorMemo>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Signed cofactors of the last column of the `(M+1)`-point Casoratian
/// matrix of the pseudo virtual polynomials: entry `j` is `(−1)^{j+M}`
/// times the minor with row `j` deleted. They do not depend on `n`.
fn last_column_cofactors(spec: &FamilySpec, d: &IndexSet, p: &ParamPoint) -> Result<Vec<RingPoly>> {
    let key = (d.clone(), p.clone());
    if let Some(c) = MINOR_MEMO.lock().expect("memo lock").get(&key) {
        return Ok(c.clone());
    }
    let qb = p.qbase.as_ref();
    let m = d.len();
    let size = m + 1;
    let columns = d
        .elems()
        .iter()
        .map(|&k| pseudo_poly(spec, k, p))
        .collect::<Result<Vec<_>>>()?;
    // rows at the (M+1)-point shifts, M columns
    let rows = (1..=size)
        .map(|j| {
            columns
                .iter()
                .map(|f| f.shift_substitute(point_shift(size, j), qb))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let cof = (0..size)
        .map(|j| {
            let minor: Vec<Vec<RingPoly>> = rows
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| row.clone())
                .collect();
            let det = determinant(&minor, spec.kind)?;
            Ok(if (j + m) % 2 == 0 { det } else { -&det })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut memo = MINOR_MEMO.lock().expect("memo lock");
    if memo.len() >= MEMO_CAP {
        memo.clear();
    }
    memo.insert(key, cof.clone());
    Ok(cof)
}

/// `P_{D,n}(η; λ) = φ_{M+1}^{-1} i^{M(M+1)/2} det[X_{d_1} … X_{d_M} Z_n]`,
/// where row `j` of `Z_n` is `r_j(x) P̌_n(x_j)`.
///
/// The determinant is expanded along the `Z_n` column.
pub fn p_dn(spec: &FamilySpec, d: &IndexSet, n: usize, p: &ParamPoint) -> Result<EtaPoly> {
    let qb = p.qbase.as_ref();
    let m = d.len();
    let size = m + 1;
    let cof = last_column_cofactors(spec, d, p)?;
    let pn = eigen_poly(spec, n, p)?;
    let mut det = RingPoly::zero(spec.kind);
    for (j, c) in cof.iter().enumerate() {
        let z = &pn.shift_substitute(point_shift(size, j + 1), qb)? * &r_factor(spec, j + 1, m, p)?;
        det = &det + &(&z * c);
    }
    let det = det.scale(&i_power(m * size / 2));
    let phi = varphi_m(size, spec, qb)?;
    to_eta_basis(&det.exact_div(&phi)?, spec.eta_kind)
}

/// [`p_dn`] by direct evaluation of the full determinant (reference path).
pub fn p_dn_direct(spec: &FamilySpec, d: &IndexSet, n: usize, p: &ParamPoint) -> Result<EtaPoly> {
    let qb = p.qbase.as_ref();
    let m = d.len();
    let size = m + 1;
    let mut columns = d
        .elems()
        .iter()
        .map(|&k| pseudo_poly(spec, k, p))
        .collect::<Result<Vec<_>>>()?;
    columns.push(eigen_poly(spec, n, p)?);
    let mut mat = casoratian_matrix(&columns, spec.kind, qb)?;
    for (j, row) in mat.iter_mut().enumerate() {
        let r = r_factor(spec, j + 1, m, p)?;
        row[m] = &row[m] * &r;
    }
    let det = determinant(&mat, spec.kind)?.scale(&i_power(m * size / 2));
    let phi = varphi_m(size, spec, qb)?;
    to_eta_basis(&det.exact_div(&phi)?, spec.eta_kind)
}

/// The data of the dual (eigenstate deleting) description of `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualIndex {
    /// The integer `N ≥ max(D)`.
    pub n_top: usize,
    /// `|D|`.
    pub m: usize,
    /// `D̄ = {0, …, N} \ {N − d_j}`.
    pub dbar: IndexSet,
    /// `μ = min{N − d_j}`, absent for empty `D`.
    pub mu: Option<usize>,
}

impl DualIndex {
    /// Parameter shift applied to reach `λ̄ = λ − (N+1)δ`.
    pub fn shift(&self) -> i64 {
        -(self.n_top as i64 + 1)
    }

    /// `λ̄`.
    pub fn params(&self, p: &ParamPoint) -> Result<ParamPoint> {
        shift_params(p.spec(), p, self.shift())
    }
}

pub fn dualize(d: &IndexSet, n_top: usize) -> Result<DualIndex> {
    if let Some(max) = d.largest() {
        if n_top < max {
            return Err(Error::NTooSmall {
                n: n_top as i64,
                max: max as i64,
            });
        }
    }
    let removed: Vec<usize> = d.elems().iter().map(|&e| n_top - e).collect();
    let dbar = IndexSet((0..=n_top).filter(|e| !removed.contains(e)).collect());
    Ok(DualIndex {
        n_top,
        m: d.len(),
        dbar,
        mu: removed.iter().copied().min(),
    })
}

/// Whether `∏_j (n − e_j) ≥ 0` for every `n ≥ 0`, with `e_j` the deleted
/// levels `D̄`.
pub fn krein_adler_admissible(dual: &DualIndex) -> bool {
    let e = dual.dbar.elems();
    // for n beyond the largest level every factor is positive
    (0..=dual.dbar.largest().unwrap_or(0)).all(|n| {
        e.contains(&n) || e.iter().filter(|&&ej| ej > n).count() % 2 == 0
    })
}

/// `Ξ(x + i·up·γ) / Ξ(x + i·down·γ)`.
fn shifted_ratio(e: &EtaPoly, up: HalfInt, down: HalfInt, qb: Option<&QBase>) -> Result<Factored> {
    let r = e.embed();
    Factored::ratio(r.shift_substitute(up, qb)?, r.shift_substitute(down, qb)?)
}

/// `κ^k` for a possibly negative `k`.
fn kappa_pow(spec: &FamilySpec, p: &ParamPoint, k: i64) -> Result<GaussianRational> {
    spec.kappa(p)?.pow(k)
}

/// `V̂_D = κ^{−M} V*(x − iγ/2; λ − Mδ) · Ξ_{D′}(x + iγ/2)/Ξ_{D′}(x − iγ/2)
/// · Ξ_D(x − iγ)/Ξ_D(x)` in unreduced form, `D′ = D ∖ {max D}`.
pub fn deformed_potential_pv_factored(
    spec: &FamilySpec,
    d: &IndexSet,
    p: &ParamPoint,
) -> Result<Factored> {
    let qb = p.qbase.as_ref();
    let m = d.len() as i64;
    let lowered = shift_params(spec, p, -m)?;
    let v = potential(spec, &lowered, false)?
        .star()
        .shift(HalfInt::from_twice(-1), qb)?;
    let xi = xi_d(spec, d, p)?;
    let xi_prime = xi_d(spec, &d.without_max(), p)?;
    let r1 = shifted_ratio(&xi_prime, HalfInt::from_twice(1), HalfInt::from_twice(-1), qb)?;
    let r2 = shifted_ratio(&xi, HalfInt::int(-1), HalfInt::ZERO, qb)?;
    Ok(Factored::from_ratfunc(&v)
        .mul(r1)?
        .mul(r2)?
        .scale(&kappa_pow(spec, p, -m)?))
}

/// `(V̂_D, V̂_D*)`, see [`deformed_potential_pv_factored`].
pub fn deformed_potential_pv(
    spec: &FamilySpec,
    d: &IndexSet,
    p: &ParamPoint,
) -> Result<(RatFunc, RatFunc)> {
    let vhat = deformed_potential_pv_factored(spec, d, p)?.to_ratfunc()?;
    let star = vhat.star();
    Ok((vhat, star))
}

/// `V^KA_{D̄} = κ^{N+1−M} V(x; λ − Mδ) · Ξ̄_{D̄′}(x − iγ)/Ξ̄_{D̄′}(x)
/// · Ξ̄_{D̄}(x + iγ/2)/Ξ̄_{D̄}(x − iγ/2)` at `λ̄`, where `D̄′ = D̄ ∪ {μ}`, in
/// unreduced form.
///
/// `p` is the original point `λ`; for empty `D` there is no `μ` and the
/// first ratio is dropped.
pub fn deformed_potential_ka_factored(
    spec: &FamilySpec,
    dual: &DualIndex,
    p: &ParamPoint,
) -> Result<Factored> {
    let qb = p.qbase.as_ref();
    let m = dual.m as i64;
    let bar = dual.params(p)?;
    let v = potential(spec, &shift_params(spec, p, -m)?, false)?;
    let xi = xibar_d(spec, &dual.dbar, &bar)?;
    let mut acc = Factored::from_ratfunc(&v).mul(shifted_ratio(
        &xi,
        HalfInt::from_twice(1),
        HalfInt::from_twice(-1),
        qb,
    )?)?;
    if let Some(mu) = dual.mu {
        let prime = dual.dbar.with(mu).expect("μ is not in D̄");
        let xi_prime = xibar_d(spec, &prime, &bar)?;
        acc = acc.mul(shifted_ratio(&xi_prime, HalfInt::int(-1), HalfInt::ZERO, qb)?)?;
    }
    Ok(acc.scale(&kappa_pow(spec, p, dual.n_top as i64 + 1 - m)?))
}

/// [`deformed_potential_ka_factored`] in lowest terms.
pub fn deformed_potential_ka(spec: &FamilySpec, dual: &DualIndex, p: &ParamPoint) -> Result<RatFunc> {
    deformed_potential_ka_factored(spec, dual, p)?.to_ratfunc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{family, sample_params};

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_casoratians() {
        let k = Kind::Additive;
        assert_eq!(casoratian(&[], k, None).unwrap(), RingPoly::one(k));
        let x = RingPoly::var(k);
        assert_eq!(casoratian(&[x.clone()], k, None).unwrap(), x);
        let one = RingPoly::one(k);
        assert_eq!(casoratian(&[one, x], k, None).unwrap(), RingPoly::one(k));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ell_d(&IndexSet::empty()), 0);
        assert_eq!(ell_d(&set(&[0, 1, 2])), 0);
        assert_eq!(ell_d(&set(&[3])), 3);
    }

    #[test]
    fn dual_examples() {
        let d = dualize(&set(&[2]), 2).unwrap();
        assert_eq!(d.dbar, set(&[1, 2]));
        assert_eq!(d.mu, Some(0));
        assert_eq!(dualize(&set(&[0]), 0).unwrap().dbar, IndexSet::empty());
        assert_eq!(dualize(&set(&[1, 2]), 3).unwrap().dbar, set(&[0, 3]));
        assert_eq!(
            dualize(&set(&[4]), 3),
            Err(Error::NTooSmall { n: 3, max: 4 })
        );
    }

    #[test]
    fn admissibility_examples() {
        let dual = |dbar: &[usize]| DualIndex {
            n_top: 0,
            m: 0,
            dbar: set(dbar),
            mu: None,
        };
        assert!(krein_adler_admissible(&dual(&[0, 1, 2])));
        assert!(!krein_adler_admissible(&dual(&[1])));
        assert!(krein_adler_admissible(&dual(&[1, 2])));
        assert!(!krein_adler_admissible(&dual(&[1, 3])));
        assert!(krein_adler_admissible(&dual(&[])));
    }

    #[test]
    fn index_set_parsing() {
        assert_eq!("1,2".parse::<IndexSet>().unwrap(), set(&[1, 2]));
        assert_eq!("{3, 0}".parse::<IndexSet>().unwrap(), set(&[0, 3]));
        assert_eq!("".parse::<IndexSet>().unwrap(), IndexSet::empty());
        assert!("1,1".parse::<IndexSet>().is_err());
        assert!("a".parse::<IndexSet>().is_err());
        assert_eq!(set(&[0, 3]).to_string(), "{0,3}");
    }

    #[test]
    fn varphi_small_orders() {
        for spec in FamilySpec::all() {
            let p = sample_params(spec, 0);
            let qb = p.qbase.as_ref();
            assert_eq!(varphi_m(0, spec, qb).unwrap(), RingPoly::one(spec.kind));
            assert_eq!(varphi_m(1, spec, qb).unwrap(), RingPoly::one(spec.kind));
            if !spec.phi().is_constant() {
                assert_eq!(varphi_m(2, spec, qb).unwrap(), spec.phi());
            }
        }
    }

    #[test]
    fn xibar_of_consecutive_set_is_constant() {
        for name in ["W", "AW", "cH", "cqL"] {
            let spec = family(name).unwrap();
            let p = sample_params(spec, 3);
            for n in 1..=3 {
                let x = xibar_d(spec, &IndexSet::range(n), &p).unwrap();
                assert_eq!(x.degree(), Some(0), "{name} n={n}");
            }
        }
    }
}
