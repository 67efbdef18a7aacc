//! Terminating hypergeometric sums for the eigenpolynomials, built directly
//! in the η basis.
//!
//! Each term `(a_1 + ix)_k (a_1 − ix)_k` (or its q-analogue) is a product of
//! factors linear in η, and the prefactor Pochhammer symbols are absorbed
//! into the sum as `(b)_n/(b)_k = (b+k)_{n−k}`, so every coefficient stays a
//! finite product even where the lower parameters hit a pole.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use num_rational::BigRational;
use num_traits::One;

use super::{b1, b4, twist_params, FamilyName, FamilySpec, ParamPoint};
use crate::arith::{pochhammer, q_pochhammer, GaussianRational as GQ};
use crate::error::{Error, Result};
use crate::eta::{EtaKind, EtaPoly};
use crate::poly::RingPoly;

/// Largest degree the builders accept.
pub const MAX_DEGREE: usize = 16;

fn int(n: i64) -> GQ {
    GQ::from_int(n)
}

fn factorial(k: usize) -> GQ {
    pochhammer(&GQ::one(), k)
}

/// `Σ_k (−n)_k ∏(u)_k / k! · ∏(b+k)_{n−k} · arg^k · ∏_{m<k} L_m(η)`, where
/// `L_m = (a+m)² + η` when `quadratic`, else `a + m + iη`.
struct AdditiveSeries<'a> {
    n: usize,
    upper: &'a [GQ],
    absorbed: &'a [GQ],
    arg: GQ,
    a: &'a GQ,
    quadratic: bool,
}

impl AdditiveSeries<'_> {
    fn eval(&self, kind: EtaKind) -> EtaPoly {
        let n = self.n;
        let mut acc = EtaPoly::zero(kind);
        let mut prod = EtaPoly::one(kind);
        let minus_n = int(-(n as i64));
        let mut arg_pow = GQ::one();
        for k in 0..=n {
            let mut c = pochhammer(&minus_n, k);
            for u in self.upper {
                c = &c * &pochhammer(u, k);
            }
            for b in self.absorbed {
                c = &c * &pochhammer(&(b + &int(k as i64)), n - k);
            }
            c = &c * &arg_pow;
            c = c.checked_div(&factorial(k)).expect("k! is nonzero");
            if !c.is_zero() {
                acc = &acc + &prod.scale(&c);
            }
            if k < n {
                let am = self.a + &int(k as i64);
                let factor = if self.quadratic {
                    EtaPoly::linear(kind, &am * &am, GQ::one())
                } else {
                    EtaPoly::linear(kind, am, GQ::i())
                };
                prod = &prod * &factor;
                arg_pow = &arg_pow * &self.arg;
            }
        }
        acc
    }
}

/// `Σ_k (q^{−n};q)_k ∏(u;q)_k / ((q;q)_k ∏(d;q)_k) · q^k · ∏(b q^k;q)_{n−k}
///  · ∏_{m<k}(1 + a²q^{2m} − 2a q^m η)`.
struct QSeries<'a> {
    n: usize,
    q: &'a BigRational,
    upper: &'a [GQ],
    absorbed: &'a [GQ],
    divided: &'a [GQ],
    a: &'a GQ,
}

impl QSeries<'_> {
    fn eval(&self) -> Result<EtaPoly> {
        let kind = EtaKind::CosX;
        let n = self.n;
        let q = self.q;
        let qg = GQ::real(q.clone());
        let q_minus_n = GQ::real(crate::arith::rational_pow(q, -(n as i64)));
        let mut acc = EtaPoly::zero(kind);
        let mut prod = EtaPoly::one(kind);
        let mut qk = GQ::one();
        let mut a_qm = self.a.clone();
        for k in 0..=n {
            let mut c = q_pochhammer(&q_minus_n, q, k);
            for u in self.upper {
                c = &c * &q_pochhammer(u, q, k);
            }
            for b in self.absorbed {
                c = &c * &q_pochhammer(&(b * &qk), q, n - k);
            }
            let mut den = q_pochhammer(&qg, q, k);
            for d in self.divided {
                den = &den * &q_pochhammer(d, q, k);
            }
            c = (&c * &qk).checked_div(&den)?;
            if !c.is_zero() {
                acc = &acc + &prod.scale(&c);
            }
            if k < n {
                // 1 + a²q^{2m} − 2a q^m η
                let factor = EtaPoly::linear(
                    kind,
                    &GQ::one() + &(&a_qm * &a_qm),
                    -(&a_qm * &int(2)),
                );
                prod = &prod * &factor;
                qk = &qk * &qg;
                a_qm = &a_qm * &qg;
            }
        }
        Ok(acc)
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::CapExceeded {
            requested: n,
            cap: MAX_DEGREE,
        });
    }
    Ok(())
}

/// `P_n(η; λ)` in the η basis.
pub fn eigen_eta(spec: &FamilySpec, n: usize, p: &ParamPoint) -> Result<EtaPoly> {
    check_cap(n)?;
    let kind = spec.eta_kind;
    let nn = int(n as i64);
    let one = GQ::one();
    match spec.name {
        FamilyName::W => {
            let a = &p.values;
            let upper = [&(&nn + &b1(spec, p)) - &one];
            let absorbed: Vec<GQ> = (1..4).map(|j| &a[0] + &a[j]).collect();
            Ok(AdditiveSeries {
                n,
                upper: &upper,
                absorbed: &absorbed,
                arg: one,
                a: &a[0],
                quadratic: true,
            }
            .eval(kind))
        }
        FamilyName::CdH => {
            let a = &p.values;
            let absorbed: Vec<GQ> = (1..3).map(|j| &a[0] + &a[j]).collect();
            Ok(AdditiveSeries {
                n,
                upper: &[],
                absorbed: &absorbed,
                arg: one,
                a: &a[0],
                quadratic: true,
            }
            .eval(kind))
        }
        FamilyName::CH => {
            let a = &p.values;
            let upper = [&(&nn + &b1(spec, p)) - &one];
            let absorbed = [&a[0] + &a[0].conj(), &a[0] + &a[1].conj()];
            let sum = AdditiveSeries {
                n,
                upper: &upper,
                absorbed: &absorbed,
                arg: one,
                a: &a[0],
                quadratic: false,
            }
            .eval(kind);
            let pre = GQ::i_pow(n as i64).checked_div(&factorial(n))?;
            Ok(sum.scale(&pre))
        }
        FamilyName::MP => {
            let a = &p.values[0];
            let w = &p.values[1];
            let wc = w.conj();
            let arg = &one - &(&wc * &wc);
            let absorbed = [a + a];
            let sum = AdditiveSeries {
                n,
                upper: &[],
                absorbed: &absorbed,
                arg,
                a,
                quadratic: false,
            }
            .eval(kind);
            let pre = w.pow(n as i64)?.checked_div(&factorial(n))?;
            Ok(sum.scale(&pre))
        }
        FamilyName::AW | FamilyName::CdqH | FamilyName::ASC | FamilyName::CbqH => {
            let q = p.eff_q()?;
            let a = &p.values;
            let upper = [&b4(p) * &GQ::real(crate::arith::rational_pow(&q, n as i64 - 1))];
            let upper: &[GQ] = if spec.name == FamilyName::AW {
                &upper
            } else {
                &[]
            };
            let absorbed: Vec<GQ> = (1..a.len()).map(|j| &a[0] * &a[j]).collect();
            let sum = QSeries {
                n,
                q: &q,
                upper,
                absorbed: &absorbed,
                divided: &[],
                a: &a[0],
            }
            .eval()?;
            Ok(sum.scale(&a[0].pow(-(n as i64))?))
        }
        FamilyName::CqJ => {
            let (al, be) = (p.real_value(0), p.real_value(1));
            let q = p.eff_q()?;
            let qp = |r: BigRational| p.eff_q_pow(&r).map(GQ::real);
            let half = BigRational::new(1.into(), 2.into());
            let one_r = BigRational::one();
            let upper = [qp(BigRational::from_integer((n as i64).into()) + al + be + &one_r)?];
            let absorbed = [qp(al + &one_r)?];
            let divided = [
                -qp((al + be + &one_r) * &half)?,
                -qp((al + be + &one_r + &one_r) * &half)?,
            ];
            let a = qp((al + &half) * &half)?;
            let sum = QSeries {
                n,
                q: &q,
                upper: &upper,
                absorbed: &absorbed,
                divided: &divided,
                a: &a,
            }
            .eval()?;
            let qq = GQ::real(q.clone());
            Ok(sum.scale(&q_pochhammer(&qq, &q, n).inv()?))
        }
        FamilyName::CqL => {
            let al = p.real_value(0);
            let q = p.eff_q()?;
            let half = BigRational::new(1.into(), 2.into());
            let one_r = BigRational::one();
            let absorbed = [GQ::real(p.eff_q_pow(&(al + &one_r))?)];
            let a = GQ::real(p.eff_q_pow(&((al + &half) * &half))?);
            let sum = QSeries {
                n,
                q: &q,
                upper: &[],
                absorbed: &absorbed,
                divided: &[],
                a: &a,
            }
            .eval()?;
            let qq = GQ::real(q.clone());
            Ok(sum.scale(&q_pochhammer(&qq, &q, n).inv()?))
        }
        FamilyName::CqH => {
            // H_n = Σ_k [n choose k]_q z^{n−2k}
            let q = p.eff_q()?;
            let qq = GQ::real(q.clone());
            let mut ring = RingPoly::zero(spec.kind);
            let qn = q_pochhammer(&qq, &q, n);
            for k in 0..=n {
                let binom = qn.checked_div(
                    &(&q_pochhammer(&qq, &q, k) * &q_pochhammer(&qq, &q, n - k)),
                )?;
                ring = &ring + &RingPoly::monomial(spec.kind, binom, n as i64 - 2 * k as i64);
            }
            crate::eta::to_eta_basis(&ring, kind)
        }
    }
}

const MEMO_CAP: usize = 4096;

static POLY_MEMO: LazyLock<Mutex<HashMap<(usize, ParamPoint), RingPoly>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `P̌_n(x; λ)` in the family's ring.
pub fn eigen_poly(spec: &FamilySpec, n: usize, p: &ParamPoint) -> Result<RingPoly> {
    let key = (n, p.clone());
    if let Some(r) = POLY_MEMO.lock().expect("memo lock").get(&key) {
        return Ok(r.clone());
    }
    let r = eigen_eta(spec, n, p)?.embed();
    let mut memo = POLY_MEMO.lock().expect("memo lock");
    if memo.len() >= MEMO_CAP {
        memo.clear();
    }
    memo.insert(key, r.clone());
    Ok(r)
}

/// `ξ_v(η; λ) = P_v(η; 𝔱(λ))` (with `q⁻¹` for Group (B)).
pub fn pseudo_eta(spec: &FamilySpec, v: usize, p: &ParamPoint) -> Result<EtaPoly> {
    eigen_eta(spec, v, &twist_params(spec, p)?)
}

pub fn pseudo_poly(spec: &FamilySpec, v: usize, p: &ParamPoint) -> Result<RingPoly> {
    eigen_poly(spec, v, &twist_params(spec, p)?)
}
