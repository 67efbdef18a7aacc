//! Generators and identity checks shared by the integration tests.

#![allow(dead_code)]

use casoratia::casoratian::{casoratian, casoratian_cofactor, point_shift, varphi_m};
use casoratia::families::FamilySpec;
use casoratia::{GaussianRational, HalfInt, Kind, QBase, RingPoly};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn gq(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    GaussianRational::new(
        BigRational::new(re.0.into(), re.1.into()),
        BigRational::new(im.0.into(), im.1.into()),
    )
}

pub fn coeff() -> impl Strategy<Value = GaussianRational> {
    ((-6i64..=6, 1i64..=4), (-6i64..=6, 1i64..=4)).prop_map(|(re, im)| gq(re, im))
}

/// Polynomials of degree ≤ 4; Laurent ones span `z^{-2} … z^{2}`.
pub fn ring_poly(kind: Kind) -> impl Strategy<Value = RingPoly> {
    let low = if kind == Kind::Additive { 0 } else { -2 };
    prop::collection::vec(coeff(), 1..=5)
        .prop_map(move |cs| RingPoly::from_coeffs(kind, low, cs).unwrap())
}

pub fn qbase() -> impl Strategy<Value = QBase> {
    prop::sample::select(vec![(1, 2), (2, 3), (3, 4), (3, 5), (4, 7)])
        .prop_map(|(n, d)| QBase::new(BigRational::new(n.into(), d.into())).unwrap())
}

/// `n ≤ 4` functions plus two extra entries for the bordered identities.
#[derive(Clone, Debug)]
pub struct Tuple {
    pub kind: Kind,
    pub qbase: Option<QBase>,
    pub fs: Vec<RingPoly>,
    pub g: RingPoly,
    pub h: RingPoly,
}

pub fn tuple(kind: Kind) -> impl Strategy<Value = Tuple> {
    let qb = if kind == Kind::Additive {
        Just(None).boxed()
    } else {
        qbase().prop_map(Some).boxed()
    };
    (
        qb,
        prop::collection::vec(ring_poly(kind), 1..=4),
        ring_poly(kind),
        ring_poly(kind),
    )
        .prop_map(move |(qbase, fs, g, h)| Tuple {
            kind,
            qbase,
            fs,
            g,
            h,
        })
}

/// `count` tuples from a fixed-seed stream, identical on every run.
pub fn fixed_tuples(kind: Kind, count: usize) -> Vec<Tuple> {
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    let strat = tuple(kind);
    (0..count)
        .map(|_| strat.new_tree(&mut runner).unwrap().current())
        .collect()
}

fn w(t: &Tuple, fs: &[RingPoly]) -> RingPoly {
    casoratian(fs, t.kind, t.qbase.as_ref()).unwrap()
}

fn shifted(t: &Tuple, f: &RingPoly, c: HalfInt) -> RingPoly {
    f.shift_substitute(c, t.qbase.as_ref()).unwrap()
}

fn expect(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

/// The default determinant path agrees with cofactor expansion.
pub fn check_definition(t: &Tuple) -> Result<(), String> {
    let c = casoratian_cofactor(&t.fs, t.kind, t.qbase.as_ref()).unwrap();
    expect(w(t, &t.fs) == c, "default path differs from cofactor expansion")
}

pub fn check_conjugation(t: &Tuple) -> Result<(), String> {
    let starred: Vec<RingPoly> = t.fs.iter().map(RingPoly::star).collect();
    expect(w(t, &t.fs).star() == w(t, &starred), "W* ≠ W[f*]")
}

/// `W[g·f_1, …, g·f_n] = ∏_j g(x_j^{(n)}) · W[f_1, …, f_n]`.
pub fn check_multiplicative(t: &Tuple) -> Result<(), String> {
    let n = t.fs.len();
    let gf: Vec<RingPoly> = t.fs.iter().map(|f| &t.g * f).collect();
    let mut prod = RingPoly::one(t.kind);
    for j in 1..=n {
        prod = &prod * &shifted(t, &t.g, point_shift(n, j));
    }
    expect(w(t, &gf) == &prod * &w(t, &t.fs), "W[g f] ≠ ∏g · W[f]")
}

/// `W[W[f, g], W[f, h]] = W[f] · W[f, g, h]` with `|f| ≤ 3`.
pub fn check_jacobi(t: &Tuple) -> Result<(), String> {
    let f = &t.fs[..t.fs.len().min(3)];
    let with = |extra: &[&RingPoly]| {
        let mut v = f.to_vec();
        v.extend(extra.iter().map(|e| (*e).clone()));
        w(t, &v)
    };
    let lhs = w(t, &[with(&[&t.g]), with(&[&t.h])]);
    let rhs = &w(t, f) * &with(&[&t.g, &t.h]);
    expect(lhs == rhs, "W[W[f,g], W[f,h]] ≠ W[f]·W[f,g,h]")
}

/// `W[1, f_1, …, f_n] = W[F_1, …, F_n]` with
/// `F(x) = −i(f(x + iγ/2) − f(x − iγ/2))`.
pub fn check_unit_reduction(t: &Tuple) -> Result<(), String> {
    let mut with_one = vec![RingPoly::one(t.kind)];
    with_one.extend(t.fs.iter().cloned());
    let mi = -GaussianRational::i();
    let diffs: Vec<RingPoly> = t
        .fs
        .iter()
        .map(|f| {
            (&shifted(t, f, HalfInt::from_twice(1)) - &shifted(t, f, HalfInt::from_twice(-1)))
                .scale(&mi)
        })
        .collect();
    expect(w(t, &with_one) == w(t, &diffs), "W[1, f] ≠ W[F]")
}

pub fn check_antisymmetry(t: &Tuple) -> Result<(), String> {
    let mut fs = t.fs.clone();
    fs.push(t.g.clone());
    let base = w(t, &fs);
    let last = fs.len() - 1;
    for i in 0..last {
        let mut swapped = fs.clone();
        swapped.swap(i, last);
        if w(t, &swapped) != -&base {
            return Err(format!("swapping entries {i} and {last} did not flip the sign"));
        }
    }
    Ok(())
}

pub const CALCULUS_CHECKS: [(&str, fn(&Tuple) -> Result<(), String>); 6] = [
    ("definition", check_definition),
    ("conjugation", check_conjugation),
    ("multiplicative", check_multiplicative),
    ("jacobi", check_jacobi),
    ("unit_reduction", check_unit_reduction),
    ("antisymmetry", check_antisymmetry),
];

/// Product law `φ_{M+1} = φ_M ∏_j φ(x_j^{(M)})` and the shift law
/// `φ_M(x + iγ/2) φ_M(x − iγ/2) φ(x) = φ_{M−1}(x) φ_{M+1}(x)`, for
/// `M ≤ m_max`.
pub fn check_phi_laws(spec: &FamilySpec, qbase: Option<&QBase>, m_max: usize) -> Result<(), String> {
    let phi = spec.phi();
    let pm = |m: usize| varphi_m(m, spec, qbase).unwrap();
    for m in 0..=m_max {
        let mut prod = pm(m);
        for j in 1..=m {
            prod = &prod * &phi.shift_substitute(point_shift(m, j), qbase).unwrap();
        }
        if pm(m + 1) != prod {
            return Err(format!("{}: product law fails at M={m}", spec.name));
        }
        if m >= 1 {
            let up = pm(m).shift_substitute(HalfInt::from_twice(1), qbase).unwrap();
            let down = pm(m).shift_substitute(HalfInt::from_twice(-1), qbase).unwrap();
            if &(&up * &down) * &phi != &pm(m - 1) * &pm(m + 1) {
                return Err(format!("{}: shift law fails at M={m}", spec.name));
            }
        }
    }
    Ok(())
}
