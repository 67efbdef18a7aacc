mod common;

use casoratia::arith::{pochhammer, q_pochhammer, rat};
use casoratia::eta::{proportional, to_eta_basis};
use casoratia::{EtaKind, EtaPoly, GaussianRational, HalfInt, Kind, QBase, RatFunc, RingPoly};
use common::{coeff, qbase, ring_poly};
use num_rational::BigRational;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Additive), Just(Kind::Multiplicative)]
}

fn nonzero(kind: Kind) -> impl Strategy<Value = RingPoly> {
    ring_poly(kind).prop_filter("nonzero", |p| !p.is_zero())
}

fn eta_kind() -> impl Strategy<Value = EtaKind> {
    prop_oneof![Just(EtaKind::XSquared), Just(EtaKind::X), Just(EtaKind::CosX)]
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn pochhammer_recurrence(a in coeff(), k in 0usize..=12) {
        let kk = GaussianRational::from_int(k as i64);
        prop_assert_eq!(pochhammer(&a, k + 1), &pochhammer(&a, k) * &(&a + &kk));
    }

    #[test]
    fn q_pochhammer_recurrence(a in coeff(), q in small_rational(), k in 0usize..=12) {
        let qk = GaussianRational::real(casoratia::arith::rational_pow(&q, k as i64));
        let step = &GaussianRational::one() - &(&a * &qk);
        prop_assert_eq!(q_pochhammer(&a, &q, k + 1), &q_pochhammer(&a, &q, k) * &step);
    }

    #[test]
    fn display_and_serde_round_trip(a in coeff()) {
        prop_assert_eq!(a.to_string().parse::<GaussianRational>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<GaussianRational>(&json).unwrap(), a);
    }

    #[test]
    fn shift_is_undone_by_the_opposite_shift(
        k in kind(),
        seed in any::<u64>(),
        twice in -10i64..=10,
        qb in qbase(),
    ) {
        let p = common_poly(k, seed);
        let qb = (k == Kind::Multiplicative).then_some(&qb);
        let c = HalfInt::from_twice(twice);
        let there = p.shift_substitute(c, qb).unwrap();
        prop_assert_eq!(there.shift_substitute(HalfInt::from_twice(-twice), qb).unwrap(), p);
    }

    #[test]
    fn star_is_multiplicative_and_involutive(
        (p, q) in kind().prop_flat_map(|k| (ring_poly(k), ring_poly(k)))
    ) {
        prop_assert_eq!((&p * &q).star(), &p.star() * &q.star());
        prop_assert_eq!(p.star().star(), p);
    }

    #[test]
    fn eta_basis_inverts_the_embedding(
        k in eta_kind(),
        cs in prop::collection::vec(coeff(), 0..=11),
    ) {
        let e = EtaPoly::new(k, cs);
        let back = to_eta_basis(&e.embed(), k).unwrap();
        prop_assert_eq!(back.degree(), e.degree());
        prop_assert_eq!(back, e);
    }

    #[test]
    fn proportionality_is_an_equivalence(
        (p, c1, c2) in kind().prop_flat_map(|k| (nonzero(k), coeff(), coeff()))
    ) {
        prop_assume!(!c1.is_zero() && !c2.is_zero());
        let (q, r) = (p.scale(&c1), p.scale(&c2));
        prop_assert!(proportional(&p, &p).verdict);
        prop_assert!(proportional(&p, &q).verdict && proportional(&q, &p).verdict);
        prop_assert!(proportional(&q, &r).verdict);
        prop_assert_eq!(proportional(&q, &p).ratio, Some(c1.clone()));
        let other = &p + &RingPoly::monomial(p.kind(), GaussianRational::one(), 7);
        prop_assert_eq!(
            proportional(&p, &other).verdict,
            proportional(&p.scale(&c1), &other.scale(&c2)).verdict
        );
    }

    #[test]
    fn ratfunc_arithmetic_is_consistent(
        (a, b, c) in kind().prop_flat_map(|k| (ring_poly(k), nonzero(k), nonzero(k)))
    ) {
        let f = RatFunc::new(a.clone(), b.clone()).unwrap();
        let g = RatFunc::new(c.clone(), b.clone()).unwrap();
        let sum = f.add(&g).unwrap();
        prop_assert_eq!(sum, RatFunc::new(&a + &c, b.clone()).unwrap());
        let back = f.mul(&g).unwrap().div(&g).unwrap();
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn exact_division_recovers_the_factor(
        (p, d) in kind().prop_flat_map(|k| (ring_poly(k), nonzero(k)))
    ) {
        prop_assert_eq!((&p * &d).exact_div(&d).unwrap(), p);
    }
}

// 1000 distributivity triples.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(a in coeff(), b in coeff(), c in coeff()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
        }
    }
}

/// A deterministic polynomial with both signs of exponents.
fn common_poly(k: Kind, seed: u64) -> RingPoly {
    let low = if k == Kind::Additive { 0 } else { -3 };
    let cs = (0..6)
        .map(|j| {
            let v = seed.rotate_left(j * 9) % 13;
            GaussianRational::new(rat(v as i64 - 6, 1 + (j as i64 % 3)), rat(j as i64, 5))
        })
        .collect();
    RingPoly::from_coeffs(k, low, cs).unwrap()
}

#[test]
fn multiplicative_shift_convention() {
    // z ↦ q^{-c} z with q = s⁴: shifting z by c = 1 gives q^{-1} z
    let s = rat(1, 2);
    let qb = QBase::new(s).unwrap();
    let z = RingPoly::var(Kind::Multiplicative);
    let shifted = z.shift_substitute(HalfInt::int(1), Some(&qb)).unwrap();
    assert_eq!(shifted, z.scale(&GaussianRational::from_int(16)));
}
