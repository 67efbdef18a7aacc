mod common;

use casoratia::casoratian::casoratian;
use casoratia::families::{sample_params, FamilySpec};
use casoratia::{GaussianRational, Kind, RingPoly};
use common::*;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![Just(Kind::Additive), Just(Kind::Multiplicative)]
}

fn run(t: &Tuple) {
    for (name, check) in CALCULUS_CHECKS {
        if let Err(e) = check(t) {
            panic!("{name}: {e}\n{t:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn casoratian_identities(t in kind().prop_flat_map(tuple)) {
        run(&t);
    }

    #[test]
    fn phi_laws_for_any_base(qb in qbase()) {
        for spec in FamilySpec::all() {
            let qb = spec.is_multiplicative().then_some(&qb);
            prop_assert_eq!(check_phi_laws(spec, qb, 5), Ok(()));
        }
    }
}

#[test]
fn empty_single_and_unit_entries() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 0);
        let (k, qb) = (spec.kind, p.qbase.as_ref());
        assert_eq!(casoratian(&[], k, qb).unwrap(), RingPoly::one(k));
        let f = RingPoly::from_coeffs(k, 0, vec![GaussianRational::from_int(3), GaussianRational::i()]).unwrap();
        assert_eq!(casoratian(&[f.clone()], k, qb).unwrap(), f);
    }
    let x = RingPoly::var(Kind::Additive);
    let one = RingPoly::one(Kind::Additive);
    assert_eq!(casoratian(&[one.clone(), x], Kind::Additive, None).unwrap(), one);
}

#[test]
fn fixed_stream_is_reproducible() {
    let a = fixed_tuples(Kind::Multiplicative, 5);
    let b = fixed_tuples(Kind::Multiplicative, 5);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.fs, y.fs);
        assert_eq!(x.qbase, y.qbase);
    }
}
