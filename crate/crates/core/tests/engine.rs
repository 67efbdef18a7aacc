use casoratia::casoratian::*;
use casoratia::eta::{proportional_eta, to_eta_basis};
use casoratia::families::{
    eigen_poly, potential, sample_params, shift_params, FamilyName, FamilySpec,
};
use casoratia::HalfInt;

fn set(v: &[usize]) -> IndexSet {
    IndexSet::new(v.to_vec()).unwrap()
}

#[test]
fn empty_and_singleton_sets() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 8);
        assert!(xi_d(spec, &IndexSet::empty(), &p).unwrap().coeffs() == [casoratia::GaussianRational::one()]);
        assert!(xibar_d(spec, &IndexSet::empty(), &p).unwrap().degree() == Some(0));
        assert_eq!(xi_d(spec, &set(&[0]), &p).unwrap().degree(), Some(0));
        let p1 = to_eta_basis(&eigen_poly(spec, 1, &p).unwrap(), spec.eta_kind).unwrap();
        assert_eq!(xibar_d(spec, &set(&[1]), &p).unwrap(), p1, "{}", spec.name);
    }
}

#[test]
fn consecutive_sets_give_constants() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 4);
        for m in 1..=4 {
            assert_eq!(xi_d(spec, &IndexSet::range(m), &p).unwrap().degree(), Some(0));
            assert_eq!(xibar_d(spec, &IndexSet::range(m), &p).unwrap().degree(), Some(0));
        }
    }
}

#[test]
fn degree_laws_at_a_generic_point() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 12);
        for d in [set(&[2]), set(&[1, 3]), set(&[0, 2, 4])] {
            let l = ell_d(&d) as usize;
            assert_eq!(xi_d(spec, &d, &p).unwrap().degree(), Some(l), "{} {d}", spec.name);
            assert_eq!(xibar_d(spec, &d, &p).unwrap().degree(), Some(l));
            for n in 0..=2 {
                let e = p_dn(spec, &d, n, &p).unwrap();
                assert_eq!(e.degree(), Some(l + d.len() + n), "{} {d} n={n}", spec.name);
            }
        }
    }
}

#[test]
fn expansion_matches_full_determinant() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 6);
        for d in [IndexSet::empty(), set(&[1]), set(&[0, 3]), set(&[1, 2, 4])] {
            for n in 0..=2 {
                assert_eq!(
                    p_dn(spec, &d, n, &p).unwrap(),
                    p_dn_direct(spec, &d, n, &p).unwrap(),
                    "{} {d} n={n}",
                    spec.name
                );
            }
        }
    }
}

#[test]
fn empty_set_eigenfunction_is_the_eigenpolynomial() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 3);
        for n in 0..=3 {
            let pn = to_eta_basis(&eigen_poly(spec, n, &p).unwrap(), spec.eta_kind).unwrap();
            let e = p_dn(spec, &IndexSet::empty(), n, &p).unwrap();
            assert!(proportional_eta(&e, &pn).verdict, "{} n={n}", spec.name);
        }
    }
}

#[test]
fn deformed_potentials_for_trivial_sets() {
    for spec in FamilySpec::all() {
        let p = sample_params(spec, 5);
        let qb = p.qbase.as_ref();
        // M = 0: V*(x − iγ/2; λ)
        let v = potential(spec, &p, false).unwrap();
        let (v0, v0_star) = deformed_potential_pv(spec, &IndexSet::empty(), &p).unwrap();
        assert_eq!(v0, v.star().shift(HalfInt::from_twice(-1), qb).unwrap());
        assert_eq!(v0_star, v0.star());
        // D = {0}: κ⁻¹ V*(x − iγ/2; λ − δ)
        let k = spec.kappa(&p).unwrap();
        let lowered = potential(spec, &shift_params(spec, &p, -1).unwrap(), false).unwrap();
        let expect = lowered
            .star()
            .shift(HalfInt::from_twice(-1), qb)
            .unwrap()
            .scale(&k.inv().unwrap());
        assert_eq!(deformed_potential_pv(spec, &set(&[0]), &p).unwrap().0, expect);
        // D = {0}, N = 0: empty D̄ and κ^{N+1−M} = 1, so V^KA = V(x; λ − δ)
        let dual = dualize(&set(&[0]), 0).unwrap();
        assert_eq!(deformed_potential_ka(spec, &dual, &p).unwrap(), lowered);
    }
}

#[test]
fn dual_sets() {
    let d = dualize(&set(&[1, 2]), 3).unwrap();
    assert_eq!(d.dbar, set(&[0, 3]));
    assert_eq!(d.mu, Some(1));
    let d = dualize(&set(&[4]), 4).unwrap();
    assert_eq!(d.dbar, set(&[1, 2, 3, 4]));
    assert!(krein_adler_admissible(&d));
    assert!(krein_adler_admissible(&dualize(&set(&[0, 1]), 3).unwrap()));
    assert!(!krein_adler_admissible(&dualize(&set(&[1]), 2).unwrap()));
    assert!(dualize(&set(&[5]), 4).is_err());
}

#[test]
fn casoratian_of_eigenpolynomials_is_divisible_by_phi() {
    let spec = FamilySpec::get(FamilyName::AW);
    let p = sample_params(spec, 9);
    let qb = p.qbase.as_ref();
    let fs: Vec<_> = [0, 2, 3].iter().map(|&k| eigen_poly(spec, k, &p).unwrap()).collect();
    let w = casoratian(&fs, spec.kind, qb).unwrap();
    assert!(w.exact_div(&varphi_m(3, spec, qb).unwrap()).is_ok());
}
