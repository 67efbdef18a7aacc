use super::*;
use crate::arith::rat;
use crate::ratfunc::RatFunc;

fn gq(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_frac(n, d)
}

fn points(seed: u64) -> Vec<ParamPoint> {
    FamilySpec::all()
        .iter()
        .map(|s| sample_params(s, seed))
        .collect()
}

/// `V(x)(P(x−iγ) − P(x)) + V*(x)(P(x+iγ) − P(x)) − E·P(x)`.
fn difference_residual(
    v: &RatFunc,
    poly: &RingPoly,
    e: &GaussianRational,
    p: &ParamPoint,
) -> RatFunc {
    let down = &shifted(poly, HalfInt::int(-1), p).unwrap() - poly;
    let up = &shifted(poly, HalfInt::int(1), p).unwrap() - poly;
    let lhs = v
        .mul_poly(&down)
        .unwrap()
        .add(&v.star().mul_poly(&up).unwrap())
        .unwrap();
    lhs.sub(&RatFunc::from_poly(poly.scale(e))).unwrap()
}

#[test]
fn registry_examples() {
    let w = family("W").unwrap();
    assert_eq!(w.kind, Kind::Additive);
    assert_eq!(w.delta, &[(1, 2); 4]);
    let p = sample_params(w, 1);
    assert!(w.kappa(&p).unwrap().is_one());

    let aw = family("AW").unwrap();
    let p = sample_params(aw, 1);
    let q = p.qbase().unwrap().q();
    assert_eq!(aw.kappa(&p).unwrap(), GaussianRational::real(q.recip()));

    assert_eq!(family("cqH").unwrap().n_params, 0);
    assert!(matches!(family("Hermite"), Err(Error::UnknownFamily(_))));
    for name in FamilyName::ALL {
        let additive = matches!(
            name,
            FamilyName::W | FamilyName::CdH | FamilyName::CH | FamilyName::MP
        );
        assert_eq!(FamilySpec::get(name).kind == Kind::Additive, additive);
        assert_eq!(name.as_str().parse::<FamilyName>().unwrap(), name);
    }
}

#[test]
fn circle_parameterization() {
    assert_eq!(circle_point(&rat(1, 2)), GaussianRational::new(rat(3, 5), rat(4, 5)));
}

#[test]
fn sampling_is_deterministic_and_typed() {
    for seed in 0..4 {
        for (a, b) in points(seed).iter().zip(points(seed)) {
            assert_eq!(a, &b);
            assert_eq!(a.values.len(), a.spec().n_params);
            assert_eq!(a.qbase.is_some(), a.spec().is_multiplicative());
            if a.family != FamilyName::MP {
                assert!(a.values.iter().all(|v| v.is_real()));
            } else {
                assert!(a.values[1].norm_sqr().is_one());
            }
        }
    }
}

#[test]
fn twist_is_an_involution() {
    for seed in 0..3 {
        for p in points(seed) {
            let spec = p.spec();
            let back = twist_params(spec, &twist_params(spec, &p).unwrap()).unwrap();
            assert_eq!(back, p, "{}", p.family);
        }
    }
}

#[test]
fn shift_composes_additively() {
    for p in points(5) {
        let spec = p.spec();
        let two = shift_params(spec, &shift_params(spec, &p, 1).unwrap(), 1).unwrap();
        assert_eq!(two, shift_params(spec, &p, 2).unwrap(), "{}", p.family);
        let back = shift_params(spec, &shift_params(spec, &p, 3).unwrap(), -3).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn alpha_prime_is_energy_at_minus_one() {
    for seed in 0..3 {
        for p in points(seed) {
            let spec = p.spec();
            let (_, alpha_prime) = twist_constants(spec, &p).unwrap();
            assert_eq!(alpha_prime, energy(spec, -1, &p).unwrap(), "{}", p.family);
        }
    }
}

#[test]
fn ground_energy_vanishes() {
    for p in points(2) {
        assert!(energy(p.spec(), 0, &p).unwrap().is_zero(), "{}", p.family);
    }
}

#[test]
fn twisted_potential_twice_returns() {
    for seed in 0..3 {
        for p in points(seed) {
            let spec = p.spec();
            let t = twist_params(spec, &p).unwrap();
            let back = potential(spec, &t, true).unwrap();
            let expect = potential(spec, &p, false).unwrap();
            // Group (B) twice-twisted potential comes back *-conjugated
            let back = if spec.inverts_base { back.star() } else { back };
            assert_eq!(back, expect, "{}", p.family);
        }
    }
}

#[test]
fn eigenpolynomial_degrees() {
    for seed in 0..2 {
        for p in points(seed) {
            let spec = p.spec();
            for n in 0..=8 {
                let e = eigen_eta(spec, n, &p).unwrap();
                assert_eq!(e.degree(), Some(n), "{} n={n}", p.family);
            }
        }
    }
}

#[test]
fn degree_cap_is_enforced() {
    let p = sample_params(family("W").unwrap(), 0);
    assert_eq!(
        eigen_poly(p.spec(), MAX_DEGREE + 1, &p),
        Err(Error::CapExceeded {
            requested: MAX_DEGREE + 1,
            cap: MAX_DEGREE
        })
    );
}

#[test]
fn eigenpolynomials_solve_the_difference_equation() {
    for p in points(11) {
        let spec = p.spec();
        let v = potential(spec, &p, false).unwrap();
        for n in 0..=6 {
            let poly = eigen_poly(spec, n, &p).unwrap();
            let e = energy(spec, n as i64, &p).unwrap();
            assert!(
                difference_residual(&v, &poly, &e, &p).is_zero(),
                "{} n={n}",
                p.family
            );
        }
    }
}

#[test]
fn wilson_first_polynomial() {
    // P_1 = (a1+a2)(a1+a3)(a1+a4) − b1·(a1² + η)
    let spec = family("W").unwrap();
    let p = ParamPoint {
        family: FamilyName::W,
        values: vec![gq(1, 2), gq(3, 4), gq(5, 3), gq(7, 5)],
        qbase: None,
        base_inverted: false,
        mp_circle: None,
        generic: true,
    };
    let a = &p.values;
    let b1 = &(&(&a[0] + &a[1]) + &a[2]) + &a[3];
    let c0 = &(&(&a[0] + &a[1]) * &(&a[0] + &a[2])) * &(&a[0] + &a[3]);
    let got = eigen_eta(spec, 1, &p).unwrap();
    let k0 = &c0 - &(&b1 * &(&a[0] * &a[0]));
    assert_eq!(got.coeffs(), &[k0, -&b1][..]);
}
