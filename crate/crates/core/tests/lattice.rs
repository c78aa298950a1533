mod common;

use common::*;
use exceptional::chern::{dual_class, euler_form, mu_h, slope_mu, twist, KClass};
use exceptional::picard::{DivisorClass, Surface};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn divisor(d: usize) -> impl Strategy<Value = DivisorClass> {
    prop::collection::vec(-15i64..=15, d + 1).prop_map(|v| cls(&v))
}

fn class(d: usize, ranks: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = KClass> {
    (ranks, divisor(d), -30i64..=30).prop_map(|(r, c1, c2)| {
        let twice = c1.square() - BigInt::from(2 * c2);
        KClass::from_twice_ch2(r, c1, twice).unwrap()
    })
}

fn surface_and_classes() -> impl Strategy<Value = (Surface, KClass, KClass, DivisorClass)> {
    (0usize..=8).prop_flat_map(|d| {
        (
            Just(surface(d)),
            class(d, -6..=6),
            class(d, -6..=6),
            divisor(d),
        )
    })
}

proptest! {
    #[test]
    fn intersection_is_symmetric_and_bilinear(d in 0usize..=8, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (a, b, c) = (random_divisor(&mut rng, d, 9), random_divisor(&mut rng, d, 9), random_divisor(&mut rng, d, 9));
        prop_assert_eq!(a.dot(&b), b.dot(&a));
        prop_assert_eq!((&a + &b).dot(&c), a.dot(&c) + b.dot(&c));
    }

    #[test]
    fn asymmetry_identity((s, e, f, _) in surface_and_classes()) {
        let h = s.anticanonical();
        let lhs = euler_form(&s, &e, &f).unwrap() - euler_form(&s, &f, &e).unwrap();
        let rhs = h.dot(&(&f.c1().scale(e.rank()) - &e.c1().scale(f.rank())));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn serre_pairing((s, e, f, _) in surface_and_classes()) {
        let ek = twist(&e, &s.canonical_class()).unwrap();
        prop_assert_eq!(euler_form(&s, &e, &f).unwrap(), euler_form(&s, &f, &ek).unwrap());
    }

    #[test]
    fn twist_keeps_integrality_and_shifts_slopes((s, e, f, d) in surface_and_classes()) {
        let t = twist(&e, &d).unwrap();
        // from_twice_ch2 re-validates c2
        prop_assert!(KClass::from_twice_ch2(t.rank().clone(), t.c1().clone(), t.twice_ch2().clone()).is_ok());
        if *e.rank() != BigInt::from(0) {
            let line = KClass::line_bundle(&d);
            let h = s.anticanonical();
            prop_assert_eq!(
                slope_mu(&s, &t, &h).unwrap(),
                slope_mu(&s, &e, &h).unwrap() + slope_mu(&s, &line, &h).unwrap()
            );
        }
        let u = twist(&f, &d).unwrap();
        prop_assert_eq!(euler_form(&s, &t, &u).unwrap(), euler_form(&s, &e, &f).unwrap());
    }

    #[test]
    fn product_form_agrees((s, e, f, _) in surface_and_classes()) {
        prop_assume!(*e.rank() > BigInt::from(0) && *f.rank() > BigInt::from(0));
        let chi = BigRational::from_integer(euler_form(&s, &e, &f).unwrap());
        prop_assert_eq!(chi, product_form_chi(&s, &e, &f));
    }

    #[test]
    fn dual_negates_slope((s, e, _, _) in surface_and_classes()) {
        prop_assume!(*e.rank() != BigInt::from(0));
        prop_assert_eq!(mu_h(&s, &dual_class(&e)).unwrap(), -mu_h(&s, &e).unwrap());
    }

    #[test]
    fn json_round_trip((_s, e, _, _) in surface_and_classes()) {
        let text = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<KClass>(&text).unwrap(), e);
    }
}

#[test]
fn exceptional_classes_satisfy_the_discriminant_identity() {
    let mut rng = rng(11);
    for d in 0..=3 {
        let base = exceptional::mutation::basic_collection(&surface(d));
        for _ in 0..50 {
            let c = random_walk(&mut rng, &base, 6);
            for e in c.members().iter().filter(|e| *e.rank() > BigInt::from(0)) {
                let r = BigRational::from_integer(e.rank().clone());
                let c1sq = BigRational::from_integer(e.c1().square());
                let expected = (( c1sq + rat(1, 1)) / (&r * &r) - rat(1, 1)) * rat(1, 2);
                assert_eq!(e.q().unwrap(), expected, "{e}");
            }
        }
    }
}

#[test]
fn plane_euler_form_matches_monomial_counts() {
    // h^0(O(k)) = (k+1)(k+2)/2 and higher cohomology vanishes for k >= 0
    let p2 = surface(0);
    let o = line(&[0]);
    for k in 0..10i64 {
        let chi = euler_form(&p2, &o, &line(&[k])).unwrap();
        assert_eq!(chi, big((k + 1) * (k + 2) / 2));
    }
}

#[test]
fn line_bundle_riemann_roch() {
    let mut rng = rng(12);
    for d in 0..=8 {
        let s = surface(d);
        for _ in 0..100 {
            let (a, b) = (random_divisor(&mut rng, d, 6), random_divisor(&mut rng, d, 6));
            let chi = euler_form(&s, &KClass::line_bundle(&a), &KClass::line_bundle(&b)).unwrap();
            assert_eq!(chi, line_bundle_chi(&s, &a, &b));
        }
    }
}

#[test]
fn roots_are_orthogonal_to_k_with_square_minus_two() {
    for d in 0..=8 {
        let s = surface(d);
        for r in s.enumerate_roots() {
            assert!(s.is_root(&r));
            assert_eq!(r.square(), big(-2));
        }
    }
}

#[test]
fn effective_roots_need_connected_support() {
    // two orthogonal effective roots: their sum is not a root, each one is connected
    let a = cls(&[0, -1, 1, 0, 0]);
    let b = cls(&[0, 0, 0, -1, 1]);
    let s = Surface::new(4, vec![a.clone(), b.clone()]).unwrap();
    assert!(s.is_connected_effective_root(&a).unwrap());
    assert!(s.is_connected_effective_root(&b).unwrap());
    assert_eq!((&a + &b).square(), big(-4));
}

#[test]
fn e8_surface_root_json() {
    let s: Surface = serde_json::from_str(r#"{"blowups":8,"effective_roots":[[1,1,1,1,0,0,0,0,0]]}"#).unwrap();
    assert_eq!(s.k_squared(), big(1));
    assert_eq!(s.effective_roots().len(), 1);
    assert!(serde_json::from_str::<Surface>(r#"{"blowups":2,"effective_roots":[[1,1,1]]}"#).is_err());
}
