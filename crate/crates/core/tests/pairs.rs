mod common;

use common::*;
use exceptional::chern::{euler_form, mu_h, twist};
use exceptional::mutation::basic_collection;
use exceptional::pairs::{
    classify_pair, decomposition_type, rotated_twisted, rotation_index, splitting_type, DecompositionType, PairType,
};
use exceptional::KClass;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Restriction degrees by direct floor division: `deg = a r + b`, `0 <= b < r`.
fn degree_oracle(rank: i64, degree: i64) -> Vec<i64> {
    let (a, b) = degree.div_mod_floor(&rank);
    if b == 0 {
        vec![a]
    } else {
        vec![a, a + 1]
    }
}

proptest! {
    #[test]
    fn splitting_type_recovers_rank_and_degree(r in 1i64..=40, deg in -200i64..=200) {
        let t = splitting_type(&big(r), &big(deg)).unwrap();
        prop_assert_eq!(&t.alpha + &t.beta, big(r));
        prop_assert_eq!(&t.alpha * (&t.s - 1) + &t.beta * &t.s, big(deg));
        prop_assert!(t.alpha >= big(0) && t.alpha < big(r));
        let degrees: Vec<i64> = t.degrees().iter().map(|d| i64::try_from(d).unwrap()).collect();
        prop_assert_eq!(degrees, degree_oracle(r, deg));
    }
}

#[test]
fn adjacent_pairs_of_mutated_foundations_classify_consistently() {
    let mut rng = rng(21);
    let mut seen = [0usize; 4];
    for d in 0..=6 {
        let s = surface(d);
        for _ in 0..40 {
            let c = random_walk(&mut rng, &basic_collection(&s), 8);
            let m = c.members();
            for i in 0..m.len() {
                for j in i + 1..m.len() {
                    let (e, f) = (&m[i], &m[j]);
                    if *e.rank() <= BigInt::from(0) || *f.rank() <= BigInt::from(0) {
                        continue;
                    }
                    let chi = euler_form(&s, e, f).unwrap();
                    let t = classify_pair(&s, e, f).unwrap();
                    let [h0, h1, h2] = t.dims();
                    assert_eq!(h0 - h1 + h2, chi, "{t} for {e}, {f}");
                    let slot = match t {
                        PairType::Hom(_) => 0,
                        PairType::Ext(_) => 1,
                        PairType::Zero => 2,
                        PairType::Singular => 3,
                    };
                    seen[slot] += 1;
                    if matches!(t, PairType::Zero | PairType::Singular) {
                        assert_eq!(e.rank(), f.rank());
                        assert_eq!(mu_h(&s, e).unwrap(), mu_h(&s, f).unwrap());
                    }
                }
            }
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0 && seen[2] > 0, "{seen:?}");
}

#[test]
fn reversed_pairs_are_not_exceptional() {
    let s = surface(2);
    let (o, o1) = (line(&[0, 0, 0]), line(&[1, 0, 0]));
    assert!(classify_pair(&s, &o, &o1).is_ok());
    assert!(classify_pair(&s, &o1, &o).is_err());
}

#[test]
fn rotation_matches_an_exhaustive_search() {
    let mut rng = rng(22);
    let mut checked = 0;
    for d in 1..=6 {
        let s = surface(d);
        for _ in 0..40 {
            let c = random_walk(&mut rng, &basic_collection(&s), 6);
            let mut members: Vec<KClass> = c
                .members()
                .iter()
                .filter(|m| *m.rank() > BigInt::from(0))
                .cloned()
                .collect();
            members.sort_by_key(|m| mu_h(&s, m).unwrap());
            members.dedup_by_key(|m| mu_h(&s, m).unwrap());
            let expected = (1..=members.len()).find(|&i| {
                let rotated = rotated_twisted(&s, &members, i).unwrap();
                let degrees: Vec<i64> = rotated
                    .iter()
                    .flat_map(|m| {
                        degree_oracle(i64::try_from(m.rank()).unwrap(), i64::try_from(&m.degree_on(d)).unwrap())
                    })
                    .collect();
                degrees.iter().max().unwrap() - degrees.iter().min().unwrap() <= 1
            });
            match (expected, rotation_index(&s, &members, d)) {
                (Some(i), Ok(r)) => assert_eq!(r.index, i),
                (None, Err(_)) => {}
                (e, r) => panic!("oracle {e:?} but rotation_index gave {r:?}"),
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 240);
}

#[test]
fn rotation_twists_the_wrapped_members() {
    let s = surface(1);
    let members = vec![line(&[0, 0]), line(&[1, 0]), line(&[2, 0])];
    let out = rotated_twisted(&s, &members, 2).unwrap();
    assert_eq!(out[2], twist(&members[0], &s.anticanonical()).unwrap());
    assert!(rotated_twisted(&s, &members, 4).is_err());
}

#[test]
fn decomposition_types_on_line_bundles() {
    let s = surface(1);
    let a = line(&[0, 0]);
    assert_eq!(decomposition_type(&s, &a, &line(&[0, -1]), 1).unwrap(), DecompositionType::ZeroType);
    assert_eq!(decomposition_type(&s, &a, &line(&[0, -2]), 1).unwrap(), DecompositionType::Other);
    // rank 2 with degrees {-1, 0} against degree 1
    let b = KClass::from_twice_ch2(2, cls(&[0, -1]), big(-1)).unwrap();
    assert_eq!(decomposition_type(&s, &b, &line(&[0, 1]), 1).unwrap(), DecompositionType::FirstType);
    assert_eq!(decomposition_type(&s, &b, &line(&[0, 2]), 1).unwrap(), DecompositionType::Other);
}
