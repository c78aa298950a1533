//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use exceptional::chern::KClass;
use exceptional::mutation::{mutate_collection, Collection, Direction};
use exceptional::picard::{DivisorClass, Surface};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn big(n: i64) -> BigInt {
    n.into()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn cls(v: &[i64]) -> DivisorClass {
    DivisorClass::from_i64(v)
}

pub fn line(v: &[i64]) -> KClass {
    KClass::line_bundle(&cls(v))
}

pub fn surface(d: usize) -> Surface {
    Surface::generic(d).unwrap()
}

pub fn random_divisor(rng: &mut StdRng, d: usize, bound: i64) -> DivisorClass {
    cls(&(0..=d).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

/// A class with rank in `1..=max_rank` and integral `c2`.
pub fn random_class(rng: &mut StdRng, d: usize, max_rank: i64) -> KClass {
    let r = rng.gen_range(1..=max_rank);
    let c1 = random_divisor(rng, d, 12);
    let c2: i64 = rng.gen_range(-40..=40);
    let twice = c1.square() - BigInt::from(2 * c2);
    KClass::from_twice_ch2(r, c1, twice).unwrap()
}

/// `chi(O(A), O(B)) = 1 + (B - A).(B - A - K) / 2`, Riemann-Roch for a line bundle.
pub fn line_bundle_chi(surface: &Surface, a: &DivisorClass, b: &DivisorClass) -> BigInt {
    let d = b - a;
    let dk = &d - &surface.canonical_class();
    BigInt::from(1) + d.dot(&dk) / 2
}

/// The product form `r_E r_F (chi(O) + (mu(F) - mu(E))/2 + q(F) + q(E) - c1(E).c1(F)/(r_E r_F))`.
pub fn product_form_chi(surface: &Surface, e: &KClass, f: &KClass) -> BigRational {
    let h = surface.anticanonical();
    let re = BigRational::from_integer(e.rank().clone());
    let rf = BigRational::from_integer(f.rank().clone());
    let mu = |k: &KClass, r: &BigRational| BigRational::from_integer(h.dot(k.c1())) / r;
    let q = |k: &KClass, r: &BigRational| k.ch2() / r;
    let half = rat(1, 2);
    let cross = BigRational::from_integer(e.c1().dot(f.c1())) / (&re * &rf);
    &re * &rf * (rat(1, 1) + half * (mu(f, &rf) - mu(e, &re)) + q(f, &rf) + q(e, &re) - cross)
}

/// Applies `len` random valid letters to `c`.
pub fn random_walk(rng: &mut StdRng, c: &Collection, len: usize) -> Collection {
    let mut current = c.clone();
    for _ in 0..len {
        let pos = rng.gen_range(1..current.len());
        let dir = if rng.gen_bool(0.5) { Direction::Left } else { Direction::Right };
        current = mutate_collection(&current, pos, dir).unwrap();
    }
    current
}

/// Every way to cut `0..n` into consecutive blocks, as lists of block ends.
pub fn all_cuts(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n.saturating_sub(1))) {
        let mut ends = Vec::new();
        for i in 0..n - 1 {
            if mask & (1 << i) != 0 {
                ends.push(i + 1);
            }
        }
        ends.push(n);
        out.push(ends);
    }
    out
}

/// Exact lexicographic `(n/r)` vectors for brute-force HN checks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slope(pub Vec<BigRational>);

pub fn slope_of(pieces: &[(BigInt, [BigInt; 3])]) -> Slope {
    let mut r = BigInt::from(0);
    let mut n = [BigInt::from(0), BigInt::from(0), BigInt::from(0)];
    for (pr, pn) in pieces {
        r += pr;
        for i in 0..3 {
            n[i] += &pn[i];
        }
    }
    Slope(n.iter().map(|x| BigRational::new(x.clone(), r.clone())).collect())
}

/// All cuts whose blocks have strictly increasing slope from top to bottom and
/// are semistable: no proper tail of a block has larger slope than the block.
pub fn hn_oracle(pieces: &[(BigInt, [BigInt; 3])]) -> Vec<Vec<usize>> {
    let n = pieces.len();
    let mut good = Vec::new();
    for ends in all_cuts(n) {
        let mut start = 0;
        let mut prev: Option<Slope> = None;
        let mut ok = true;
        for &end in &ends {
            let block = &pieces[start..end];
            let s = slope_of(block);
            if prev.as_ref().is_some_and(|p| *p >= s) {
                ok = false;
            }
            for k in 1..block.len() {
                if slope_of(&block[k..]) > s {
                    ok = false;
                }
            }
            prev = Some(s);
            start = end;
        }
        if ok {
            good.push(ends);
        }
    }
    good
}

/// Roots by plain enumeration of all `(a; b)` with `b.b <= a^2 + 2` and `|a| <= 4`.
pub fn brute_force_roots(d: usize) -> Vec<Vec<i64>> {
    fn rec(d: usize, b: &mut Vec<i64>, budget: i64, a: i64, out: &mut Vec<Vec<i64>>) {
        if b.len() == d {
            let sq: i64 = b.iter().map(|x| x * x).sum();
            let sum: i64 = b.iter().sum();
            if a * a - sq == -2 && sum == 3 * a {
                let mut v = vec![a];
                v.extend_from_slice(b);
                out.push(v);
            }
            return;
        }
        for x in -4i64..=4 {
            if x * x <= budget {
                b.push(x);
                rec(d, b, budget - x * x, a, out);
                b.pop();
            }
        }
    }
    let mut out = Vec::new();
    for a in -4..=4 {
        rec(d, &mut Vec::new(), a * a + 2, a, &mut out);
    }
    out.sort();
    out
}

/// Closure of the simple roots under the reflections `x -> x + (x.a) a`.
pub fn weyl_orbit_roots(d: usize) -> Vec<Vec<i64>> {
    let dot = |x: &[i64], y: &[i64]| x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<i64>();
    let mut simple: Vec<Vec<i64>> = Vec::new();
    for i in 1..d {
        // e_i - e_{i+1}
        let mut v = vec![0; d + 1];
        v[i] = -1;
        v[i + 1] = 1;
        simple.push(v);
    }
    if d >= 3 {
        // h - e_1 - e_2 - e_3
        let mut v = vec![0; d + 1];
        v[0] = 1;
        v[1] = 1;
        v[2] = 1;
        v[3] = 1;
        simple.push(v);
    }
    let mut seen: std::collections::BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut frontier: Vec<Vec<i64>> = simple.clone();
    while let Some(x) = frontier.pop() {
        for a in &simple {
            let k = dot(&x, a);
            let y: Vec<i64> = x.iter().zip(a).map(|(xi, ai)| xi + k * ai).collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}
