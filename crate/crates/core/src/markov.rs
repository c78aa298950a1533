//! Solutions of `x^2 + y^2 + z^2 = 3xyz` and the two-sided orbit of an ext-pair.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::chern::{euler_form, KClass};
use crate::error::{Error, Result};
use crate::picard::Surface;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkovTriple(pub [BigInt; 3]);

impl MarkovTriple {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Result<MarkovTriple> {
        let t = MarkovTriple([x.into(), y.into(), z.into()]);
        if !t.0.iter().all(Signed::is_positive) || !is_markov(&t.0) {
            return Err(Error::Domain(format!("{t} does not solve x^2 + y^2 + z^2 = 3xyz")));
        }
        Ok(t)
    }

    pub fn root() -> MarkovTriple {
        MarkovTriple([BigInt::one(), BigInt::one(), BigInt::one()])
    }

    /// The same triple in ascending order.
    pub fn sorted(&self) -> MarkovTriple {
        let mut c = self.0.clone();
        c.sort();
        MarkovTriple(c)
    }

    pub fn largest(&self) -> &BigInt {
        self.0.iter().max().unwrap()
    }
}

impl fmt::Debug for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MarkovTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

pub fn is_markov(t: &[BigInt; 3]) -> bool {
    let [x, y, z] = t;
    x * x + y * y + z * z == BigInt::from(3) * x * y * z
}

/// Vieta jump at 1-based `position`: `c -> 3ab - c`.
pub fn markov_step(t: &MarkovTriple, position: usize) -> Result<MarkovTriple> {
    if !(1..=3).contains(&position) {
        return Err(Error::InvalidInput(format!("position {position} out of range 1..=3")));
    }
    if !is_markov(&t.0) {
        return Err(Error::Domain(format!("{t} does not solve x^2 + y^2 + z^2 = 3xyz")));
    }
    let i = position - 1;
    let mut out = t.0.clone();
    let (a, b) = (&t.0[(i + 1) % 3], &t.0[(i + 2) % 3]);
    out[i] = BigInt::from(3) * a * b - &t.0[i];
    Ok(MarkovTriple(out))
}

/// All solutions with largest entry at most `limit`, as ascending triples.
pub fn markov_tree(limit: u64) -> BTreeSet<MarkovTriple> {
    let limit = BigInt::from(limit);
    let mut seen = BTreeSet::new();
    if limit < BigInt::one() {
        return seen;
    }
    let mut queue = VecDeque::from([MarkovTriple::root()]);
    seen.insert(MarkovTriple::root());
    while let Some(t) = queue.pop_front() {
        for pos in 1..=3 {
            let next = markov_step(&t, pos).expect("tree nodes are solutions").sorted();
            if *next.largest() <= limit && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// The smallest `m <= limit` that is the largest entry of two different ascending
/// triples. `None` only says that no such `m` exists up to `limit`.
pub fn uniqueness_counterexample(limit: u64) -> Option<BigInt> {
    let mut by_max: BTreeMap<BigInt, usize> = BTreeMap::new();
    for t in markov_tree(limit) {
        *by_max.entry(t.largest().clone()).or_default() += 1;
    }
    by_max.into_iter().find(|(_, n)| *n > 1).map(|(m, _)| m)
}

/// `p^2 - h p q + q^2`; non-positive exactly when `p/q` lies between the roots of `l^2 - h l + 1`.
pub fn markov_form(p: &BigInt, q: &BigInt, h: &BigInt) -> BigInt {
    p * p - h * p * q + q * q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbit {
    pub h: BigInt,
    /// Lowest index `-n`; `classes[k]` is `e_{k - n}`, running up to `e_{n+1}`.
    pub n: usize,
    pub classes: Vec<KClass>,
    /// `x_0, ..., x_{n+1}` with `x_0 = 0`, `x_1 = 1`, `x_{k+1} = h x_k - x_{k-1}`.
    pub x: Vec<BigInt>,
}

impl PairOrbit {
    pub fn get(&self, index: i64) -> Option<&KClass> {
        let k = index + self.n as i64;
        if k < 0 {
            return None;
        }
        self.classes.get(k as usize)
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n as i64)..=self.n as i64 + 1
    }
}

/// `x_0, ..., x_len-1` for the recurrence `x_{k+1} = h x_k - x_{k-1}`.
pub fn recurrence_coefficients(h: &BigInt, len: usize) -> Vec<BigInt> {
    let mut x = vec![BigInt::zero(), BigInt::one()];
    while x.len() < len {
        let k = x.len();
        let next = h * &x[k - 1] - &x[k - 2];
        x.push(next);
    }
    x.truncate(len);
    x
}

/// The classes obtained from an ext-pair `(E_0, E_1)` with `chi(E_0, E_1) = -h <= -2`
/// by repeated right mutation (`e_2, e_3, ...`) and left mutation (`e_{-1}, e_{-2}, ...`).
///
/// The first step in each direction absorbs the sign of the ext-pair:
/// `e_2 = h e_1 + e_0` and `e_{-1} = e_1 + h e_0`; afterwards consecutive pairs
/// have `chi = h` and `e_k = h e_{k-1} - e_{k-2}`, `e_{-k} = h e_{1-k} - e_{2-k}`.
pub fn pair_orbit(surface: &Surface, e0: &KClass, e1: &KClass, n: usize) -> Result<PairOrbit> {
    let one = BigInt::one();
    let e00 = euler_form(surface, e0, e0)?;
    let e11 = euler_form(surface, e1, e1)?;
    let e10 = euler_form(surface, e1, e0)?;
    if e00 != one || e11 != one || !e10.is_zero() {
        return Err(Error::NotExceptionalPair(format!(
            "chi(E0,E0) = {e00}, chi(E1,E1) = {e11}, chi(E1,E0) = {e10}"
        )));
    }
    let h = -euler_form(surface, e0, e1)?;
    if h < BigInt::from(2) {
        return Err(Error::NotExceptionalPair(format!(
            "chi(E0, E1) = {} but the orbit needs an ext-pair with chi <= -2",
            -&h
        )));
    }
    let step = |a: &KClass, b: &KClass| &a.scale(&h) - b;

    let mut forward = vec![e0.clone(), e1.clone()];
    for k in 2..=n + 1 {
        let next = if k == 2 {
            &e1.scale(&h) + e0
        } else {
            step(&forward[k - 1], &forward[k - 2])
        };
        forward.push(next);
    }
    // backward[k] = e_{-k}
    let mut backward = vec![e0.clone()];
    for k in 1..=n {
        let next = if k == 1 {
            &e0.scale(&h) + e1
        } else {
            step(&backward[k - 1], &backward[k - 2])
        };
        backward.push(next);
    }
    let mut classes: Vec<KClass> = backward[1..].iter().rev().cloned().collect();
    classes.extend(forward.into_iter().take(n + 2));
    Ok(PairOrbit {
        x: recurrence_coefficients(&h, n + 2),
        h,
        n,
        classes,
    })
}
