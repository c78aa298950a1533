//! Types of numerically exceptional pairs and restriction data on an exceptional curve.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::chern::{euler_form, mu_h, twist, KClass};
use crate::error::{Error, Result};
use crate::picard::{DivisorClass, Surface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairType {
    Hom(BigInt),
    Ext(BigInt),
    Zero,
    Singular,
}

impl PairType {
    pub fn name(&self) -> &'static str {
        match self {
            PairType::Hom(_) => "hom",
            PairType::Ext(_) => "ext",
            PairType::Zero => "zero",
            PairType::Singular => "singular",
        }
    }

    /// `(dim Hom, dim Ext^1, dim Ext^2)` from E to F.
    pub fn dims(&self) -> [BigInt; 3] {
        let z = BigInt::zero;
        match self {
            PairType::Hom(k) => [k.clone(), z(), z()],
            PairType::Ext(k) => [z(), k.clone(), z()],
            PairType::Zero => [z(), z(), z()],
            PairType::Singular => [1.into(), 1.into(), z()],
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairType::Hom(k) => write!(f, "hom({k})"),
            PairType::Ext(k) => write!(f, "ext({k})"),
            PairType::Zero => write!(f, "zero"),
            PairType::Singular => write!(f, "singular"),
        }
    }
}

/// `chi(E,E) = chi(F,F) = 1` and `chi(F,E) = 0`.
pub fn check_exceptional_pair(surface: &Surface, e: &KClass, f: &KClass) -> Result<()> {
    let one = BigInt::from(1);
    let ee = euler_form(surface, e, e)?;
    if ee != one {
        return Err(Error::NotExceptionalPair(format!("chi(E, E) = {ee} for E = {e}")));
    }
    let ff = euler_form(surface, f, f)?;
    if ff != one {
        return Err(Error::NotExceptionalPair(format!("chi(F, F) = {ff} for F = {f}")));
    }
    let fe = euler_form(surface, f, e)?;
    if !fe.is_zero() {
        return Err(Error::NotExceptionalPair(format!("chi(F, E) = {fe}, expected 0")));
    }
    Ok(())
}

pub fn classify_pair(surface: &Surface, e: &KClass, f: &KClass) -> Result<PairType> {
    check_exceptional_pair(surface, e, f)?;
    if !e.rank().is_positive() || !f.rank().is_positive() {
        return Err(Error::NotExceptionalPair(format!(
            "pair classification needs positive ranks, got {} and {}",
            e.rank(),
            f.rank()
        )));
    }
    let chi = euler_form(surface, e, f)?;
    let (mu_e, mu_f) = (mu_h(surface, e)?, mu_h(surface, f)?);
    if mu_e != mu_f {
        let expect_hom = mu_e < mu_f;
        return match (expect_hom, chi.sign()) {
            (true, num_bigint::Sign::Plus) => Ok(PairType::Hom(chi)),
            (false, num_bigint::Sign::Minus) => Ok(PairType::Ext(-chi)),
            _ => Err(Error::Invariant(format!(
                "chi(E, F) = {chi} contradicts the slope order of {e} and {f}"
            ))),
        };
    }
    if e.rank() != f.rank() {
        return Err(Error::Invariant(format!(
            "equal slopes with ranks {} and {}",
            e.rank(),
            f.rank()
        )));
    }
    let c = f.c1() - e.c1();
    if c.is_zero() {
        return Err(Error::InvalidInput(format!(
            "E and F have identical first Chern classes {}",
            e.c1()
        )));
    }
    if !surface.is_root(&c) {
        return Err(Error::Invariant(format!(
            "equal slopes but C = {c} has C^2 = {} and C.K = {}",
            c.square(),
            c.dot(&surface.canonical_class())
        )));
    }
    if surface.is_connected_effective_root(&c)? {
        Ok(PairType::Singular)
    } else {
        Ok(PairType::Zero)
    }
}

/// `E|_e = alpha O_e(s-1) + beta O_e(s)` with `beta = r - alpha >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    #[serde(with = "crate::json::bigint")]
    pub alpha: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub beta: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub s: BigInt,
}

impl SplittingType {
    /// The degrees that occur with nonzero multiplicity, ascending.
    pub fn degrees(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(2);
        if self.alpha.is_positive() {
            out.push(&self.s - 1);
        }
        out.push(self.s.clone());
        out
    }

    pub fn multiplicity(&self, degree: &BigInt) -> BigInt {
        if *degree == self.s {
            self.beta.clone()
        } else if *degree == &self.s - 1 {
            self.alpha.clone()
        } else {
            BigInt::zero()
        }
    }
}

pub fn splitting_type(rank: &BigInt, degree: &BigInt) -> Result<SplittingType> {
    if !rank.is_positive() {
        return Err(Error::Domain(format!("splitting type needs rank >= 1, got {rank}")));
    }
    let s = degree.div_ceil(rank);
    let alpha = rank * &s - degree;
    let beta = rank - &alpha;
    Ok(SplittingType { alpha, beta, s })
}

fn class_splitting(surface: &Surface, e: &KClass, e_index: usize) -> Result<SplittingType> {
    surface.exceptional_curve(e_index)?;
    surface.check(e.c1())?;
    splitting_type(e.rank(), &e.degree_on(e_index))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionType {
    ZeroType,
    FirstType,
    Other,
}

pub fn decomposition_type(
    surface: &Surface,
    e: &KClass,
    f: &KClass,
    e_index: usize,
) -> Result<DecompositionType> {
    let se = class_splitting(surface, e, e_index)?;
    let sf = class_splitting(surface, f, e_index)?;
    let de = se.degrees();
    let df = sf.degrees();
    let lo = de.iter().chain(&df).min().unwrap();
    let hi = de.iter().chain(&df).max().unwrap();
    if hi - lo <= BigInt::from(1) {
        return Ok(DecompositionType::ZeroType);
    }
    let s = de[0].clone();
    let first = de.iter().all(|x| *x == s || *x == &s + 1)
        && df.iter().all(|x| *x == &s + 1 || *x == &s + 2)
        && se.multiplicity(&s).is_positive()
        && sf.multiplicity(&(&s + 2)).is_positive();
    Ok(if first {
        DecompositionType::FirstType
    } else {
        DecompositionType::Other
    })
}

/// Restriction degrees of a list, all within `{low, low + 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rotation {
    /// 1-based position of the new first member.
    pub index: usize,
    pub low: BigInt,
}

/// `(E_i, ..., E_m, E_1(-K), ..., E_{i-1}(-K))`.
pub fn rotated_twisted(surface: &Surface, classes: &[KClass], i: usize) -> Result<Vec<KClass>> {
    if !(1..=classes.len()).contains(&i) {
        return Err(Error::InvalidInput(format!(
            "rotation index {i} out of range 1..={}",
            classes.len()
        )));
    }
    let h = surface.anticanonical();
    let mut out: Vec<KClass> = classes[i - 1..].to_vec();
    for c in &classes[..i - 1] {
        out.push(twist(c, &h)?);
    }
    Ok(out)
}

fn degree_window(surface: &Surface, classes: &[KClass], e_index: usize) -> Result<Option<BigInt>> {
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in classes {
        for deg in class_splitting(surface, c, e_index)?.degrees() {
            if lo.as_ref().is_none_or(|l| deg < *l) {
                lo = Some(deg.clone());
            }
            if hi.as_ref().is_none_or(|h| deg > *h) {
                hi = Some(deg);
            }
        }
    }
    Ok(match (lo, hi) {
        (Some(lo), Some(hi)) if &hi - &lo <= BigInt::from(1) => Some(lo),
        _ => None,
    })
}

pub fn rotation_index(surface: &Surface, classes: &[KClass], e_index: usize) -> Result<Rotation> {
    if classes.is_empty() {
        return Err(Error::InvalidInput("rotation of an empty list".into()));
    }
    for c in classes {
        if !c.rank().is_positive() {
            return Err(Error::Domain(format!("rotation needs positive ranks, got {c}")));
        }
    }
    for (i, w) in classes.windows(2).enumerate() {
        if mu_h(surface, &w[0])? >= mu_h(surface, &w[1])? {
            return Err(Error::Domain(format!(
                "slopes must increase strictly; members {} and {} do not",
                i + 1,
                i + 2
            )));
        }
    }
    for i in 1..=classes.len() {
        let rotated = rotated_twisted(surface, classes, i)?;
        if let Some(low) = degree_window(surface, &rotated, e_index)? {
            return Ok(Rotation { index: i, low });
        }
    }
    Err(Error::NoZeroTypeRotation)
}

/// The difference class `c1(F) - c1(E)` used for equal-slope pairs.
pub fn difference_class(e: &KClass, f: &KClass) -> DivisorClass {
    f.c1() - e.c1()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(v)
    }

    fn line(v: &[i64]) -> KClass {
        KClass::line_bundle(&cls(v))
    }

    fn big(n: i64) -> BigInt {
        n.into()
    }

    #[test]
    fn hom_pair_on_one_blowup() {
        let s = Surface::generic(1).unwrap();
        let t = classify_pair(&s, &line(&[0, 0]), &line(&[1, 0])).unwrap();
        assert_eq!(t, PairType::Hom(big(3)));
        assert_eq!(t.dims(), [big(3), big(0), big(0)]);
    }

    #[test]
    fn ext_pair_on_one_blowup() {
        let s = Surface::generic(1).unwrap();
        // h - e1 and e1
        let t = classify_pair(&s, &line(&[1, 1]), &line(&[0, -1])).unwrap();
        assert_eq!(t, PairType::Ext(big(1)));
    }

    #[test]
    fn singular_and_zero_pairs() {
        let s2 = Surface::new(2, vec![cls(&[0, -1, 1])]).unwrap();
        let t = classify_pair(&s2, &line(&[0, 0, 0]), &line(&[0, -1, 1])).unwrap();
        assert_eq!(t, PairType::Singular);
        assert_eq!(t.dims(), [big(1), big(1), big(0)]);

        let s3 = Surface::new(3, vec![cls(&[0, -1, 1, 0]), cls(&[0, -1, 0, 1])]).unwrap();
        let t = classify_pair(&s3, &line(&[0, -1, 1, 0]), &line(&[0, -1, 0, 1])).unwrap();
        assert_eq!(t, PairType::Zero);
    }

    #[test]
    fn reversed_hom_pair_is_not_exceptional() {
        let s = Surface::generic(1).unwrap();
        let err = classify_pair(&s, &line(&[1, 0]), &line(&[0, 0])).unwrap_err();
        assert!(matches!(err, Error::NotExceptionalPair(_)));
    }

    #[test]
    fn identical_classes_are_rejected() {
        let s = Surface::generic(1).unwrap();
        let o = line(&[0, 0]);
        assert!(classify_pair(&s, &o, &o).is_err());
    }

    #[test]
    fn splitting_examples() {
        let t = splitting_type(&big(2), &big(-1)).unwrap();
        assert_eq!((t.alpha.clone(), t.s.clone()), (big(1), big(0)));
        assert_eq!(t.degrees(), vec![big(-1), big(0)]);
        let t = splitting_type(&big(3), &big(0)).unwrap();
        assert_eq!((t.alpha.clone(), t.s.clone()), (big(0), big(0)));
        assert_eq!(t.degrees(), vec![big(0)]);
        let t = splitting_type(&big(2), &big(-3)).unwrap();
        assert_eq!((t.alpha, t.s), (big(1), big(-1)));
        assert!(splitting_type(&big(0), &big(1)).is_err());
    }

    #[test]
    fn splitting_round_trip() {
        for r in 1..=64i64 {
            for deg in -256..=256i64 {
                let t = splitting_type(&big(r), &big(deg)).unwrap();
                assert!(!t.alpha.is_negative() && t.alpha < big(r));
                assert_eq!(&t.alpha * (&t.s - 1) + (big(r) - &t.alpha) * &t.s, big(deg));
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let s = Surface::generic(1).unwrap();
        // Only (rank, degree on e1) matter here.
        let with = |r: i64, deg: i64| KClass::from_twice_ch2(r, cls(&[0, deg]), big(-deg * deg)).unwrap();
        assert_eq!(
            decomposition_type(&s, &with(1, 0), &with(2, 1), 1).unwrap(),
            DecompositionType::ZeroType
        );
        // O(0)+O(1) against O(1)+O(2)
        assert_eq!(
            decomposition_type(&s, &with(2, 1), &with(2, 3), 1).unwrap(),
            DecompositionType::FirstType
        );
        // degrees 0 and 3
        assert_eq!(
            decomposition_type(&s, &with(1, 0), &with(1, 3), 1).unwrap(),
            DecompositionType::Other
        );
        let zero = KClass::zero(1);
        assert!(decomposition_type(&s, &zero, &with(1, 0), 1).is_err());
    }

    #[test]
    fn rotation_examples() {
        let s = Surface::generic(1).unwrap();
        let list = [line(&[0, -1]), line(&[1, 0])];
        assert_eq!(rotation_index(&s, &list, 1).unwrap(), Rotation { index: 1, low: big(-1) });

        // Degrees (-1, 1): the first member twisted by -K moves to degree 0.
        let list = [line(&[0, -1]), line(&[2, 1])];
        let rot = rotation_index(&s, &list, 1).unwrap();
        assert_eq!(rot, Rotation { index: 2, low: big(0) });
        let rotated = rotated_twisted(&s, &list, 2).unwrap();
        assert_eq!(rotated[1], line(&[3, 0]));
    }

    #[test]
    fn rotation_needs_increasing_slopes() {
        let s = Surface::generic(1).unwrap();
        let list = [line(&[1, 0]), line(&[0, 0])];
        assert!(matches!(rotation_index(&s, &list, 1), Err(Error::Domain(_))));
    }
}
