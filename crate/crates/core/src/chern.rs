//! Numerical K-theory classes `(r, c1, ch2)` and the Euler pairing.
//!
//! `ch2` is always a half-integer (`ch2 = c1^2/2 - c2`), so a class stores
//! `2 ch2` as an integer. That value is also the discriminant
//! `Delta = c1^2 - 2 c2` in the slope-vector sense.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::picard::{DivisorClass, Surface};
use crate::stability::SlopeVector;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KClassRepr", into = "KClassRepr")]
pub struct KClass {
    rank: BigInt,
    c1: DivisorClass,
    twice_ch2: BigInt,
}

#[derive(Serialize, Deserialize)]
struct KClassRepr {
    #[serde(with = "json::bigint")]
    r: BigInt,
    c1: DivisorClass,
    #[serde(with = "json::rational")]
    ch2: BigRational,
}

impl TryFrom<KClassRepr> for KClass {
    type Error = Error;
    fn try_from(repr: KClassRepr) -> Result<KClass> {
        KClass::new(repr.r, repr.c1, repr.ch2)
    }
}

impl From<KClass> for KClassRepr {
    fn from(k: KClass) -> KClassRepr {
        let ch2 = k.ch2();
        KClassRepr {
            r: k.rank,
            c1: k.c1,
            ch2,
        }
    }
}

impl KClass {
    /// Builds a class from `ch2`; fails unless `c1^2 - 2 ch2` is an even integer.
    pub fn new(rank: impl Into<BigInt>, c1: DivisorClass, ch2: BigRational) -> Result<KClass> {
        let twice = ch2 * BigRational::from_integer(2.into());
        if !json::is_integer(&twice) {
            return Err(Error::InvalidInput(format!(
                "ch2 = {} is not a half-integer",
                json::format_rational(&(twice / BigRational::from_integer(2.into())))
            )));
        }
        KClass::from_twice_ch2(rank, c1, twice.to_integer())
    }

    pub fn from_twice_ch2(rank: impl Into<BigInt>, c1: DivisorClass, twice_ch2: BigInt) -> Result<KClass> {
        if (c1.square() - &twice_ch2).is_odd() {
            return Err(Error::InvalidInput(format!(
                "c2 = (c1^2 - 2 ch2)/2 is not an integer for c1 = {c1}, 2ch2 = {twice_ch2}"
            )));
        }
        Ok(KClass {
            rank: rank.into(),
            c1,
            twice_ch2,
        })
    }

    /// The class of the line bundle `O(D)`: `(1, D, D^2/2)`.
    pub fn line_bundle(d: &DivisorClass) -> KClass {
        KClass {
            rank: BigInt::one(),
            twice_ch2: d.square(),
            c1: d.clone(),
        }
    }

    pub fn zero(blowups: usize) -> KClass {
        KClass {
            rank: BigInt::zero(),
            c1: DivisorClass::zero(blowups),
            twice_ch2: BigInt::zero(),
        }
    }

    pub fn structure_sheaf(surface: &Surface) -> KClass {
        KClass::line_bundle(&DivisorClass::zero(surface.blowups()))
    }

    pub fn rank(&self) -> &BigInt {
        &self.rank
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn ch2(&self) -> BigRational {
        json::half(&self.twice_ch2)
    }

    pub fn twice_ch2(&self) -> &BigInt {
        &self.twice_ch2
    }

    /// `c2 = (c1^2 - 2 ch2) / 2`.
    pub fn c2(&self) -> BigInt {
        (self.c1.square() - &self.twice_ch2) / 2
    }

    /// `Delta = c1^2 - 2 c2 = 2 ch2`.
    pub fn discriminant(&self) -> &BigInt {
        &self.twice_ch2
    }

    /// `q = (c1^2 - 2 c2) / (2r) = ch2 / r`.
    pub fn q(&self) -> Result<BigRational> {
        if self.rank.is_zero() {
            return Err(Error::Domain("q is undefined in rank 0".into()));
        }
        Ok(self.ch2() / BigRational::from_integer(self.rank.clone()))
    }

    pub fn blowups(&self) -> usize {
        self.c1.blowups()
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.c1.is_zero() && self.twice_ch2.is_zero()
    }

    pub fn scale(&self, k: &BigInt) -> KClass {
        KClass {
            rank: &self.rank * k,
            c1: self.c1.scale(k),
            twice_ch2: &self.twice_ch2 * k,
        }
    }

    /// Degree of `c1` on the exceptional curve `e_index`.
    pub fn degree_on(&self, e_index: usize) -> BigInt {
        self.c1.degree_on(e_index)
    }

    /// Pulls the class back along one more blow-up.
    pub fn pull_back(&self) -> KClass {
        KClass {
            rank: self.rank.clone(),
            c1: self.c1.pull_back(),
            twice_ch2: self.twice_ch2.clone(),
        }
    }
}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[r={}, c1={}, ch2={}]",
            self.rank,
            self.c1,
            json::format_rational(&self.ch2())
        )
    }
}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        KClass {
            rank: &self.rank + &rhs.rank,
            c1: &self.c1 + &rhs.c1,
            twice_ch2: &self.twice_ch2 + &rhs.twice_ch2,
        }
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        KClass {
            rank: &self.rank - &rhs.rank,
            c1: &self.c1 - &rhs.c1,
            twice_ch2: &self.twice_ch2 - &rhs.twice_ch2,
        }
    }
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass {
            rank: -&self.rank,
            c1: -&self.c1,
            twice_ch2: -&self.twice_ch2,
        }
    }
}

fn check_class(surface: &Surface, e: &KClass) -> Result<()> {
    surface.check(&e.c1)
}

/// `chi(E, F)` by Riemann-Roch with `chi(O_S) = 1`, expanded bilinearly:
/// `r_E r_F + H.(r_E c1_F - r_F c1_E)/2 + r_E ch2_F + r_F ch2_E - c1_E.c1_F`.
pub fn euler_form(surface: &Surface, e: &KClass, f: &KClass) -> Result<BigInt> {
    check_class(surface, e)?;
    check_class(surface, f)?;
    Ok(euler_form_unchecked(surface, e, f))
}

pub(crate) fn euler_form_unchecked(surface: &Surface, e: &KClass, f: &KClass) -> BigInt {
    let h = surface.anticanonical();
    let cross = &f.c1.scale(&e.rank) - &e.c1.scale(&f.rank);
    let twice = BigInt::from(2) * &e.rank * &f.rank
        + h.dot(&cross)
        + &e.rank * &f.twice_ch2
        + &f.rank * &e.twice_ch2
        - BigInt::from(2) * e.c1.dot(&f.c1);
    assert!(
        twice.is_even(),
        "Euler form of {e} and {f} is not an integer; the classes violate integrality"
    );
    twice / 2
}

/// `(D . c1) / r`.
pub fn slope_mu(surface: &Surface, e: &KClass, d: &DivisorClass) -> Result<BigRational> {
    check_class(surface, e)?;
    surface.check(d)?;
    if e.rank.is_zero() {
        return Err(Error::Domain(format!("slope of the torsion class {e} is undefined")));
    }
    Ok(BigRational::new(d.dot(&e.c1), e.rank.clone()))
}

/// `mu_H` with respect to the anticanonical class.
pub fn mu_h(surface: &Surface, e: &KClass) -> Result<BigRational> {
    slope_mu(surface, e, &surface.anticanonical())
}

/// The vector slope `(mu_H, mu_A, 2 ch2 / r)`.
pub fn vector_slope(surface: &Surface, e: &KClass, ample: &DivisorClass) -> Result<SlopeVector> {
    check_class(surface, e)?;
    surface.check(ample)?;
    if !e.rank.is_positive() {
        return Err(Error::Domain(format!(
            "vector slope needs positive rank, got {}",
            e.rank
        )));
    }
    let h = surface.anticanonical();
    Ok(SlopeVector::new(
        e.rank.clone(),
        [h.dot(&e.c1), ample.dot(&e.c1), e.twice_ch2.clone()],
    ))
}

/// `E(D)`: multiplies the Chern character by `exp(D)`.
pub fn twist(e: &KClass, d: &DivisorClass) -> Result<KClass> {
    if e.c1.blowups() != d.blowups() {
        return Err(Error::DimensionMismatch {
            expected: e.c1.blowups() + 1,
            found: d.blowups() + 1,
        });
    }
    Ok(KClass {
        rank: e.rank.clone(),
        c1: &e.c1 + &d.scale(&e.rank),
        twice_ch2: &e.twice_ch2 + BigInt::from(2) * e.c1.dot(d) + &e.rank * d.square(),
    })
}

/// `E(tK)`.
pub fn twist_canonical(surface: &Surface, e: &KClass, t: &BigInt) -> Result<KClass> {
    twist(e, &surface.canonical_class().scale(t))
}

pub fn dual_class(e: &KClass) -> KClass {
    KClass {
        rank: e.rank.clone(),
        c1: -&e.c1,
        twice_ch2: e.twice_ch2.clone(),
    }
}

/// `[O_e(deg)] = (0, e, deg + 1/2)` for the exceptional curve `e_index`.
pub fn curve_class(surface: &Surface, e_index: usize, deg: &BigInt) -> Result<KClass> {
    let e = surface.exceptional_curve(e_index)?;
    Ok(KClass {
        rank: BigInt::zero(),
        c1: e,
        twice_ch2: BigInt::from(2) * deg + 1,
    })
}

/// The class on the surface with one fewer blow-up whose pullback is `e`.
pub fn descend_class(surface: &Surface, e: &KClass) -> Result<KClass> {
    check_class(surface, e)?;
    let c1 = surface.blow_down_divisor(&e.c1)?;
    Ok(KClass {
        rank: e.rank.clone(),
        c1,
        twice_ch2: e.twice_ch2.clone(),
    })
}
