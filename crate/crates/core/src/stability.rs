//! Lexicographic slopes and Harder-Narasimhan coarsening of graded K-data.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::chern::{vector_slope, KClass};
use crate::error::{Error, Result};
use crate::json;
use crate::picard::{DivisorClass, Surface};

/// `(d_H, d_A, d_Delta) / rank` with `rank > 0`.
///
/// Ordering is lexicographic on the three quotients, decided by
/// cross-multiplication. Equality is equality of the quotients, so
/// `(1; 2, 2, 2)` and `(2; 4, 4, 4)` compare equal.
#[derive(Clone)]
pub struct SlopeVector {
    rank: BigInt,
    numerators: [BigInt; 3],
}

impl SlopeVector {
    pub fn new(rank: BigInt, numerators: [BigInt; 3]) -> SlopeVector {
        assert!(rank.is_positive(), "slope vector needs positive rank, got {rank}");
        SlopeVector { rank, numerators }
    }

    pub fn rank(&self) -> &BigInt {
        &self.rank
    }

    pub fn numerators(&self) -> &[BigInt; 3] {
        &self.numerators
    }

    pub fn components(&self) -> [BigRational; 3] {
        self.numerators
            .clone()
            .map(|n| BigRational::new(n, self.rank.clone()))
    }

    /// The slope of the direct sum: ranks and numerators add.
    pub fn merge(&self, other: &SlopeVector) -> SlopeVector {
        SlopeVector {
            rank: &self.rank + &other.rank,
            numerators: [0, 1, 2].map(|i| &self.numerators[i] + &other.numerators[i]),
        }
    }

    pub fn scale(&self, k: &BigInt) -> SlopeVector {
        SlopeVector::new(&self.rank * k, self.numerators.clone().map(|n| n * k))
    }
}

pub fn compare_slope(a: &SlopeVector, b: &SlopeVector) -> Ordering {
    for i in 0..3 {
        let lhs = &a.numerators[i] * &b.rank;
        let rhs = &b.numerators[i] * &a.rank;
        match lhs.cmp(&rhs) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl PartialEq for SlopeVector {
    fn eq(&self, other: &Self) -> bool {
        compare_slope(self, other) == Ordering::Equal
    }
}

impl Eq for SlopeVector {}

impl PartialOrd for SlopeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SlopeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_slope(self, other)
    }
}

impl fmt::Debug for SlopeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [h, a, d] = self.components();
        write!(
            f,
            "({}, {}, {})",
            json::format_rational(&h),
            json::format_rational(&a),
            json::format_rational(&d)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub class: KClass,
    #[serde(with = "json::bigint")]
    pub mult: BigInt,
}

impl Quotient {
    pub fn new(class: KClass, mult: impl Into<BigInt>) -> Quotient {
        Quotient {
            class,
            mult: mult.into(),
        }
    }
}

/// Graded pieces listed from the top quotient `G_1` down to the deepest sub `G_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedObject {
    pub quotients: Vec<Quotient>,
}

impl GradedObject {
    pub fn new(quotients: Vec<Quotient>) -> GradedObject {
        GradedObject { quotients }
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    /// The total class `sum mult_i [G_i]`.
    pub fn total_class(&self, surface: &Surface) -> KClass {
        let mut total = KClass::zero(surface.blowups());
        for q in &self.quotients {
            total = &total + &q.class.scale(&q.mult);
        }
        total
    }
}

/// A maximal run of input quotients merged into one HN factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnBlock {
    pub range: Range<usize>,
    pub slope: SlopeVector,
}

fn quotient_slopes(surface: &Surface, g: &GradedObject, ample: &DivisorClass) -> Result<Vec<SlopeVector>> {
    g.quotients
        .iter()
        .enumerate()
        .map(|(i, q)| {
            if !q.mult.is_positive() {
                return Err(Error::InvalidInput(format!(
                    "quotient {} has multiplicity {}",
                    i + 1,
                    q.mult
                )));
            }
            if !q.class.rank().is_positive() {
                return Err(Error::Domain(format!(
                    "quotient {} has rank {}; HN coarsening needs positive ranks",
                    i + 1,
                    q.class.rank()
                )));
            }
            Ok(vector_slope(surface, &q.class, ample)?.scale(&q.mult))
        })
        .collect()
}

/// Merges adjacent pieces until block slopes strictly
/// increase from the top quotient to the deepest sub.
pub fn hn_blocks(surface: &Surface, g: &GradedObject, ample: &DivisorClass) -> Result<Vec<HnBlock>> {
    let slopes = quotient_slopes(surface, g, ample)?;
    let mut stack: Vec<HnBlock> = Vec::with_capacity(slopes.len());
    for (i, slope) in slopes.into_iter().enumerate() {
        stack.push(HnBlock { range: i..i + 1, slope });
        while stack.len() >= 2 && stack[stack.len() - 2].slope >= stack[stack.len() - 1].slope {
            let top = stack.pop().unwrap();
            let below = stack.last_mut().unwrap();
            below.range.end = top.range.end;
            below.slope = below.slope.merge(&top.slope);
        }
    }
    Ok(stack)
}

/// Merged blocks become a single quotient `sum mult_i [G_i]` of multiplicity 1;
/// untouched pieces keep their multiplicity, so the result is a fixed point.
pub fn hn_coarsen(surface: &Surface, g: &GradedObject, ample: &DivisorClass) -> Result<GradedObject> {
    let blocks = hn_blocks(surface, g, ample)?;
    let quotients = blocks
        .into_iter()
        .map(|b| {
            let pieces = &g.quotients[b.range];
            if pieces.len() == 1 {
                return pieces[0].clone();
            }
            let mut sum = pieces[0].class.scale(&pieces[0].mult);
            for q in &pieces[1..] {
                sum = &sum + &q.class.scale(&q.mult);
            }
            Quotient::new(sum, BigInt::one())
        })
        .collect();
    Ok(GradedObject::new(quotients))
}
