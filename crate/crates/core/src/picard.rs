//! The Picard lattice of `S = Bl_d(P^2)`.
//!
//! A divisor class is stored as the coefficient vector `(a; b_1, ..., b_d)`
//! standing for `a h - sum b_i e_i`. The intersection form is
//! `diag(+1, -1, ..., -1)` on these vectors, so `h^2 = 1`, `e_i^2 = -1` and
//! `h e_i = e_i e_j = 0`. The canonical class is `K = -3h + sum e_i`, i.e. the
//! vector `(-3; -1, ..., -1)`.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of blown-up points with `K^2 = 9 - d > 0`.
pub const MAX_BLOWUPS: usize = 8;

/// Bound on `|a|` used by the root search. From `sum b = 3a`, `sum b^2 = a^2 + 2`
/// and Cauchy-Schwarz, `9a^2 <= d (a^2 + 2)`, which gives `|a| <= 4` for `d <= 8`.
pub const ROOT_SEARCH_BOUND: i64 = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass {
    #[serde(with = "crate::json::bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a divisor class needs the h coordinate");
        DivisorClass { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        DivisorClass::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn zero(blowups: usize) -> Self {
        DivisorClass::new(vec![BigInt::zero(); blowups + 1])
    }

    /// The pullback `h` of a line.
    pub fn line(blowups: usize) -> Self {
        let mut c = DivisorClass::zero(blowups);
        c.coeffs[0] = 1.into();
        c
    }

    /// The exceptional curve `e_i` (1-based), i.e. `b_i = -1`.
    pub fn exceptional(blowups: usize, index: usize) -> Self {
        assert!(
            (1..=blowups).contains(&index),
            "exceptional curve index {index} out of range 1..={blowups}"
        );
        let mut c = DivisorClass::zero(blowups);
        c.coeffs[index] = (-1).into();
        c
    }

    pub fn blowups(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Intersection number. Both classes must live on the same surface.
    pub fn dot(&self, other: &DivisorClass) -> BigInt {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "intersecting classes from different surfaces"
        );
        let mut acc = &self.coeffs[0] * &other.coeffs[0];
        for (a, b) in self.coeffs[1..].iter().zip(&other.coeffs[1..]) {
            acc -= a * b;
        }
        acc
    }

    pub fn square(&self) -> BigInt {
        self.dot(self)
    }

    /// Degree on the exceptional curve `e_index`, which is the coefficient `b_i`.
    pub fn degree_on(&self, e_index: usize) -> BigInt {
        self.coeffs[e_index].clone()
    }

    pub fn scale(&self, k: &BigInt) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Re-inserts a zero `e_{d+1}` coordinate: the pullback along one more blow-up.
    pub fn pull_back(&self) -> DivisorClass {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(BigInt::zero());
        DivisorClass::new(coeffs)
    }

    /// Lexicographic sign of the coefficient vector: the sign of the first nonzero entry.
    pub fn lex_sign(&self) -> i8 {
        for c in &self.coeffs {
            if c.is_positive() {
                return 1;
            }
            if c.is_negative() {
                return -1;
            }
        }
        0
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.coeffs[0])?;
        for (i, c) in self.coeffs[1..].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        DivisorClass::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        DivisorClass::new(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A blow-up of the plane in `d <= 8` points, together with the irreducible
/// effective `-2`-classes declared for its point configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceRepr", into = "SurfaceRepr")]
pub struct Surface {
    blowups: usize,
    effective_roots: Vec<DivisorClass>,
}

#[derive(Serialize, Deserialize)]
struct SurfaceRepr {
    blowups: usize,
    #[serde(default)]
    effective_roots: Vec<DivisorClass>,
}

impl TryFrom<SurfaceRepr> for Surface {
    type Error = Error;
    fn try_from(repr: SurfaceRepr) -> Result<Surface> {
        Surface::new(repr.blowups, repr.effective_roots)
    }
}

impl From<Surface> for SurfaceRepr {
    fn from(s: Surface) -> SurfaceRepr {
        SurfaceRepr {
            blowups: s.blowups,
            effective_roots: s.effective_roots,
        }
    }
}

impl Surface {
    /// Blow-up in `blowups` points in general position (no effective `-2`-curves).
    pub fn generic(blowups: usize) -> Result<Surface> {
        Surface::new(blowups, Vec::new())
    }

    pub fn new(blowups: usize, effective_roots: Vec<DivisorClass>) -> Result<Surface> {
        if blowups > MAX_BLOWUPS {
            return Err(Error::InvalidInput(format!(
                "{blowups} blow-ups leave K^2 = {} <= 0",
                9 - blowups as i64
            )));
        }
        let surface = Surface {
            blowups,
            effective_roots: Vec::new(),
        };
        for root in &effective_roots {
            surface.check(root)?;
            if !surface.is_root(root) {
                return Err(Error::InvalidInput(format!(
                    "declared effective root {root} is not a -2-class orthogonal to K"
                )));
            }
        }
        if !effective_roots.is_empty() && gram_determinant(&effective_roots).is_zero() {
            return Err(Error::InvalidInput(
                "declared effective roots are linearly dependent".into(),
            ));
        }
        Ok(Surface {
            blowups,
            effective_roots,
        })
    }

    pub fn blowups(&self) -> usize {
        self.blowups
    }

    pub fn effective_roots(&self) -> &[DivisorClass] {
        &self.effective_roots
    }

    /// `K^2 = 9 - d`.
    pub fn k_squared(&self) -> BigInt {
        BigInt::from(9 - self.blowups as i64)
    }

    pub fn check(&self, c: &DivisorClass) -> Result<()> {
        if c.coeffs.len() != self.blowups + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.blowups + 1,
                found: c.coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, c: &DivisorClass, d: &DivisorClass) -> Result<BigInt> {
        self.check(c)?;
        self.check(d)?;
        Ok(c.dot(d))
    }

    pub fn canonical_class(&self) -> DivisorClass {
        let mut coeffs = vec![BigInt::from(-1); self.blowups + 1];
        coeffs[0] = (-3).into();
        DivisorClass::new(coeffs)
    }

    /// `H = -K`.
    pub fn anticanonical(&self) -> DivisorClass {
        -&self.canonical_class()
    }

    /// `A = 4h - sum e_i`. Ampleness is assumed, not checked.
    pub fn default_ample(&self) -> DivisorClass {
        let mut coeffs = vec![BigInt::from(1); self.blowups + 1];
        coeffs[0] = 4.into();
        DivisorClass::new(coeffs)
    }

    pub fn line_class(&self) -> DivisorClass {
        DivisorClass::line(self.blowups)
    }

    pub fn exceptional_curve(&self, index: usize) -> Result<DivisorClass> {
        if !(1..=self.blowups).contains(&index) {
            return Err(Error::InvalidInput(format!(
                "exceptional curve index {index} out of range 1..={}",
                self.blowups
            )));
        }
        Ok(DivisorClass::exceptional(self.blowups, index))
    }

    pub fn is_root(&self, c: &DivisorClass) -> bool {
        c.coeffs.len() == self.blowups + 1
            && c.square() == BigInt::from(-2)
            && c.dot(&self.canonical_class()).is_zero()
    }

    /// All classes with `C^2 = -2` and `C.K = 0`, sorted lexicographically.
    pub fn enumerate_roots(&self) -> Vec<DivisorClass> {
        let d = self.blowups;
        let mut found = Vec::new();
        let mut b = vec![0i64; d];
        for a in -ROOT_SEARCH_BOUND..=ROOT_SEARCH_BOUND {
            // sum b = 3a and sum b^2 = a^2 + 2
            search_root_tail(&mut b, 0, 3 * a, a * a + 2, &mut |tail| {
                let mut coeffs = Vec::with_capacity(d + 1);
                coeffs.push(a);
                coeffs.extend_from_slice(tail);
                found.push(coeffs);
            });
        }
        found.sort();
        found.into_iter().map(|c| DivisorClass::from_i64(&c)).collect()
    }

    /// Expresses `c` in the declared effective roots. `None` when `c` is outside
    /// their span; coefficients may be negative or fractional otherwise.
    pub fn root_coordinates(&self, c: &DivisorClass) -> Result<Option<Vec<BigRational>>> {
        self.check(c)?;
        if self.effective_roots.is_empty() {
            return Ok(if c.is_zero() { Some(Vec::new()) } else { None });
        }
        let roots = &self.effective_roots;
        let n = roots.len();
        // Gram system G x = (C_j . c); the roots span a negative definite sublattice.
        let mut rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(roots[i].dot(&roots[j])))
                    .collect();
                row.push(BigRational::from_integer(roots[i].dot(c)));
                row
            })
            .collect();
        let solution = solve_in_place(&mut rows)
            .ok_or_else(|| Error::Invariant("singular Gram matrix of effective roots".into()))?;
        // Verify that the projection reproduces c exactly.
        let mut recon = vec![BigRational::zero(); self.blowups + 1];
        for (x, root) in solution.iter().zip(roots) {
            for (acc, coeff) in recon.iter_mut().zip(root.coeffs()) {
                *acc += x * BigRational::from_integer(coeff.clone());
            }
        }
        let in_span = recon
            .iter()
            .zip(c.coeffs())
            .all(|(r, v)| *r == BigRational::from_integer(v.clone()));
        Ok(in_span.then_some(solution))
    }

    /// Non-negative integer decomposition of `c` in the declared effective roots, if any.
    pub fn effective_decomposition(&self, c: &DivisorClass) -> Result<Option<Vec<BigInt>>> {
        let Some(coords) = self.root_coordinates(c)? else {
            return Ok(None);
        };
        if coords
            .iter()
            .any(|x| !crate::json::is_integer(x) || x.is_negative())
        {
            return Ok(None);
        }
        Ok(Some(coords.into_iter().map(|x| x.to_integer()).collect()))
    }

    /// Whether a `-2`-class is a connected effective combination of the declared roots.
    pub fn is_connected_effective_root(&self, c: &DivisorClass) -> Result<bool> {
        self.check(c)?;
        if !self.is_root(c) {
            return Err(Error::Domain(format!("{c} is not a -2-class orthogonal to K")));
        }
        let Some(decomposition) = self.effective_decomposition(c)? else {
            return Ok(false);
        };
        let support: Vec<usize> = decomposition
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_positive())
            .map(|(i, _)| i)
            .collect();
        Ok(is_connected(&support, |i, j| {
            !self.effective_roots[i].dot(&self.effective_roots[j]).is_zero()
        }))
    }

    /// The surface with the last point not blown up. Declared roots that are
    /// pullbacks (zero `e_d` coefficient) descend; the others are dropped.
    pub fn blown_down(&self) -> Result<Surface> {
        if self.blowups == 0 {
            return Err(Error::Domain("the plane has nothing to blow down".into()));
        }
        let roots = self
            .effective_roots
            .iter()
            .filter(|r| r.coeffs[self.blowups].is_zero())
            .map(|r| DivisorClass::new(r.coeffs[..self.blowups].to_vec()))
            .collect();
        Surface::new(self.blowups - 1, roots)
    }

    /// Deletes the `e_d` coordinate of a class pulled back from the blow-down.
    pub fn blow_down_divisor(&self, c: &DivisorClass) -> Result<DivisorClass> {
        self.check(c)?;
        if self.blowups == 0 {
            return Err(Error::Domain("the plane has nothing to blow down".into()));
        }
        let last = &c.coeffs[self.blowups];
        if !last.is_zero() {
            return Err(Error::Domain(format!(
                "{c} has e_{} coefficient {last}; it is not a pullback",
                self.blowups
            )));
        }
        Ok(DivisorClass::new(c.coeffs[..self.blowups].to_vec()))
    }
}

fn search_root_tail(
    b: &mut [i64],
    pos: usize,
    sum_left: i64,
    sq_left: i64,
    emit: &mut dyn FnMut(&[i64]),
) {
    let remaining = (b.len() - pos) as i64;
    if remaining == 0 {
        if sum_left == 0 && sq_left == 0 {
            emit(b);
        }
        return;
    }
    // Cauchy-Schwarz: the remaining entries need sum^2 <= remaining * sumsq.
    if sq_left < 0 || sum_left * sum_left > remaining * sq_left {
        return;
    }
    let bound = (sq_left as f64).sqrt() as i64 + 1;
    for v in -bound..=bound {
        if v * v > sq_left {
            continue;
        }
        b[pos] = v;
        search_root_tail(b, pos + 1, sum_left - v, sq_left - v * v, emit);
    }
    b[pos] = 0;
}

fn gram_determinant(classes: &[DivisorClass]) -> BigRational {
    let n = classes.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(classes[i].dot(&classes[j])))
                .collect()
        })
        .collect();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col].clone();
        let (top, bottom) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in bottom {
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

/// Gauss-Jordan on an augmented square system; `None` when singular.
fn solve_in_place(rows: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot, col);
        let p = rows[col][col].clone();
        for x in rows[col][col..].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Some(rows.iter().map(|row| row[n].clone()).collect())
}

fn is_connected(vertices: &[usize], adjacent: impl Fn(usize, usize) -> bool) -> bool {
    let Some(&start) = vertices.first() else {
        return false;
    };
    let mut seen = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in vertices {
            if !seen.contains(&w) && adjacent(v, w) {
                seen.push(w);
                queue.push_back(w);
            }
        }
    }
    seen.len() == vertices.len()
}

/// Small-integer view of a class, for logging and tests.
pub fn to_i64_vec(c: &DivisorClass) -> Option<Vec<i64>> {
    c.coeffs().iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(v)
    }

    #[test]
    fn basis_intersections() {
        let s = Surface::generic(2).unwrap();
        let h = s.line_class();
        let e1 = s.exceptional_curve(1).unwrap();
        let e2 = s.exceptional_curve(2).unwrap();
        assert_eq!(s.intersect(&h, &e1).unwrap(), 0.into());
        assert_eq!(s.intersect(&e1, &e1).unwrap(), (-1).into());
        assert_eq!(s.intersect(&e1, &e2).unwrap(), 0.into());
        assert_eq!(s.intersect(&h, &h).unwrap(), 1.into());
        let k = s.canonical_class();
        assert_eq!(s.intersect(&k, &k).unwrap(), 7.into());
    }

    #[test]
    fn intersect_rejects_foreign_classes() {
        let s = Surface::generic(2).unwrap();
        let err = s.intersect(&cls(&[1, 0]), &cls(&[1, 0, 0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn canonical_class_coordinates() {
        assert_eq!(Surface::generic(0).unwrap().canonical_class(), cls(&[-3]));
        let s8 = Surface::generic(8).unwrap();
        let k = s8.canonical_class();
        assert_eq!(k.square(), 1.into());
        assert_eq!(s8.anticanonical().square(), s8.k_squared());
    }

    #[test]
    fn nine_blowups_are_rejected() {
        assert!(matches!(Surface::generic(9), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn small_root_systems() {
        assert!(Surface::generic(0).unwrap().enumerate_roots().is_empty());
        assert!(Surface::generic(1).unwrap().enumerate_roots().is_empty());
        let r2 = Surface::generic(2).unwrap().enumerate_roots();
        assert_eq!(r2, vec![cls(&[0, -1, 1]), cls(&[0, 1, -1])]);
        assert_eq!(Surface::generic(3).unwrap().enumerate_roots().len(), 8);
    }

    #[test]
    fn declared_roots_are_validated() {
        assert!(Surface::new(2, vec![cls(&[0, -1, 1])]).is_ok());
        assert!(Surface::new(2, vec![cls(&[1, -1, 1])]).is_err());
        assert!(Surface::new(2, vec![cls(&[0, -1, 1]), cls(&[0, 1, -1])]).is_err());
    }

    #[test]
    fn connected_effective_roots() {
        let e1_minus_e2 = cls(&[0, -1, 1]);
        let s = Surface::new(2, vec![e1_minus_e2.clone()]).unwrap();
        assert!(s.is_connected_effective_root(&e1_minus_e2).unwrap());
        assert!(!s.is_connected_effective_root(&-&e1_minus_e2).unwrap());

        // Zuev's configuration: e1 - e2 and e1 - e3 effective, e2 - e3 is not.
        let s3 = Surface::new(3, vec![cls(&[0, -1, 1, 0]), cls(&[0, -1, 0, 1])]).unwrap();
        assert!(!s3.is_connected_effective_root(&cls(&[0, 0, -1, 1])).unwrap());
        assert!(!s3.is_connected_effective_root(&cls(&[0, 0, 1, -1])).unwrap());

        // A chain e1 - e2, e2 - e3: the sum e1 - e3 is connected and effective.
        let chain = Surface::new(3, vec![cls(&[0, -1, 1, 0]), cls(&[0, 0, -1, 1])]).unwrap();
        assert!(chain.is_connected_effective_root(&cls(&[0, -1, 0, 1])).unwrap());
        assert_eq!(
            chain.effective_decomposition(&cls(&[0, -1, 0, 1])).unwrap(),
            Some(vec![1.into(), 1.into()])
        );
    }

    #[test]
    fn connectivity_precondition() {
        let s = Surface::generic(2).unwrap();
        assert!(matches!(
            s.is_connected_effective_root(&cls(&[1, 0, 0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn blow_down_deletes_last_coordinate() {
        let s1 = Surface::generic(1).unwrap();
        assert_eq!(s1.blow_down_divisor(&cls(&[3, 0])).unwrap(), cls(&[3]));
        let s2 = Surface::generic(2).unwrap();
        assert_eq!(s2.blow_down_divisor(&cls(&[1, 1, 0])).unwrap(), cls(&[1, 1]));
        assert!(matches!(s1.blow_down_divisor(&cls(&[1, 1])), Err(Error::Domain(_))));
        let p2 = Surface::generic(0).unwrap();
        assert!(matches!(p2.blow_down_divisor(&cls(&[1])), Err(Error::Domain(_))));
        assert_eq!(cls(&[1, 1]).pull_back(), cls(&[1, 1, 0]));
    }

    #[test]
    fn surface_json_shape() {
        let s = Surface::new(2, vec![cls(&[0, -1, 1])]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"blowups":2,"effective_roots":[[0,-1,1]]}"#);
        let back: Surface = serde_json::from_str(r#"{"blowups":0}"#).unwrap();
        assert_eq!(back, Surface::generic(0).unwrap());
        assert!(serde_json::from_str::<Surface>(r#"{"blowups":12}"#).is_err());
    }
}
