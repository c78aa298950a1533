//! Mutations of exceptional pairs and collections in the Grothendieck group.
//!
//! A left mutation sends `(E, F)` to `(L_E F, E)` with `[L_E F] = +-(chi(E,F)[E] - [F])`
//! and a right mutation sends it to `(F, R_F E)` with `[R_F E] = +-(chi(E,F)[F] - [E])`.
//! The sign is fixed by [`normalize_sign`], which collapses the shift ambiguity of
//! the derived category to one representative.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{curve_class, euler_form_unchecked, twist, KClass};
use crate::error::{Error, Result};
use crate::log::{MutationLog, Step};
use crate::pairs::check_exceptional_pair;
use crate::picard::Surface;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn inverse(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Direction> {
        match s.to_ascii_lowercase().as_str() {
            "l" | "left" => Ok(Direction::Left),
            "r" | "right" => Ok(Direction::Right),
            _ => Err(Error::InvalidInput(format!("unknown direction {s:?}; use left or right"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    /// 1-based position of the first member of the mutated pair.
    pub position: usize,
    pub direction: Direction,
}

impl Letter {
    pub fn left(position: usize) -> Letter {
        Letter {
            position,
            direction: Direction::Left,
        }
    }

    pub fn right(position: usize) -> Letter {
        Letter {
            position,
            direction: Direction::Right,
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            position: self.position,
            direction: self.direction.inverse(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.direction {
            Direction::Left => 'L',
            Direction::Right => 'R',
        };
        write!(f, "{c}{}", self.position)
    }
}

/// A word such as `"L1 R2 L1"`, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(letters: Vec<Letter>) -> BraidWord {
        BraidWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word undoing this one.
    pub fn inverse(&self) -> BraidWord {
        BraidWord::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Left dual of an `n`-member collection: `E_i` is carried to the front by
    /// `L^{(i-1)}`, producing `(L^{(n-1)}E_n, ..., L E_2, E_1)`.
    pub fn left_dual(n: usize) -> BraidWord {
        let mut letters = Vec::new();
        for j in 1..n {
            for p in (1..=j).rev() {
                letters.push(Letter::left(p));
            }
        }
        BraidWord::new(letters)
    }

    /// Right dual: `(E_n, R E_{n-1}, ..., R^{(n-1)} E_1)`.
    pub fn right_dual(n: usize) -> BraidWord {
        let mut letters = Vec::new();
        for j in (1..n).rev() {
            for p in j..n {
                letters.push(Letter::right(p));
            }
        }
        BraidWord::new(letters)
    }
}

impl FromStr for BraidWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<BraidWord> {
        let mut letters = Vec::new();
        for token in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (head, tail) = token.split_at(1);
            let direction = head.parse()?;
            let position: usize = tail
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad braid letter {token:?}")))?;
            if position == 0 {
                return Err(Error::InvalidInput(format!("braid positions start at 1: {token:?}")));
            }
            letters.push(Letter {
                position,
                direction,
            });
        }
        Ok(BraidWord::new(letters))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CollectionRepr")]
pub struct Collection {
    surface: Surface,
    members: Vec<KClass>,
}

#[derive(Deserialize)]
struct CollectionRepr {
    surface: Surface,
    members: Vec<KClass>,
}

impl TryFrom<CollectionRepr> for Collection {
    type Error = Error;
    fn try_from(repr: CollectionRepr) -> Result<Collection> {
        Collection::new(repr.surface, repr.members)
    }
}

impl Collection {
    pub fn new(surface: Surface, members: Vec<KClass>) -> Result<Collection> {
        for m in &members {
            surface.check(m.c1())?;
        }
        Ok(Collection { surface, members })
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn members(&self) -> &[KClass] {
        &self.members
    }

    pub fn into_members(self) -> Vec<KClass> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn ranks(&self) -> Vec<BigInt> {
        self.members.iter().map(|m| m.rank().clone()).collect()
    }

    pub(crate) fn with_members(&self, members: Vec<KClass>) -> Collection {
        Collection {
            surface: self.surface.clone(),
            members,
        }
    }
}

/// Chooses between `x` and `-x`: positive rank, else positive `H.c1`, else a
/// lexicographically positive `c1`, else positive `ch2`.
pub fn normalize_sign(surface: &Surface, x: KClass) -> KClass {
    let sign = if !x.rank().is_zero() {
        if x.rank().is_positive() { 1 } else { -1 }
    } else {
        let hc = surface.anticanonical().dot(x.c1());
        if !hc.is_zero() {
            if hc.is_positive() { 1 } else { -1 }
        } else if x.c1().lex_sign() != 0 {
            x.c1().lex_sign()
        } else if x.twice_ch2().is_negative() {
            -1
        } else {
            1
        }
    };
    if sign < 0 { -&x } else { x }
}

/// Mutates an adjacent pair. The pair must be numerically exceptional.
pub fn mutate_pair(
    surface: &Surface,
    e: &KClass,
    f: &KClass,
    direction: Direction,
) -> Result<(KClass, KClass)> {
    check_exceptional_pair(surface, e, f)?;
    Ok(mutate_pair_unchecked(surface, e, f, direction))
}

fn mutate_pair_unchecked(surface: &Surface, e: &KClass, f: &KClass, direction: Direction) -> (KClass, KClass) {
    let chi = euler_form_unchecked(surface, e, f);
    match direction {
        Direction::Left => {
            let l = &e.scale(&chi) - f;
            (normalize_sign(surface, l), e.clone())
        }
        Direction::Right => {
            let r = &f.scale(&chi) - e;
            (f.clone(), normalize_sign(surface, r))
        }
    }
}

/// Mutates the pair at 1-based position `i`, i.e. `(E_i, E_{i+1})`.
pub fn mutate_collection(c: &Collection, i: usize, direction: Direction) -> Result<Collection> {
    if i == 0 || i >= c.len() {
        return Err(Error::InvalidInput(format!(
            "mutation position {i} out of range 1..{}",
            c.len()
        )));
    }
    let (a, b) = mutate_pair(&c.surface, &c.members[i - 1], &c.members[i], direction)?;
    let mut members = c.members.clone();
    members[i - 1] = a;
    members[i] = b;
    let out = c.with_members(members);
    if let Some(v) = is_numerically_exceptional(&out).violation {
        return Err(Error::Invariant(format!(
            "mutation {direction:?} at {i} broke exceptionality: {v}"
        )));
    }
    Ok(out)
}

pub fn apply_braid(c: &Collection, word: &BraidWord) -> Result<(Collection, MutationLog)> {
    let mut log = MutationLog::default();
    let mut current = c.clone();
    for letter in &word.letters {
        let next = mutate_collection(&current, letter.position, letter.direction)?;
        log.push(Step::Mutate {
            position: letter.position,
            direction: letter.direction,
            before: current.members.clone(),
            after: next.members.clone(),
        });
        current = next;
    }
    Ok((current, log))
}

/// `E_i` of the helix generated by the foundation `E_1, ..., E_n`, using
/// `E_{i + sn} = E_i(-sK)`.
pub fn helix_member(foundation: &Collection, i: i64) -> Result<KClass> {
    let n = foundation.len() as i64;
    if n == 0 {
        return Err(Error::InvalidInput("empty foundation".into()));
    }
    let (q, rem) = (i - 1).div_mod_floor(&n);
    let shift = foundation.surface.anticanonical().scale(&BigInt::from(q));
    twist(&foundation.members[rem as usize], &shift)
}

pub fn helix_extend(foundation: &Collection, lo: i64, hi: i64) -> Result<Vec<(i64, KClass)>> {
    if lo > hi {
        return Err(Error::InvalidInput(format!("empty index range {lo}..={hi}")));
    }
    (lo..=hi).map(|i| Ok((i, helix_member(foundation, i)?))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodWitness {
    /// Helix index `s` whose left shift disagrees with `A_s(K)`.
    pub index: i64,
    pub expected: KClass,
    /// The shifted class, or `None` when an intermediate pair was not mutable.
    pub found: Option<KClass>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCheck {
    pub periodic: bool,
    pub witness: Option<PeriodWitness>,
}

/// Checks `L^{(n-1)} A_s = A_{s-n}` for `s = 1, ..., n`.
pub fn check_helix_period(foundation: &Collection) -> Result<PeriodCheck> {
    let n = foundation.len() as i64;
    let surface = &foundation.surface;
    let k = surface.canonical_class();
    for s in 1..=n {
        let a_s = helix_member(foundation, s)?;
        let expected = twist(&a_s, &k)?;
        let mut x = a_s;
        let mut failure = None;
        for j in (s - n + 1..s).rev() {
            let a_j = helix_member(foundation, j)?;
            match mutate_pair(surface, &a_j, &x, Direction::Left) {
                Ok((shifted, _)) => x = shifted,
                Err(err) => {
                    failure = Some(format!("pair (A_{j}, shifted A_{s}) is not mutable: {err}"));
                    break;
                }
            }
        }
        let witness = match failure {
            Some(reason) => Some(PeriodWitness {
                index: s,
                expected,
                found: None,
                reason,
            }),
            None if x != expected => Some(PeriodWitness {
                index: s,
                reason: format!("L^({}) A_{s} differs from A_{s}(K)", n - 1),
                expected,
                found: Some(x),
            }),
            None => None,
        };
        if witness.is_some() {
            return Ok(PeriodCheck {
                periodic: false,
                witness,
            });
        }
    }
    Ok(PeriodCheck {
        periodic: true,
        witness: None,
    })
}

pub fn gram_matrix(c: &Collection) -> Vec<Vec<BigInt>> {
    c.members
        .iter()
        .map(|e| {
            c.members
                .iter()
                .map(|f| euler_form_unchecked(&c.surface, e, f))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// 1-based row and column of the offending Gram entry.
    pub row: usize,
    pub col: usize,
    pub value: BigInt,
    pub expected: BigInt,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi(E_{}, E_{}) = {}, expected {}",
            self.row, self.col, self.value, self.expected
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalCheck {
    pub exceptional: bool,
    /// First violation in row-major order.
    pub violation: Option<Violation>,
}

pub fn is_numerically_exceptional(c: &Collection) -> ExceptionalCheck {
    for (i, e) in c.members.iter().enumerate() {
        for (j, f) in c.members.iter().enumerate().take(i + 1) {
            let value = euler_form_unchecked(&c.surface, e, f);
            let expected = BigInt::from(i32::from(i == j));
            if value != expected {
                return ExceptionalCheck {
                    exceptional: false,
                    violation: Some(Violation {
                        row: i + 1,
                        col: j + 1,
                        value,
                        expected,
                    }),
                };
            }
        }
    }
    ExceptionalCheck {
        exceptional: true,
        violation: None,
    }
}

/// `(O_{e_1}(-1), ..., O_{e_d}(-1), O, O(h), O(2h))`.
pub fn basic_collection(surface: &Surface) -> Collection {
    let mut members = torsion_members(surface);
    members.extend(plane_members(surface));
    Collection::new(surface.clone(), members).expect("classes built on the surface")
}

/// `(O, O(h), O(2h), O_{e_1}(-1), ..., O_{e_d}(-1))`, which is not exceptional for `d >= 1`.
pub fn plane_first_collection(surface: &Surface) -> Collection {
    let mut members = plane_members(surface);
    members.extend(torsion_members(surface));
    Collection::new(surface.clone(), members).expect("classes built on the surface")
}

fn plane_members(surface: &Surface) -> Vec<KClass> {
    let h = surface.line_class();
    (0..3)
        .map(|k| KClass::line_bundle(&h.scale(&BigInt::from(k))))
        .collect()
}

fn torsion_members(surface: &Surface) -> Vec<KClass> {
    (1..=surface.blowups())
        .map(|i| curve_class(surface, i, &BigInt::from(-1)).expect("index in range"))
        .collect()
}
