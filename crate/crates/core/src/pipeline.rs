//! One level of the descent of an exceptional collection along the last
//! exceptional curve: hom-ordering, spread reduction, rotation and twisting
//! into restriction degrees `{-1, 0}`, peeling off `O_e(-1)`, and blow-down.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chern::{curve_class, descend_class, euler_form_unchecked, mu_h, twist, KClass};
use crate::error::{Error, Result};
use crate::log::{MutationLog, Step};
use crate::mutation::{is_numerically_exceptional, mutate_collection, Collection, Direction};
use crate::pairs::{classify_pair, rotation_index, splitting_type, PairType};
use crate::picard::{DivisorClass, Surface};

/// Bound on hom-ordering mutations before giving up.
pub const ORDER_STEP_CAP: usize = 10_000;
/// Bound on rotate-and-reorder rounds in [`reduce_spread`].
pub const SPREAD_ROUND_CAP: usize = 256;

fn require_exceptional(c: &Collection) -> Result<()> {
    match is_numerically_exceptional(c).violation {
        None => Ok(()),
        Some(v) => Err(Error::Domain(format!("collection is not numerically exceptional: {v}"))),
    }
}

fn require_positive_ranks(c: &Collection) -> Result<()> {
    for (i, m) in c.members().iter().enumerate() {
        if !m.rank().is_positive() {
            return Err(Error::Domain(format!(
                "member {} has rank {}; this stage needs positive ranks",
                i + 1,
                m.rank()
            )));
        }
    }
    Ok(())
}

fn recheck(c: &Collection, what: &str) -> Result<()> {
    match is_numerically_exceptional(c).violation {
        None => Ok(()),
        Some(v) => Err(Error::Invariant(format!("{what} broke exceptionality: {v}"))),
    }
}

pub fn slopes(c: &Collection) -> Result<Vec<BigRational>> {
    c.members().iter().map(|m| mu_h(c.surface(), m)).collect()
}

/// `(min mu_H, max mu_H)` over the members.
pub fn slope_window(c: &Collection) -> Result<(BigRational, BigRational)> {
    let mu = slopes(c)?;
    let lo = mu.iter().min().cloned().ok_or_else(|| Error::InvalidInput("empty collection".into()))?;
    let hi = mu.iter().max().cloned().unwrap();
    Ok((lo, hi))
}

/// Left-mutates descending ext-pairs until `mu_H` is non-decreasing.
pub fn order_hom(c: &Collection) -> Result<(Collection, MutationLog)> {
    require_exceptional(c)?;
    require_positive_ranks(c)?;
    let mut log = MutationLog::default();
    let mut current = c.clone();
    let mut mu = slopes(&current)?;
    for _ in 0..ORDER_STEP_CAP {
        let Some(i) = (0..mu.len().saturating_sub(1)).find(|&i| mu[i] > mu[i + 1]) else {
            return Ok((current, log));
        };
        let (e, f) = (&current.members()[i], &current.members()[i + 1]);
        match classify_pair(current.surface(), e, f)? {
            PairType::Ext(_) => {}
            other => {
                return Err(Error::Invariant(format!(
                    "descending pair at {} classified as {other}, expected ext",
                    i + 1
                )))
            }
        }
        let next = mutate_collection(&current, i + 1, Direction::Left)?;
        log.push(Step::Order {
            position: i + 1,
            before: current.members().to_vec(),
            after: next.members().to_vec(),
        });
        mu[i] = mu_h(next.surface(), &next.members()[i])?;
        mu[i + 1] = mu_h(next.surface(), &next.members()[i + 1])?;
        current = next;
    }
    Err(Error::IterationCap(ORDER_STEP_CAP))
}

pub(crate) fn rotate_members(surface: &Surface, members: &[KClass], j: usize) -> Result<Vec<KClass>> {
    if !(1..=members.len()).contains(&j) {
        return Err(Error::InvalidInput(format!(
            "rotation index {j} out of range 1..={}",
            members.len()
        )));
    }
    let h = surface.anticanonical();
    let mut out = members[j - 1..].to_vec();
    for m in &members[..j - 1] {
        out.push(twist(m, &h)?);
    }
    Ok(out)
}

/// `(E_j, ..., E_n, E_1(-K), ..., E_{j-1}(-K))`.
pub fn rotate_twist(c: &Collection, j: usize) -> Result<Collection> {
    let out = c.with_members(rotate_members(c.surface(), c.members(), j)?);
    recheck(&out, "rotation")?;
    Ok(out)
}

pub(crate) fn twist_members(surface: &Surface, members: &[KClass], multiple: &BigInt) -> Result<Vec<KClass>> {
    let d = surface.canonical_class().scale(multiple);
    members.iter().map(|m| twist(m, &d)).collect()
}

fn push_rotation(log: &mut MutationLog, current: &mut Collection, mults: &mut [BigInt], j: usize) -> Result<()> {
    let next = rotate_twist(current, j)?;
    log.push(Step::Rotate {
        index: j,
        before: current.members().to_vec(),
        after: next.members().to_vec(),
    });
    mults.rotate_left(j - 1);
    *current = next;
    Ok(())
}

/// Rotates and re-orders until `mu_+ - mu_- < K^2`.
pub fn reduce_spread(c: &Collection) -> Result<(Collection, MutationLog)> {
    let mut mults = vec![BigInt::one(); c.len()];
    reduce_spread_tracking(c, &mut mults)
}

fn reduce_spread_tracking(c: &Collection, mults: &mut [BigInt]) -> Result<(Collection, MutationLog)> {
    require_exceptional(c)?;
    require_positive_ranks(c)?;
    let k2 = BigRational::from_integer(c.surface().k_squared());
    let mu = slopes(c)?;
    if mu.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("spread reduction needs a hom-ordered collection".into()));
    }
    let mut log = MutationLog::default();
    let mut current = c.clone();
    for _ in 0..SPREAD_ROUND_CAP {
        let mu = slopes(&current)?;
        let spread = &mu[mu.len() - 1] - &mu[0];
        if spread < k2 {
            return Ok((current, log));
        }
        let j = if spread > k2 {
            let bound = &mu[0] + &k2;
            // first s with mu(E_s) beyond mu(E_1) + K^2
            mu.iter().position(|m| *m > bound).expect("spread exceeds K^2") + 1
        } else {
            // everything of minimal slope moves to the top
            mu.iter().position(|m| *m > mu[0]).expect("spread is positive") + 1
        };
        push_rotation(&mut log, &mut current, mults, j)?;
        let (ordered, order_log) = order_hom(&current)?;
        log.extend(order_log);
        current = ordered;
    }
    Err(Error::IterationCap(SPREAD_ROUND_CAP))
}

/// Restriction degrees to `e_index` that occur in the members' splitting types.
fn member_degrees(members: &[KClass], e_index: usize) -> Result<Vec<Vec<BigInt>>> {
    members
        .iter()
        .map(|m| Ok(splitting_type(m.rank(), &m.degree_on(e_index))?.degrees()))
        .collect()
}

/// Rank-1 members `O(D)`, `O(D + e + K)` in this order, which are excluded when `K^2 = 1`.
pub fn find_forbidden_pair(surface: &Surface, members: &[KClass], e_index: usize) -> Result<Option<(usize, usize)>> {
    if surface.k_squared() != BigInt::one() {
        return Ok(None);
    }
    let shift = forbidden_shift(surface, e_index)?;
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (a, b) = (&members[i], &members[j]);
            if a.rank().is_one() && b.rank().is_one() && b.c1() - a.c1() == shift {
                return Ok(Some((i + 1, j + 1)));
            }
        }
    }
    Ok(None)
}

/// `G = F - alpha [O_e(-1)]` for `F = sum mult_i [E_i]`, with `alpha = chi(F, O_e(-1))`.
pub(crate) fn peel_members(
    surface: &Surface,
    members: &[KClass],
    mults: &[BigInt],
    e_index: usize,
) -> Result<(KClass, BigInt)> {
    if members.len() != mults.len() {
        return Err(Error::InvalidInput(format!(
            "{} multiplicities for {} members",
            mults.len(),
            members.len()
        )));
    }
    if let Some(m) = mults.iter().find(|m| !m.is_positive()) {
        return Err(Error::InvalidInput(format!("multiplicity {m} is not positive")));
    }
    if let Some((first, second)) = find_forbidden_pair(surface, members, e_index)? {
        return Err(Error::ForbiddenPair { first, second });
    }
    let l = curve_class(surface, e_index, &BigInt::from(-1))?;
    for (i, degrees) in member_degrees(members, e_index)?.into_iter().enumerate() {
        if let Some(bad) = degrees.iter().find(|d| **d < BigInt::from(-1) || d.is_positive()) {
            return Err(Error::RotateFirst {
                index: i + 1,
                degree: bad.to_string(),
            });
        }
    }
    let mut f = KClass::zero(surface.blowups());
    for (m, k) in members.iter().zip(mults) {
        surface.check(m.c1())?;
        f = &f + &m.scale(k);
    }
    let alpha = euler_form_unchecked(surface, &f, &l);
    if alpha.is_negative() {
        return Err(Error::Invariant(format!("chi(F, O_e(-1)) = {alpha} is negative")));
    }
    let g = &f - &l.scale(&alpha);
    let e = surface.exceptional_curve(e_index)?;
    let beta = f.rank() - &alpha;
    let checks = [
        (g.c1().dot(&e), BigInt::zero(), "c1(G).e"),
        (euler_form_unchecked(surface, &g, &l), BigInt::zero(), "chi(G, O_e(-1))"),
        (euler_form_unchecked(surface, &l, &f), -beta, "chi(O_e(-1), F)"),
        (euler_form_unchecked(surface, &l, &g), -g.rank(), "chi(O_e(-1), G)"),
    ];
    for (found, expected, what) in checks {
        if found != expected {
            return Err(Error::Invariant(format!("{what} = {found}, expected {expected}")));
        }
    }
    Ok((g, alpha))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeled {
    pub g: KClass,
    pub alpha: BigInt,
    pub log: MutationLog,
}

/// Removes the `O_e(-1)` layer from `F = sum mult_i [E_i]`.
pub fn peel_curve(c: &Collection, mults: &[BigInt], e_index: usize) -> Result<Peeled> {
    let (g, alpha) = peel_members(c.surface(), c.members(), mults, e_index)?;
    let mut log = MutationLog::default();
    log.push(Step::Peel {
        e_index,
        mults: mults.to_vec(),
        alpha: alpha.clone(),
        before: c.members().to_vec(),
        after: g.clone(),
    });
    Ok(Peeled { g, alpha, log })
}

/// Moves rank-0 members out of the way by mutating them across their
/// neighbours until they become classes of positive rank.
pub fn clear_torsion(c: &Collection) -> Result<(Collection, MutationLog)> {
    require_exceptional(c)?;
    let mut log = MutationLog::default();
    let mut current = c.clone();
    let n = current.len();
    while let Some(start) = current.members().iter().position(|m| m.rank().is_zero()) {
        let mut i = start;
        let mut step = |current: &mut Collection, pos: usize, direction: Direction| -> Result<()> {
            let next = mutate_collection(current, pos, direction)?;
            log.push(Step::Mutate {
                position: pos,
                direction,
                before: current.members().to_vec(),
                after: next.members().to_vec(),
            });
            *current = next;
            Ok(())
        };
        while current.members()[i].rank().is_zero() && i + 1 < n {
            step(&mut current, i + 1, Direction::Right)?;
            i += 1;
        }
        while current.members()[i].rank().is_zero() && i > 0 {
            step(&mut current, i, Direction::Left)?;
            i -= 1;
        }
        if current.members()[i].rank().is_zero() {
            return Err(Error::Domain(format!(
                "torsion member {} cannot be mutated into positive rank",
                start + 1
            )));
        }
    }
    Ok((current, log))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    /// The class on the blow-down.
    pub descended: KClass,
    /// `G` before deleting the last coordinate.
    pub peeled: KClass,
    pub alpha: BigInt,
    /// The collection right before peeling.
    pub normalized: Collection,
    pub mults: Vec<BigInt>,
    pub log: MutationLog,
}

/// The full single-level descent along the last exceptional curve `e_d`.
pub fn normalize_and_descend(c: &Collection, mults: &[BigInt]) -> Result<Descent> {
    let surface = c.surface().clone();
    let e_index = surface.blowups();
    if e_index == 0 {
        return Err(Error::Domain("the plane has no exceptional curve to descend along".into()));
    }
    if mults.len() != c.len() {
        return Err(Error::InvalidInput(format!(
            "{} multiplicities for {} members",
            mults.len(),
            c.len()
        )));
    }
    if let Some(m) = mults.iter().find(|m| !m.is_positive()) {
        return Err(Error::InvalidInput(format!("multiplicity {m} is not positive")));
    }
    if let Some((first, second)) = find_forbidden_pair(&surface, c.members(), e_index)? {
        return Err(Error::ForbiddenPair { first, second });
    }
    let mut mults = mults.to_vec();
    let mut log = MutationLog::default();

    let (current, l) = clear_torsion(c).map_err(|e| e.in_stage("clear_torsion"))?;
    log.extend(l);
    let (current, l) = order_hom(&current).map_err(|e| e.in_stage("order_hom"))?;
    log.extend(l);
    let (mut current, l) =
        reduce_spread_tracking(&current, &mut mults).map_err(|e| e.in_stage("reduce_spread"))?;
    log.extend(l);

    let j = rotation_for_groups(&current, e_index).map_err(|e| e.in_stage("rotate"))?;
    push_rotation(&mut log, &mut current, &mut mults, j).map_err(|e| e.in_stage("rotate"))?;

    let degrees = member_degrees(current.members(), e_index).map_err(|e| e.in_stage("twist"))?;
    let top = degrees.iter().flatten().max().cloned().expect("non-empty collection");
    let in_range = degrees
        .iter()
        .flatten()
        .all(|d| *d == BigInt::zero() || *d == BigInt::from(-1));
    if !in_range {
        let after = twist_members(&surface, current.members(), &top).map_err(|e| e.in_stage("twist"))?;
        let next = current.with_members(after);
        recheck(&next, "twist").map_err(|e| e.in_stage("twist"))?;
        log.push(Step::Twist {
            multiple: top,
            before: current.members().to_vec(),
            after: next.members().to_vec(),
        });
        current = next;
    }

    let peeled = peel_curve(&current, &mults, e_index).map_err(|e| e.in_stage("peel"))?;
    log.extend(peeled.log);
    let descended = descend_class(&surface, &peeled.g).map_err(|e| e.in_stage("descend"))?;
    log.push(Step::Descend {
        e_index,
        before: peeled.g.clone(),
        after: descended.clone(),
    });
    Ok(Descent {
        descended,
        peeled: peeled.g,
        alpha: peeled.alpha,
        normalized: current,
        mults,
        log,
    })
}

/// Groups runs of equal slope into their sum, finds the zero-type rotation of
/// the groups, and returns the member position where the chosen group starts.
fn rotation_for_groups(c: &Collection, e_index: usize) -> Result<usize> {
    let mu = slopes(c)?;
    let mut starts = vec![0usize];
    for i in 1..mu.len() {
        if mu[i] != mu[i - 1] {
            starts.push(i);
        }
    }
    let groups: Vec<KClass> = starts
        .iter()
        .enumerate()
        .map(|(g, &s)| {
            let end = starts.get(g + 1).copied().unwrap_or(mu.len());
            let mut sum = KClass::zero(c.surface().blowups());
            for m in &c.members()[s..end] {
                sum = &sum + m;
            }
            sum
        })
        .collect();
    let rotation = rotation_index(c.surface(), &groups, e_index)?;
    Ok(starts[rotation.index - 1] + 1)
}

/// The divisor `e + K` whose presence between rank-1 members is excluded at `K^2 = 1`.
pub fn forbidden_shift(surface: &Surface, e_index: usize) -> Result<DivisorClass> {
    Ok(&surface.exceptional_curve(e_index)? + &surface.canonical_class())
}
