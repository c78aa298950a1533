//! Replayable records of the moves applied to a collection.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::chern::{descend_class, KClass};
use crate::error::{Error, Result};
use crate::json;
use crate::mutation::{mutate_pair, Direction};
use crate::picard::Surface;
use crate::pipeline::{peel_members, rotate_members, twist_members};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// A left mutation of a descending ext-pair at `position`.
    Order {
        position: usize,
        before: Vec<KClass>,
        after: Vec<KClass>,
    },
    Mutate {
        position: usize,
        direction: Direction,
        before: Vec<KClass>,
        after: Vec<KClass>,
    },
    /// `(E_j, ..., E_n, E_1(-K), ..., E_{j-1}(-K))` with `j = index`.
    Rotate {
        index: usize,
        before: Vec<KClass>,
        after: Vec<KClass>,
    },
    /// Every member twisted by `multiple * K`.
    Twist {
        #[serde(with = "json::bigint")]
        multiple: BigInt,
        before: Vec<KClass>,
        after: Vec<KClass>,
    },
    Peel {
        e_index: usize,
        #[serde(with = "json::bigint_vec")]
        mults: Vec<BigInt>,
        #[serde(with = "json::bigint")]
        alpha: BigInt,
        before: Vec<KClass>,
        after: KClass,
    },
    Descend {
        e_index: usize,
        before: KClass,
        after: KClass,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum State<'a> {
    Members(&'a [KClass]),
    Class(&'a KClass),
}

impl Step {
    pub fn kind(&self) -> &'static str {
        match self {
            Step::Order { .. } => "order",
            Step::Mutate { .. } => "mutate",
            Step::Rotate { .. } => "rotate",
            Step::Twist { .. } => "twist",
            Step::Peel { .. } => "peel",
            Step::Descend { .. } => "descend",
        }
    }

    fn before(&self) -> State<'_> {
        match self {
            Step::Order { before, .. }
            | Step::Mutate { before, .. }
            | Step::Rotate { before, .. }
            | Step::Twist { before, .. }
            | Step::Peel { before, .. } => State::Members(before),
            Step::Descend { before, .. } => State::Class(before),
        }
    }

    fn after(&self) -> State<'_> {
        match self {
            Step::Order { after, .. }
            | Step::Mutate { after, .. }
            | Step::Rotate { after, .. }
            | Step::Twist { after, .. } => State::Members(after),
            Step::Peel { after, .. } | Step::Descend { after, .. } => State::Class(after),
        }
    }

    fn surface(&self) -> Result<Surface> {
        let blowups = match self.before() {
            State::Members(m) => m
                .first()
                .ok_or_else(|| Error::InvalidInput(format!("{} step with no members", self.kind())))?
                .blowups(),
            State::Class(c) => c.blowups(),
        };
        Surface::generic(blowups)
    }

    /// Recomputes the step from its `before` state and parameters.
    pub fn verify(&self) -> Result<()> {
        let surface = self.surface()?;
        let matches = match self {
            Step::Order {
                position,
                before,
                after,
            } => replay_mutation(&surface, before, *position, Direction::Left)? == *after,
            Step::Mutate {
                position,
                direction,
                before,
                after,
            } => replay_mutation(&surface, before, *position, *direction)? == *after,
            Step::Rotate { index, before, after } => rotate_members(&surface, before, *index)? == *after,
            Step::Twist {
                multiple,
                before,
                after,
            } => twist_members(&surface, before, multiple)? == *after,
            Step::Peel {
                e_index,
                mults,
                alpha,
                before,
                after,
            } => {
                let (g, a) = peel_members(&surface, before, mults, *e_index)?;
                g == *after && a == *alpha
            }
            Step::Descend {
                e_index,
                before,
                after,
            } => {
                if *e_index != surface.blowups() {
                    return Err(Error::InvalidInput(format!(
                        "descent along e_{e_index} on a surface with {} blow-ups",
                        surface.blowups()
                    )));
                }
                descend_class(&surface, before)? == *after
            }
        };
        if matches {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "{} step does not reproduce its recorded result",
                self.kind()
            )))
        }
    }
}

fn replay_mutation(surface: &Surface, before: &[KClass], position: usize, direction: Direction) -> Result<Vec<KClass>> {
    if position == 0 || position >= before.len() {
        return Err(Error::InvalidInput(format!(
            "mutation position {position} out of range 1..{}",
            before.len()
        )));
    }
    let (a, b) = mutate_pair(surface, &before[position - 1], &before[position], direction)?;
    let mut out = before.to_vec();
    out[position - 1] = a;
    out[position] = b;
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MutationLog {
    pub steps: Vec<Step>,
}

impl MutationLog {
    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: MutationLog) {
        self.steps.extend(other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn kinds(&self) -> Vec<&'static str> {
        self.steps.iter().map(Step::kind).collect()
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("steps serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<MutationLog> {
        let steps = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l)
                    .map_err(|e| Error::InvalidInput(format!("log line {}: {e}", i + 1)))
            })
            .collect::<Result<_>>()?;
        Ok(MutationLog { steps })
    }

    /// Re-executes every step and checks that each one starts where the previous one ended.
    pub fn replay(&self) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 && self.steps[i - 1].after() != step.before() {
                return Err(Error::Invariant(format!(
                    "step {} ({}) does not start from the result of step {}",
                    i + 1,
                    step.kind(),
                    i
                )));
            }
            step.verify().map_err(|e| match e {
                Error::Invariant(msg) => Error::Invariant(format!("step {}: {msg}", i + 1)),
                other => other,
            })?;
        }
        Ok(())
    }
}
