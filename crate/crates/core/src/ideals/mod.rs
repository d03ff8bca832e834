//! Ideals of L-algebras.
//!
//! A subset `I` is an ideal when it contains the unit and
//!
//! * (I1) `x ∈ I` and `x·y ∈ I` imply `y ∈ I`,
//! * (I2) `x ∈ I` implies `y·x ∈ I`,
//! * (I3) `x ∈ I` implies `(x·y)·y ∈ I`,
//! * (I4) `x ∈ I` implies `y·(x·y) ∈ I`,
//!
//! for all `y`. Ideals are represented as [`ElemSet`]s of the parent table.

mod lattice;
mod quotient;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use lattice::{
    all_ideals, ideal_join, is_meet_prime, is_prime_ideal, is_simple, spectrum, verify_join_membership,
    IdealLattice, Spectrum,
};
pub use quotient::{congruent, quotient, QuotientResult};
pub(crate) use lattice::{build_lattice, spectrum_of};

use crate::bitset::ElemSet;
use crate::classify::{find_violation, Axiom};
use crate::error::Result;
use crate::table::AlgebraTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdealCondition {
    MissingUnit,
    I1,
    I2,
    I3,
    I4,
}

/// Elements exhibiting a failed ideal condition. For (I1) the pair is
/// `(x, y)` with `x, x·y ∈ I` and `y ∉ I`; for (I2)–(I4) it is `(x, y)` with
/// `x ∈ I` and the derived element outside `I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealViolation {
    pub condition: IdealCondition,
    pub elements: Vec<usize>,
}

/// Outcome of [`is_ideal`], including the verdicts of the shortened
/// characterisations for KL- and CKL-algebras when they apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCheck {
    pub violation: Option<IdealViolation>,
    /// (I1) ∧ (I3), when the table is KL.
    pub kl_shortcut: Option<bool>,
    /// `1 ∈ I` ∧ (I1), when the table is CKL.
    pub ckl_shortcut: Option<bool>,
}

impl IdealCheck {
    pub fn is_ideal(&self) -> bool {
        self.violation.is_none()
    }

    /// Whether the shortcut verdicts that apply agree with the full check.
    pub fn shortcuts_agree(&self) -> bool {
        let full = self.is_ideal();
        self.kl_shortcut.is_none_or(|v| v == full) && self.ckl_shortcut.is_none_or(|v| v == full)
    }
}

fn condition_violation(t: &AlgebraTable, s: &ElemSet, cond: IdealCondition) -> Option<IdealViolation> {
    let n = t.size();
    let hit = |elements: Vec<usize>| Some(IdealViolation { condition: cond, elements });
    if cond == IdealCondition::MissingUnit {
        return if s.contains(0) { None } else { hit(vec![0]) };
    }
    for x in s.iter() {
        for y in 0..n {
            let bad = match cond {
                IdealCondition::I1 => !s.contains(y) && s.contains(t.op(x, y)),
                IdealCondition::I2 => !s.contains(t.op(y, x)),
                IdealCondition::I3 => !s.contains(t.op(t.op(x, y), y)),
                IdealCondition::I4 => !s.contains(t.op(y, t.op(x, y))),
                IdealCondition::MissingUnit => unreachable!(),
            };
            if bad {
                return hit(vec![x, y]);
            }
        }
    }
    None
}

/// First violated condition, checked in the order unit, (I1), …, (I4).
pub fn ideal_violation(t: &AlgebraTable, s: &ElemSet) -> Option<IdealViolation> {
    [
        IdealCondition::MissingUnit,
        IdealCondition::I1,
        IdealCondition::I2,
        IdealCondition::I3,
        IdealCondition::I4,
    ]
    .into_iter()
    .find_map(|c| condition_violation(t, s, c))
}

pub fn is_ideal(t: &AlgebraTable, s: &ElemSet) -> Result<IdealCheck> {
    t.check_set(s)?;
    let violation = ideal_violation(t, s);
    let kl = find_violation(t, Axiom::Kl).is_none();
    let ckl = kl && find_violation(t, Axiom::Exchange).is_none();
    let holds = |c| condition_violation(t, s, c).is_none();
    let kl_shortcut = kl.then(|| {
        holds(IdealCondition::MissingUnit) && holds(IdealCondition::I1) && holds(IdealCondition::I3)
    });
    let ckl_shortcut = ckl.then(|| holds(IdealCondition::MissingUnit) && holds(IdealCondition::I1));
    Ok(IdealCheck {
        violation,
        kl_shortcut,
        ckl_shortcut,
    })
}

/// Least ideal containing `seed` (and the unit), by saturating (I1)–(I4).
pub fn generated_ideal(t: &AlgebraTable, seed: &ElemSet) -> Result<ElemSet> {
    t.check_set(seed)?;
    Ok(close(t, *seed))
}

pub(crate) fn close(t: &AlgebraTable, seed: ElemSet) -> ElemSet {
    let n = t.size();
    let mut s = seed;
    s.insert(0);
    loop {
        let before = s;
        for x in before.iter() {
            for y in 0..n {
                let xy = t.op(x, y);
                s.insert(t.op(y, x));
                s.insert(t.op(xy, y));
                s.insert(t.op(y, xy));
                if s.contains(xy) {
                    s.insert(y);
                }
            }
        }
        if s == before {
            return s;
        }
    }
}

/// Principal ideals `⟨x⟩` for every element.
pub fn principal_ideals(t: &AlgebraTable) -> Vec<ElemSet> {
    (0..t.size())
        .map(|x| close(t, ElemSet::singleton(x)))
        .collect()
}

/// Every ideal of `t`, sorted by cardinality and then by bitmask.
///
/// Starts from `{1}` and repeatedly joins an ideal with one more principal
/// ideal; every ideal is reached because it is the join of its principal
/// ideals.
pub fn ideal_sets(t: &AlgebraTable) -> Vec<ElemSet> {
    ideal_sets_from(t, &principal_ideals(t))
}

pub(crate) fn ideal_sets_from(t: &AlgebraTable, principal: &[ElemSet]) -> Vec<ElemSet> {
    let mut gens = principal.to_vec();
    sort_ideals(&mut gens);
    gens.dedup();
    let start = close(t, ElemSet::singleton(0));
    let mut seen: HashSet<ElemSet> = HashSet::from([start]);
    let mut frontier = vec![start];
    while let Some(ideal) = frontier.pop() {
        for g in &gens {
            if g.is_subset(&ideal) {
                continue;
            }
            let next = close(t, ideal.union(g));
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<ElemSet> = seen.into_iter().collect();
    sort_ideals(&mut out);
    out
}

pub(crate) fn sort_ideals(v: &mut [ElemSet]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}
