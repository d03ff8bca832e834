//! Axiom checking and class profiles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ideals;
use crate::table::AlgebraTable;

/// The identities and order conditions a table can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `1 · x = x`
    LeftUnit,
    /// `x · 1 = 1`
    RightUnit,
    /// `x · x = 1`
    Diagonal,
    /// `(x·y)·(x·z) = (y·x)·(y·z)`
    Cycloid,
    /// `x·y = y·x = 1 ⇒ x = y`
    Antisymmetry,
    /// `x·(y·x) = 1`
    Kl,
    /// `x·(y·z) = y·(x·z)`
    Exchange,
    /// `x·(y·z) = (x·y)·(x·z)`
    SelfDistributive,
    /// any two elements are comparable
    Linearity,
    /// a least element exists
    Bounded,
    /// exactly two ideals and at least two elements
    Simplicity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::LeftUnit => "1·x = x",
            Axiom::RightUnit => "x·1 = 1",
            Axiom::Diagonal => "x·x = 1",
            Axiom::Cycloid => "(x·y)·(x·z) = (y·x)·(y·z)",
            Axiom::Antisymmetry => "x·y = y·x = 1 ⇒ x = y",
            Axiom::Kl => "x·(y·x) = 1",
            Axiom::Exchange => "x·(y·z) = y·(x·z)",
            Axiom::SelfDistributive => "x·(y·z) = (x·y)·(x·z)",
            Axiom::Linearity => "natural order is total",
            Axiom::Bounded => "natural order has a least element",
            Axiom::Simplicity => "exactly two ideals, n ≥ 2",
        };
        f.write_str(s)
    }
}

/// Class flags reported by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    L,
    Kl,
    Ckl,
    Hilbert,
    Linear,
    Bounded,
    Simple,
}

/// A tuple of element indices violating `axiom`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: Axiom,
    pub elements: Vec<usize>,
}

impl Witness {
    fn new(axiom: Axiom, elements: Vec<usize>) -> Self {
        Witness { axiom, elements }
    }

    /// Re-evaluates the witness against `t`; `true` when it still exhibits a
    /// violation of its axiom.
    pub fn violates(&self, t: &AlgebraTable) -> bool {
        violates_at(t, self.axiom, &self.elements)
    }
}

fn violates_at(t: &AlgebraTable, axiom: Axiom, e: &[usize]) -> bool {
    let n = t.size();
    if e.iter().any(|&x| x >= n) {
        return false;
    }
    match (axiom, e) {
        (Axiom::LeftUnit, &[x]) => t.op(0, x) != x,
        (Axiom::RightUnit, &[x]) => t.op(x, 0) != 0,
        (Axiom::Diagonal, &[x]) => t.op(x, x) != 0,
        (Axiom::Cycloid, &[x, y, z]) => {
            t.op(t.op(x, y), t.op(x, z)) != t.op(t.op(y, x), t.op(y, z))
        }
        (Axiom::Antisymmetry, &[x, y]) => x != y && t.op(x, y) == 0 && t.op(y, x) == 0,
        (Axiom::Kl, &[x, y]) => t.op(x, t.op(y, x)) != 0,
        (Axiom::Exchange, &[x, y, z]) => t.op(x, t.op(y, z)) != t.op(y, t.op(x, z)),
        (Axiom::SelfDistributive, &[x, y, z]) => {
            t.op(x, t.op(y, z)) != t.op(t.op(x, y), t.op(x, z))
        }
        (Axiom::Linearity, &[x, y]) => !t.leq(x, y) && !t.leq(y, x),
        (Axiom::Bounded, &[x, y]) => {
            // two distinct minimal elements
            let minimal = |m: usize| (0..n).all(|z| z == m || !t.leq(z, m));
            x != y && minimal(x) && minimal(y)
        }
        (Axiom::Simplicity, members) => {
            if n < 2 {
                return true;
            }
            let s = members.iter().copied().collect();
            members.len() > 1
                && members.len() < n
                && ideals::is_ideal(t, &s).map(|c| c.is_ideal()).unwrap_or(false)
        }
        _ => false,
    }
}

/// First violation of a single axiom, scanning tuples in lexicographic order.
pub fn find_violation(t: &AlgebraTable, axiom: Axiom) -> Option<Witness> {
    let n = t.size();
    let w = |e: Vec<usize>| Some(Witness::new(axiom, e));
    match axiom {
        Axiom::LeftUnit => (0..n).find(|&x| t.op(0, x) != x).and_then(|x| w(vec![x])),
        Axiom::RightUnit => (0..n).find(|&x| t.op(x, 0) != 0).and_then(|x| w(vec![x])),
        Axiom::Diagonal => (0..n).find(|&x| t.op(x, x) != 0).and_then(|x| w(vec![x])),
        Axiom::Antisymmetry | Axiom::Kl | Axiom::Linearity | Axiom::Bounded => {
            for x in 0..n {
                for y in 0..n {
                    if violates_at(t, axiom, &[x, y]) {
                        return w(vec![x, y]);
                    }
                }
            }
            None
        }
        Axiom::Cycloid | Axiom::Exchange | Axiom::SelfDistributive => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if violates_at(t, axiom, &[x, y, z]) {
                            return w(vec![x, y, z]);
                        }
                    }
                }
            }
            None
        }
        Axiom::Simplicity => {
            if n < 2 {
                return w(vec![]);
            }
            let lattice = ideals::ideal_sets(t);
            lattice
                .into_iter()
                .find(|s| s.len() > 1 && s.len() < n)
                .and_then(|s| w(s.to_vec()))
        }
    }
}

/// The boolean profile of a table with one witness per failed flag.
///
/// Flags are conjunctive along the subclass chain: a table that is not an
/// L-algebra has every flag false, and `is_ckl` requires `is_kl`. A flag that
/// fails because a weaker flag failed carries the weaker flag's witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub is_l: bool,
    pub is_kl: bool,
    pub is_ckl: bool,
    pub is_hilbert: bool,
    pub is_linear: bool,
    pub is_bounded: bool,
    pub is_simple: bool,
    pub witnesses: BTreeMap<Property, Witness>,
}

impl ClassificationReport {
    pub fn has(&self, p: Property) -> bool {
        match p {
            Property::L => self.is_l,
            Property::Kl => self.is_kl,
            Property::Ckl => self.is_ckl,
            Property::Hilbert => self.is_hilbert,
            Property::Linear => self.is_linear,
            Property::Bounded => self.is_bounded,
            Property::Simple => self.is_simple,
        }
    }

    pub fn flags(&self) -> Vec<Property> {
        [
            Property::L,
            Property::Kl,
            Property::Ckl,
            Property::Hilbert,
            Property::Linear,
            Property::Bounded,
            Property::Simple,
        ]
        .into_iter()
        .filter(|&p| self.has(p))
        .collect()
    }
}

const L_AXIOMS: [Axiom; 5] = [
    Axiom::LeftUnit,
    Axiom::RightUnit,
    Axiom::Diagonal,
    Axiom::Cycloid,
    Axiom::Antisymmetry,
];

/// First violated L-algebra axiom, if any.
pub fn l_algebra_violation(t: &AlgebraTable) -> Option<Witness> {
    L_AXIOMS.iter().find_map(|&a| find_violation(t, a))
}

pub fn is_l_algebra(t: &AlgebraTable) -> bool {
    l_algebra_violation(t).is_none()
}

/// Decides every class flag of `t` by exhaustive checking.
pub fn validate(t: &AlgebraTable) -> ClassificationReport {
    let mut witnesses = BTreeMap::new();
    let l_fail = l_algebra_violation(t);

    let mut chain = |prop: Property, parent: Option<&Witness>, own: Option<Axiom>| {
        let fail = parent
            .cloned()
            .or_else(|| own.and_then(|a| find_violation(t, a)));
        if let Some(wit) = &fail {
            witnesses.insert(prop, wit.clone());
        }
        fail
    };

    let l = chain(Property::L, l_fail.as_ref(), None);
    let kl = chain(Property::Kl, l.as_ref(), Some(Axiom::Kl));
    let ckl = chain(Property::Ckl, kl.as_ref(), Some(Axiom::Exchange));
    let hilbert = chain(Property::Hilbert, ckl.as_ref(), Some(Axiom::SelfDistributive));
    let linear = chain(Property::Linear, l.as_ref(), Some(Axiom::Linearity));
    let bounded = chain(Property::Bounded, l.as_ref(), Some(Axiom::Bounded));
    let simple = chain(Property::Simple, l.as_ref(), Some(Axiom::Simplicity));

    ClassificationReport {
        n: t.size(),
        is_l: l.is_none(),
        is_kl: kl.is_none(),
        is_ckl: ckl.is_none(),
        is_hilbert: hilbert.is_none(),
        is_linear: linear.is_none(),
        is_bounded: bounded.is_none(),
        is_simple: simple.is_none(),
        witnesses,
    }
}

/// Validates raw rows, reporting shape or range problems as errors.
pub fn validate_rows(rows: Vec<Vec<usize>>) -> crate::Result<ClassificationReport> {
    Ok(validate(&AlgebraTable::new(rows)?))
}

pub(crate) fn require_l(t: &AlgebraTable) -> crate::Result<()> {
    match l_algebra_violation(t) {
        None => Ok(()),
        Some(w) => Err(crate::LalgError::NotAnLAlgebra(format!(
            "{} fails at {:?}",
            w.axiom, w.elements
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_a, make_lh};

    #[test]
    fn trivial_algebra_flags() {
        let r = validate(&AlgebraTable::trivial());
        assert!(r.is_l && r.is_kl && r.is_ckl && r.is_hilbert && r.is_linear && r.is_bounded);
        assert!(!r.is_simple);
        assert_eq!(r.witnesses.len(), 1);
    }

    #[test]
    fn a4_is_simple_linear_ckl_but_not_hilbert() {
        let a4 = make_a(4).unwrap();
        let r = validate(&a4);
        assert!(r.is_l && r.is_kl && r.is_ckl && r.is_linear && r.is_simple && r.is_bounded);
        assert!(!r.is_hilbert);
        // x1·(x1·x3) = x1 while (x1·x1)·(x1·x3) = x2
        assert_eq!(a4.op(1, a4.op(1, 3)), 1);
        assert_eq!(a4.op(a4.op(1, 1), a4.op(1, 3)), 2);
        let w = &r.witnesses[&Property::Hilbert];
        assert_eq!(w.axiom, Axiom::SelfDistributive);
        assert!(w.violates(&a4));
    }

    #[test]
    fn antisymmetry_failure_is_reported_not_raised() {
        let t = AlgebraTable::new(vec![vec![0, 1, 2], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        let r = validate(&t);
        assert!(!r.is_l);
        let w = &r.witnesses[&Property::L];
        assert_eq!(w.axiom, Axiom::Antisymmetry);
        assert_eq!(w.elements, vec![1, 2]);
        assert!(!r.is_kl && !r.is_hilbert && !r.is_simple);
        for w in r.witnesses.values() {
            assert!(w.violates(&t));
        }
    }

    #[test]
    fn lh_is_hilbert_not_simple() {
        let r = validate(&make_lh(3).unwrap());
        assert!(r.is_hilbert && r.is_ckl && r.is_kl && r.is_linear);
        assert!(!r.is_simple);
        let w = &r.witnesses[&Property::Simple];
        assert!(w.violates(&make_lh(3).unwrap()));
    }

    #[test]
    fn malformed_rows_are_errors() {
        assert!(validate_rows(vec![vec![0, 5], vec![0, 0]]).is_err());
    }
}
