use serde::{Deserialize, Serialize};

use super::ideal_violation;
use crate::bitset::ElemSet;
use crate::classify::{l_algebra_violation, require_l};
use crate::error::{LalgError, Result};
use crate::morphism::Morphism;
use crate::table::AlgebraTable;

/// `X/I` with the projection `X → X/I` and the classes of the congruence.
///
/// Classes are listed with the class of the unit first and the rest by their
/// smallest member; class `k` becomes index `k` of the quotient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientResult {
    pub quotient: AlgebraTable,
    pub projection: Morphism,
    pub classes: Vec<ElemSet>,
}

/// `x ≡ y (mod I)` iff `x·y ∈ I` and `y·x ∈ I`.
pub fn congruent(t: &AlgebraTable, ideal: &ElemSet, x: usize, y: usize) -> bool {
    ideal.contains(t.op(x, y)) && ideal.contains(t.op(y, x))
}

/// Class index of every element and the class list. Fails when the relation
/// is not an equivalence compatible with the operation.
pub(crate) fn congruence_classes(t: &AlgebraTable, ideal: &ElemSet) -> Result<(Vec<usize>, Vec<ElemSet>)> {
    let n = t.size();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<ElemSet> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let class: ElemSet = (x..n).filter(|&y| congruent(t, ideal, x, y)).collect();
        for y in class.iter() {
            if class_of[y] != usize::MAX {
                return Err(LalgError::CongruenceUndefined(format!(
                    "{y} is related to {x} and to a member of another class"
                )));
            }
            class_of[y] = classes.len();
        }
        classes.push(class);
    }
    for class in &classes {
        let members: Vec<usize> = class.iter().collect();
        for &a in &members {
            for &b in &members {
                if !congruent(t, ideal, a, b) {
                    return Err(LalgError::CongruenceUndefined(format!("not transitive at ({a}, {b})")));
                }
            }
        }
    }
    // compatibility: x ≡ x' ⇒ x·y ≡ x'·y and y·x ≡ y·x'
    for x in 0..n {
        for x2 in classes[class_of[x]].iter() {
            for y in 0..n {
                if class_of[t.op(x, y)] != class_of[t.op(x2, y)] || class_of[t.op(y, x)] != class_of[t.op(y, x2)] {
                    return Err(LalgError::CongruenceUndefined(format!(
                        "{x} ≡ {x2} but products with {y} are not congruent"
                    )));
                }
            }
        }
    }
    Ok((class_of, classes))
}

pub fn quotient(t: &AlgebraTable, ideal: &ElemSet) -> Result<QuotientResult> {
    require_l(t)?;
    t.check_set(ideal)?;
    if let Some(v) = ideal_violation(t, ideal) {
        return Err(LalgError::NotAnIdeal(format!("{:?} fails at {:?}", v.condition, v.elements)));
    }
    let (class_of, classes) = congruence_classes(t, ideal)?;
    if classes[0] != *ideal {
        return Err(LalgError::CongruenceUndefined(format!(
            "class of the unit is {:?}, not the ideal",
            classes[0]
        )));
    }
    let k = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c.first().expect("non-empty class")).collect();
    let cells = (0..k * k)
        .map(|c| class_of[t.op(reps[c / k], reps[c % k])])
        .collect();
    let q = AlgebraTable::from_cells_unchecked(k, cells);
    if let Some(w) = l_algebra_violation(&q) {
        return Err(LalgError::falsified(
            "quotient is an L-algebra",
            format!("{} fails at {:?}", w.axiom, w.elements),
        ));
    }
    let projection = Morphism::new(t.clone(), q.clone(), class_of)?;
    Ok(QuotientResult {
        quotient: q,
        projection,
        classes,
    })
}
