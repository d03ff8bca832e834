//! The natural order `x ≤ y ⇔ x·y = 1` and the element classes defined by it.

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::classify::require_l;
use crate::error::Result;
use crate::table::AlgebraTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStructure {
    /// `leq[x][y]` iff `x ≤ y`.
    pub leq: Vec<Vec<bool>>,
    /// Covering pairs `(upper, lower)`, sorted.
    pub hasse_edges: Vec<(usize, usize)>,
    pub minimal_elements: ElemSet,
    /// `x` with `y·x = x` for every `y > x`.
    pub invariant_elements: ElemSet,
    /// `x ≠ 1` with `y·x ≤ x` for every `y > x`.
    pub prime_elements: ElemSet,
}

pub fn order_structure(t: &AlgebraTable) -> Result<OrderStructure> {
    require_l(t)?;
    let n = t.size();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| t.leq(x, y)).collect())
        .collect();
    let lt = |x: usize, y: usize| x != y && leq[x][y];

    let mut hasse_edges = Vec::new();
    for hi in 0..n {
        for lo in 0..n {
            if lt(lo, hi) && !(0..n).any(|m| lt(lo, m) && lt(m, hi)) {
                hasse_edges.push((hi, lo));
            }
        }
    }

    let minimal_elements = (0..n).filter(|&x| !(0..n).any(|y| lt(y, x))).collect();
    let invariant_elements = (0..n)
        .filter(|&x| (0..n).filter(|&y| lt(x, y)).all(|y| t.op(y, x) == x))
        .collect();
    let prime_elements = (1..n)
        .filter(|&x| (0..n).filter(|&y| lt(x, y)).all(|y| leq[t.op(y, x)][x]))
        .collect();

    Ok(OrderStructure {
        leq,
        hasse_edges,
        minimal_elements,
        invariant_elements,
        prime_elements,
    })
}

/// `↓x = {y | y ≤ x}`.
pub fn downset(t: &AlgebraTable, x: usize) -> Result<ElemSet> {
    t.check_index(x)?;
    Ok((0..t.size()).filter(|&y| t.leq(y, x)).collect())
}

/// `↑x = {y | y ≥ x}`.
pub fn upset(t: &AlgebraTable, x: usize) -> Result<ElemSet> {
    t.check_index(x)?;
    Ok((0..t.size()).filter(|&y| t.leq(x, y)).collect())
}

/// Whether the subset is totally ordered by the natural order.
pub fn is_chain(t: &AlgebraTable, s: &ElemSet) -> bool {
    s.iter()
        .all(|x| s.iter().all(|y| t.leq(x, y) || t.leq(y, x)))
}

/// Least element of `s` if it has one.
pub fn least_of(t: &AlgebraTable, s: &ElemSet) -> Option<usize> {
    s.iter().find(|&m| s.iter().all(|y| t.leq(m, y)))
}

/// Minimal elements of a subset under the natural order.
pub fn minimal_of(t: &AlgebraTable, s: &ElemSet) -> ElemSet {
    s.iter()
        .filter(|&x| !s.iter().any(|y| y != x && t.leq(y, x)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::seven_element_ckl;
    use crate::families::{make_a, make_lh};

    #[test]
    fn a3_is_a_chain() {
        let o = order_structure(&make_a(3).unwrap()).unwrap();
        assert_eq!(o.hasse_edges, vec![(0, 1), (1, 2)]);
        assert_eq!(o.minimal_elements.to_vec(), vec![2]);
    }

    #[test]
    fn seven_element_hasse_diagram() {
        let t = seven_element_ckl();
        let o = order_structure(&t).unwrap();
        let mut expected = vec![(0, 1), (1, 2), (1, 3), (2, 4), (3, 5), (4, 6), (3, 6)];
        expected.sort();
        assert_eq!(o.hasse_edges, expected);
        assert_eq!(upset(&t, 5).unwrap().to_vec(), vec![0, 1, 3, 5]);
    }

    #[test]
    fn invariant_elements_of_families() {
        for n in 2..10 {
            let o = order_structure(&make_a(n).unwrap()).unwrap();
            assert_eq!(o.invariant_elements.to_vec(), vec![0, 1], "A_{n}");
            let o = order_structure(&make_lh(n).unwrap()).unwrap();
            assert_eq!(o.invariant_elements, ElemSet::full(n), "LH_{n}");
        }
    }

    #[test]
    fn up_and_down_sets_of_unit() {
        let a = make_a(5).unwrap();
        assert_eq!(upset(&a, 0).unwrap().to_vec(), vec![0]);
        let lh = make_lh(5).unwrap();
        assert_eq!(downset(&lh, 0).unwrap(), ElemSet::full(5));
        assert!(upset(&lh, 9).is_err());
    }

    #[test]
    fn non_l_tables_are_rejected() {
        let t = AlgebraTable::new(vec![vec![0, 1, 2], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert!(order_structure(&t).is_err());
    }
}
