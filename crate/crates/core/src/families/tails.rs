//! Tails and tail⁺ decompositions.

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::classify::require_l;
use crate::error::Result;
use crate::order::{is_chain, least_of, minimal_of, upset};
use crate::table::AlgebraTable;

/// Sizes up to which subalgebra pairs are searched when there is no tail.
pub const TAIL_PLUS_SEARCH_LIMIT: usize = 16;

/// Subalgebras `Y ⊆ Y₀` with `Y₀ ∖ Y = {z₀}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPlusWitness {
    pub y: ElemSet,
    pub y0: ElemSet,
    pub z0: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailReport {
    /// `(z, ↑z)` for every minimal `z` whose upset is a chain.
    pub tails: Vec<(usize, ElemSet)>,
    /// Tail⁺ with the complement condition read as `X ∖ Y` linear.
    pub is_tail_plus: bool,
    pub witness: Option<TailPlusWitness>,
    /// Tail⁺ with the complement condition read as `X ∖ Y₀` linear.
    pub is_tail_plus_alt: bool,
    pub alt_witness: Option<TailPlusWitness>,
    /// False when the subalgebra search was skipped because of size.
    pub searched: bool,
}

fn tails_of(t: &AlgebraTable, within: &ElemSet) -> Vec<(usize, ElemSet)> {
    minimal_of(t, within)
        .iter()
        .filter_map(|z| {
            let up: ElemSet = within.iter().filter(|&y| t.leq(z, y)).collect();
            is_chain(t, &up).then_some((z, up))
        })
        .collect()
}

pub fn tail_analysis(t: &AlgebraTable) -> Result<TailReport> {
    require_l(t)?;
    let n = t.size();
    let all = t.all();
    let tails = tails_of(t, &all);
    debug_assert!(tails.iter().all(|(z, up)| upset(t, *z).map(|u| u == *up).unwrap_or(false)));
    let mut report = TailReport {
        is_tail_plus: !tails.is_empty(),
        is_tail_plus_alt: !tails.is_empty(),
        tails,
        witness: None,
        alt_witness: None,
        searched: true,
    };
    if report.is_tail_plus {
        return Ok(report);
    }
    if n > TAIL_PLUS_SEARCH_LIMIT {
        report.searched = false;
        return Ok(report);
    }
    let subalgebras: Vec<ElemSet> = (0u32..1 << (n - 1))
        .map(|mask| {
            let mut s: ElemSet = (1..n).filter(|&i| mask >> (i - 1) & 1 == 1).collect();
            s.insert(0);
            s
        })
        .filter(|s| t.is_closed(s))
        .collect();
    for y in &subalgebras {
        if tails_of(t, y).is_empty() {
            continue;
        }
        for z0 in all.difference(y).iter() {
            let mut y0 = *y;
            y0.insert(z0);
            if !t.is_closed(&y0) || least_of(t, &y0) != Some(z0) {
                continue;
            }
            let w = || TailPlusWitness { y: *y, y0, z0 };
            if report.witness.is_none() && is_chain(t, &all.difference(y)) {
                report.witness = Some(w());
            }
            if report.alt_witness.is_none() && is_chain(t, &all.difference(&y0)) {
                report.alt_witness = Some(w());
            }
        }
    }
    report.is_tail_plus = report.witness.is_some();
    report.is_tail_plus_alt = report.alt_witness.is_some();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{four_element_ckl, seven_element_ckl};
    use crate::families::make_a;
    use crate::ideals::ideal_violation;

    fn set(v: &[usize]) -> ElemSet {
        v.iter().copied().collect()
    }

    #[test]
    fn chains_are_tails() {
        let r = tail_analysis(&make_a(5).unwrap()).unwrap();
        assert_eq!(r.tails, vec![(4, make_a(5).unwrap().all())]);
        assert!(r.is_tail_plus);
    }

    #[test]
    fn four_element_tails() {
        let t = four_element_ckl();
        let r = tail_analysis(&t).unwrap();
        assert_eq!(r.tails, vec![(2, set(&[0, 2])), (3, set(&[0, 1, 3]))]);
        for (_, up) in &r.tails {
            assert!(ideal_violation(&t, up).is_none());
        }
    }

    #[test]
    fn seven_element_tail() {
        let t = seven_element_ckl();
        let r = tail_analysis(&t).unwrap();
        assert_eq!(r.tails, vec![(5, set(&[0, 1, 3, 5]))]);
        assert!(ideal_violation(&t, &set(&[0, 1, 3, 5])).is_none());
        let up6 = upset(&t, 6).unwrap();
        assert!(!is_chain(&t, &up6));
        assert!(ideal_violation(&t, &up6).is_some());
    }
}
