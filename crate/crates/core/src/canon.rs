//! Canonical labelling of tables up to isomorphism.
//!
//! Elements are first coloured by order-theoretic invariants, the colouring is
//! refined against the operation until stable, and remaining ties are broken by
//! individualising each member of the first non-singleton colour class in turn.
//! Every discrete colouring reached this way induces a relabelling; the
//! canonical form is the lexicographically least relabelled table. The search
//! tree depends only on the isomorphism class, so isomorphic tables share a
//! canonical form. The unit is the only element below nothing, so it always
//! keeps index 0.

use crate::classify::require_l;
use crate::error::Result;
use crate::table::AlgebraTable;

/// Canonical representative of the isomorphism class of `t`.
pub fn canonical_form(t: &AlgebraTable) -> Result<AlgebraTable> {
    require_l(t)?;
    Ok(canonical_labelling(t).0)
}

/// Canonical table together with the relabelling (old index → new index)
/// that produces it.
pub fn canonical_labelling(t: &AlgebraTable) -> (AlgebraTable, Vec<usize>) {
    let colours = refine(t, initial_colours(t));
    let mut best: Option<(AlgebraTable, Vec<usize>)> = None;
    search(t, colours, &mut best);
    best.expect("search reaches at least one leaf")
}

pub fn isomorphic(a: &AlgebraTable, b: &AlgebraTable) -> Result<bool> {
    if a.size() != b.size() {
        require_l(a)?;
        require_l(b)?;
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

fn initial_colours(t: &AlgebraTable) -> Vec<usize> {
    let n = t.size();
    let lt = |x: usize, y: usize| x != y && t.leq(x, y);
    let covers = |lo: usize, hi: usize| lt(lo, hi) && !(0..n).any(|m| lt(lo, m) && lt(m, hi));
    let sigs: Vec<_> = (0..n)
        .map(|x| {
            let up = (0..n).filter(|&y| t.leq(x, y)).count();
            let down = (0..n).filter(|&y| t.leq(y, x)).count();
            let up_deg = (0..n).filter(|&y| covers(x, y)).count();
            let down_deg = (0..n).filter(|&y| covers(y, x)).count();
            let invariant = (0..n).filter(|&y| lt(x, y)).all(|y| t.op(y, x) == x);
            (x != 0, std::cmp::Reverse(up), down, up_deg, down_deg, !invariant)
        })
        .collect();
    ranks(&sigs)
}

/// Dense ranks of `keys` in sorted order.
fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present"))
        .collect()
}

fn class_count(colours: &[usize]) -> usize {
    colours.iter().max().map_or(0, |m| m + 1)
}

/// Own colour and the sorted colours seen along each row and column.
type Signature = (usize, Vec<(usize, usize, usize)>);

fn refine(t: &AlgebraTable, mut colours: Vec<usize>) -> Vec<usize> {
    let n = t.size();
    loop {
        let before = class_count(&colours);
        let sigs: Vec<Signature> = (0..n)
            .map(|x| {
                let mut around: Vec<_> = (0..n)
                    .map(|y| (colours[y], colours[t.op(x, y)], colours[t.op(y, x)]))
                    .collect();
                around.sort_unstable();
                (colours[x], around)
            })
            .collect();
        colours = ranks(&sigs);
        if class_count(&colours) == before {
            return colours;
        }
    }
}

fn search(t: &AlgebraTable, colours: Vec<usize>, best: &mut Option<(AlgebraTable, Vec<usize>)>) {
    let n = t.size();
    if class_count(&colours) == n {
        let candidate = t.permuted(&colours);
        let better = match best {
            None => true,
            Some((b, _)) => candidate.cells() < b.cells(),
        };
        if better {
            *best = Some((candidate, colours));
        }
        return;
    }
    let mut sizes = vec![0usize; n];
    for &c in &colours {
        sizes[c] += 1;
    }
    let target = (0..n).find(|&c| sizes[c] > 1).expect("non-discrete colouring");
    for v in (0..n).filter(|&x| colours[x] == target) {
        let keys: Vec<(usize, bool)> = (0..n)
            .map(|x| (colours[x], colours[x] == target && x != v))
            .collect();
        search(t, refine(t, ranks(&keys)), best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{four_element_ckl, seven_element_ckl, three_element_example};
    use crate::families::{make_a, make_lh};
    use proptest::prelude::*;

    fn random_relabel(t: &AlgebraTable, seed: &[usize]) -> AlgebraTable {
        // Fisher-Yates on 1..n driven by the seed
        let n = t.size();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (2..n).rev() {
            let j = 1 + seed[i % seed.len()] % i;
            perm.swap(i, j);
        }
        t.permuted(&perm)
    }

    #[test]
    fn relabelled_a4_has_same_form() {
        let a4 = make_a(4).unwrap();
        let c = canonical_form(&a4).unwrap();
        for perm in [[0, 3, 1, 2], [0, 2, 3, 1], [0, 3, 2, 1]] {
            assert_eq!(canonical_form(&a4.permuted(&perm)).unwrap(), c);
        }
    }

    #[test]
    fn a3_and_lh3_differ() {
        assert!(!isomorphic(&make_a(3).unwrap(), &make_lh(3).unwrap()).unwrap());
        assert!(isomorphic(&make_a(2).unwrap(), &make_lh(2).unwrap()).unwrap());
    }

    #[test]
    fn unit_stays_at_zero() {
        for t in [three_element_example(), four_element_ckl(), seven_element_ckl()] {
            let (c, perm) = canonical_labelling(&t);
            assert_eq!(perm[0], 0);
            assert!(crate::classify::is_l_algebra(&c));
        }
    }

    proptest! {
        #[test]
        fn canonical_form_is_orbit_invariant_and_idempotent(seed in proptest::collection::vec(0usize..1000, 1..8),
                                                            which in 0usize..5) {
            let t = match which {
                0 => four_element_ckl(),
                1 => seven_element_ckl(),
                2 => three_element_example(),
                3 => make_a(6).unwrap(),
                _ => make_lh(5).unwrap(),
            };
            let c = canonical_form(&t).unwrap();
            let r = random_relabel(&t, &seed);
            prop_assert_eq!(&canonical_form(&r).unwrap(), &c);
            prop_assert_eq!(&canonical_form(&c).unwrap(), &c);
        }
    }
}
