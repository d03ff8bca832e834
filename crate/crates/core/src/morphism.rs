//! Unital `·`-preserving maps between tables.

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::classify::require_l;
use crate::error::{LalgError, Result};
use crate::table::AlgebraTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub source: AlgebraTable,
    pub target: AlgebraTable,
    pub map: Vec<usize>,
}

impl Morphism {
    pub fn new(source: AlgebraTable, target: AlgebraTable, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(LalgError::MalformedTable(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.size()
            )));
        }
        for &v in &map {
            target.check_index(v)?;
        }
        if let Some((x, y)) = morphism_violation(&source, &target, &map) {
            return Err(LalgError::falsified(
                "morphism",
                format!("f({x}·{y}) ≠ f({x})·f({y})"),
            ));
        }
        if map[0] != 0 {
            return Err(LalgError::falsified("morphism", "f(1) ≠ 1"));
        }
        Ok(Morphism { source, target, map })
    }

    /// `ker f = {x | f(x) = 1}`.
    pub fn kernel(&self) -> ElemSet {
        (0..self.map.len()).filter(|&x| self.map[x] == 0).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let image: ElemSet = self.map.iter().copied().collect();
        image.len() == self.map.len()
    }
}

/// First pair `(x, y)` with `f(x·y) ≠ f(x)·f(y)`.
pub fn morphism_violation(
    source: &AlgebraTable,
    target: &AlgebraTable,
    map: &[usize],
) -> Option<(usize, usize)> {
    let n = source.size();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| map[source.op(x, y)] != target.op(map[x], map[y]))
}

pub fn is_morphism(source: &AlgebraTable, target: &AlgebraTable, map: &[usize]) -> bool {
    map.len() == source.size()
        && map.iter().all(|&v| v < target.size())
        && map[0] == 0
        && morphism_violation(source, target, map).is_none()
}

/// All unital `·`-preserving maps `source → target`, in lexicographic order
/// of their value arrays.
pub fn homomorphisms(source: &AlgebraTable, target: &AlgebraTable) -> Vec<Vec<usize>> {
    let n = source.size();
    if n == 1 {
        return vec![vec![0]];
    }
    let mut map = vec![0; n];
    let mut out = Vec::new();
    assign(source, target, &mut map, 1, &mut out);
    out
}

// Values are assigned in index order; a pair is checked as soon as both
// factors and their product have values.
fn assign(
    s: &AlgebraTable,
    t: &AlgebraTable,
    map: &mut Vec<usize>,
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if k == map.len() {
        if morphism_violation(s, t, map).is_none() {
            out.push(map.clone());
        }
        return;
    }
    for v in 0..t.size() {
        map[k] = v;
        let ok = (0..=k).all(|a| {
            [(a, k), (k, a)].into_iter().all(|(x, y)| {
                let p = s.op(x, y);
                p > k || map[p] == t.op(map[x], map[y])
            })
        });
        if ok {
            assign(s, t, map, k + 1, out);
        }
    }
}

/// `End(X)`: every unital `·`-preserving self-map, lexicographically ordered.
pub fn endomorphisms(t: &AlgebraTable) -> Result<Vec<Morphism>> {
    require_l(t)?;
    Ok(homomorphisms(t, t)
        .into_iter()
        .map(|map| Morphism {
            source: t.clone(),
            target: t.clone(),
            map,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::three_element_example;
    use crate::families::{make_a, make_lh};

    fn brute_force_endos(t: &AlgebraTable) -> Vec<Vec<usize>> {
        let n = t.size();
        let total = n.pow(n as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut map = vec![0; n];
            let mut c = code;
            for slot in map.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            let ok = map[0] == 0
                && (0..n).all(|x| (0..n).all(|y| map[t.op(x, y)] == t.op(map[x], map[y])));
            if ok {
                out.push(map);
            }
        }
        out
    }

    #[test]
    fn three_element_example_has_two_endomorphisms() {
        let t = three_element_example();
        let maps: Vec<_> = endomorphisms(&t).unwrap().into_iter().map(|m| m.map).collect();
        assert_eq!(maps, vec![vec![0, 0, 0], vec![0, 1, 2]]);
    }

    #[test]
    fn endomorphisms_of_a3_match_brute_force() {
        let a3 = make_a(3).unwrap();
        let maps: Vec<_> = endomorphisms(&a3).unwrap().into_iter().map(|m| m.map).collect();
        assert_eq!(maps, brute_force_endos(&a3));
        assert!(maps.contains(&vec![0, 1, 2]));
    }

    #[test]
    fn kernel_and_surjectivity() {
        let lh = make_lh(3).unwrap();
        let f = Morphism::new(lh.clone(), make_lh(2).unwrap(), vec![0, 0, 1]).unwrap();
        assert_eq!(f.kernel().to_vec(), vec![0, 1]);
        assert!(f.is_surjective());
        assert!(!f.is_injective());
        assert!(Morphism::new(lh.clone(), lh, vec![0, 2, 1]).is_err());
    }
}
