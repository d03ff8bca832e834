//! Property tests against independent brute-force evaluators.

use std::sync::{Arc, OnceLock};

use lalg::families::SweepConfig;
use lalg::ideals::{all_ideals, generated_ideal};
use lalg::products::{enumerate_operations, semidirect, OperationClass};
use lalg::suite::l_algebras_up_to;
use lalg::words::{approx_equiv, witness_holds, word_dot, Equivalence, Word};
use lalg::{canonical_form, endomorphisms, validate, AlgebraTable, ElemSet};
use proptest::prelude::*;

fn corpus() -> &'static [AlgebraTable] {
    static ALL: OnceLock<Vec<AlgebraTable>> = OnceLock::new();
    ALL.get_or_init(|| l_algebras_up_to(4, &SweepConfig::default()).unwrap())
}

/// An L-algebra of size at most 4 under a random relabelling fixing the unit.
fn algebra() -> impl Strategy<Value = AlgebraTable> {
    (0..corpus().len()).prop_flat_map(|i| {
        let t = &corpus()[i];
        let rest: Vec<usize> = (1..t.size()).collect();
        Just(rest).prop_shuffle().prop_map(move |rest| {
            let mut perm = vec![0];
            perm.extend(rest);
            corpus()[i].permuted(&perm)
        })
    })
}

fn word(n: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..n, 0..=max_len)
}

/// Direct recursion on the defining rules, without memoisation.
fn naive_dot(t: &AlgebraTable, a: &[usize], b: &[usize]) -> Vec<usize> {
    let a: Vec<usize> = a.iter().copied().filter(|&x| x != 0).collect();
    let b: Vec<usize> = b.iter().copied().filter(|&x| x != 0).collect();
    match (a.len(), b.len()) {
        (0, _) => b,
        (_, 0) => Vec::new(),
        (1, 1) => match t.op(a[0], b[0]) {
            0 => Vec::new(),
            z => vec![z],
        },
        (1, _) => {
            let mut out = naive_dot(t, &naive_dot(t, &b[1..], &a), &b[..1]);
            out.extend(naive_dot(t, &a, &b[1..]));
            out
        }
        _ => naive_dot(t, &a[..1], &naive_dot(t, &a[1..], &b)),
    }
}

fn brute_ideals(t: &AlgebraTable) -> Vec<ElemSet> {
    let n = t.size();
    let mut out: Vec<ElemSet> = (0u32..1 << n)
        .map(|m| (0..n).filter(|&x| m >> x & 1 == 1).collect::<ElemSet>())
        .filter(|s| {
            s.contains(0)
                && s.iter().all(|x| {
                    (0..n).all(|y| {
                        (!s.contains(t.op(x, y)) || s.contains(y))
                            && s.contains(t.op(y, x))
                            && s.contains(t.op(t.op(x, y), y))
                            && s.contains(t.op(y, t.op(x, y)))
                    })
                })
        })
        .collect();
    out.sort();
    out
}

const BUDGET: usize = 40;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_and_json_round_trip(t in algebra()) {
        prop_assert_eq!(&AlgebraTable::from_text(&t.to_text()).unwrap(), &t);
        prop_assert_eq!(&AlgebraTable::parse_any(&t.to_json().to_string()).unwrap(), &t);
        let stream = AlgebraTable::write_stream(&[t.clone(), t.clone()]);
        prop_assert_eq!(AlgebraTable::parse_stream(&stream).unwrap(), vec![t.clone(), t]);
    }

    #[test]
    fn arbitrary_square_tables_round_trip(n in 1usize..6, cells in proptest::collection::vec(0usize..6, 36)) {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| cells[i * 6 + j] % n).collect()).collect();
        let t = AlgebraTable::new(rows.clone()).unwrap();
        prop_assert_eq!(t.rows(), rows);
        prop_assert_eq!(AlgebraTable::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn classification_is_invariant_under_relabelling(t in algebra()) {
        let r = validate(&t);
        let base = corpus().iter().find(|c| canonical_form(c) == canonical_form(&t)).expect("in corpus");
        let s = validate(base);
        prop_assert_eq!(r.flags(), s.flags());
        for w in r.witnesses.values() {
            prop_assert!(w.violates(&t));
        }
    }

    #[test]
    fn word_engine_matches_naive_recursion(t in algebra(), seed in proptest::collection::vec(0usize..100, 9)) {
        let n = t.size();
        let a: Vec<usize> = seed[..3].iter().map(|x| x % n).collect();
        let b: Vec<usize> = seed[3..6].iter().map(|x| x % n).collect();
        let base = Arc::new(t.clone());
        let got = word_dot(&Word::new(&base, a.clone()).unwrap(), &Word::new(&base, b.clone()).unwrap(), BUDGET);
        if let Ok(w) = got {
            prop_assert_eq!(w.letters().to_vec(), naive_dot(&t, &a, &b));
        }
    }

    #[test]
    fn word_identities(t in algebra(), a in word(4, 3), b in word(4, 3), c in word(4, 3)) {
        let n = t.size();
        let fix = |w: &[usize]| -> Vec<usize> { w.iter().map(|x| x % n).collect() };
        let (a, b, c) = (fix(&a), fix(&b), fix(&c));
        let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let base = Arc::new(t.clone());
        let w = |v: &[usize]| Word::new(&base, v.to_vec()).unwrap();
        let dot = |x: &[usize], y: &[usize]| word_dot(&w(x), &w(y), BUDGET).map(|r| r.letters().to_vec());
        if let (Ok(l), Ok(bc)) = (dot(&cat(&a, &b), &c), dot(&b, &c)) {
            if let Ok(r) = dot(&a, &bc) {
                prop_assert_eq!(l, r);
            }
        }
        if let (Ok(l), Ok(ca), Ok(ac)) = (dot(&a, &cat(&b, &c)), dot(&c, &a), dot(&a, &c)) {
            if let Ok(cab) = dot(&ca, &b) {
                prop_assert_eq!(l, cat(&cab, &ac));
            }
        }
        // the unit letter acts as the empty word
        if let Ok(l) = dot(&[0], &a) {
            prop_assert_eq!(l, dot(&[], &a).unwrap());
        }
    }

    #[test]
    fn approx_equiv_is_reflexive_and_symmetric(t in algebra(), a in word(4, 2), b in word(4, 2)) {
        let n = t.size();
        let base = Arc::new(t.clone());
        let a: Vec<usize> = a.iter().map(|x| x % n).collect();
        let b: Vec<usize> = b.iter().map(|x| x % n).collect();
        let (wa, wb) = (Word::new(&base, a.clone()).unwrap(), Word::new(&base, b.clone()).unwrap());
        prop_assert!(approx_equiv(&wa, &wa, 2, BUDGET).unwrap().is_equivalent());
        let ab = approx_equiv(&wa, &wb, 2, BUDGET).unwrap();
        let ba = approx_equiv(&wb, &wa, 2, BUDGET).unwrap();
        prop_assert_eq!(ab.is_distinguished(), ba.is_distinguished());
        if let Equivalence::Distinguished { c, d, left, right } = &ab {
            prop_assert!(witness_holds(&t, &a, &b, &ab, BUDGET));
            prop_assert_eq!(&naive_dot(&t, &naive_dot(&t, c, &a), d), left);
            prop_assert_eq!(&naive_dot(&t, &naive_dot(&t, c, &b), d), right);
            prop_assert_ne!(left, right);
        }
    }

    #[test]
    fn endomorphisms_match_filter(t in algebra()) {
        let n = t.size();
        let mut expected = Vec::new();
        for code in 0..n.pow(n as u32) {
            let f: Vec<usize> = (0..n).rev().map(|k| code / n.pow(k as u32) % n).collect();
            if (0..n).all(|x| (0..n).all(|y| f[t.op(x, y)] == t.op(f[x], f[y]))) {
                expected.push(f);
            }
        }
        let got: Vec<Vec<usize>> = endomorphisms(&t).unwrap().into_iter().map(|m| m.map).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn ideals_match_subset_search(t in algebra()) {
        let lattice = all_ideals(&t).unwrap();
        let mut got = lattice.ideals.clone();
        got.sort();
        let expected = brute_ideals(&t);
        prop_assert_eq!(&got, &expected);
        prop_assert!(lattice.distributivity_violation().is_none());
    }

    #[test]
    fn generated_ideal_is_least(t in algebra(), mask in 0u32..16) {
        let seed: ElemSet = (0..t.size()).filter(|&x| mask >> x & 1 == 1).collect();
        let g = generated_ideal(&t, &seed).unwrap();
        let least = brute_ideals(&t)
            .into_iter()
            .filter(|i| seed.is_subset(i))
            .fold(t.all(), |acc, i| acc.intersection(&i));
        prop_assert_eq!(g, least);
    }

    #[test]
    fn semidirect_products_are_l_algebras(i in 0usize..14, j in 0usize..14, pick in any::<prop::sample::Index>()) {
        let small: Vec<&AlgebraTable> = corpus().iter().filter(|t| t.size() <= 3).collect();
        let (x, y) = (small[i % small.len()], small[j % small.len()]);
        let ops = enumerate_operations(x, y, OperationClass::L, 4).unwrap();
        prop_assert!(!ops.is_empty());
        let a = &ops[pick.index(ops.len())];
        let p = semidirect(a).unwrap();
        prop_assert_eq!(p.algebra.size(), x.size() * y.size());
        prop_assert!(validate(&p.algebra).is_l);
        let count = brute_ideals(&p.algebra).len();
        prop_assert!(count <= brute_ideals(x).len() * brute_ideals(y).len());
    }
}
