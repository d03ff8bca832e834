//! Words over an L-algebra: the free monoid `M(X)` with the extended
//! operation
//!
//! ```text
//! ab·c = a·(b·c)      a·bc = ((c·a)·b)(a·c)      1·a = a
//! ```
//!
//! and a bounded semi-decision of the context congruence `a ≈ b` iff
//! `(c·a)·d = (c·b)·d` for all words `c`, `d`.
//!
//! Evaluation splits the left word at its first letter and the right word
//! after its first letter. A product of two single letters is looked up in
//! the table; when it is the unit of `X` the result is the empty word. The
//! unit of `X` is the unit of `M(X)`, so unit letters are dropped from both
//! factors before evaluating. A [`Word`] still stores them as given.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{find_violation, require_l, Axiom, Witness};
use crate::error::{LalgError, Result};
use crate::order::downset;
use crate::products::{semidirect, ActionMap};
use crate::table::AlgebraTable;

pub const DEFAULT_WORD_BUDGET: usize = 12;
pub const DEFAULT_CONTEXT_DEPTH: usize = 3;

/// An element of `M(X)`. The empty word is the monoid unit.
#[derive(Clone)]
pub struct Word {
    base: Arc<AlgebraTable>,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(base: &Arc<AlgebraTable>, letters: Vec<usize>) -> Result<Self> {
        for &x in &letters {
            base.check_index(x)?;
        }
        Ok(Word {
            base: Arc::clone(base),
            letters,
        })
    }

    pub fn empty(base: &Arc<AlgebraTable>) -> Self {
        Word {
            base: Arc::clone(base),
            letters: Vec::new(),
        }
    }

    pub fn letter(base: &Arc<AlgebraTable>, x: usize) -> Result<Self> {
        Self::new(base, vec![x])
    }

    /// Space-separated indices; blank text is the empty word.
    pub fn parse(base: &Arc<AlgebraTable>, text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|e| LalgError::Parse(format!("letter `{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn base(&self) -> &Arc<AlgebraTable> {
        &self.base
    }

    /// Juxtaposition.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        same_base(self, other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            base: Arc::clone(&self.base),
            letters,
        })
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base)
    }
}

impl Eq for Word {}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{self}]")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", word_text(&self.letters))
    }
}

pub(crate) fn word_text(letters: &[usize]) -> String {
    letters.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn same_base(a: &Word, b: &Word) -> Result<()> {
    if Arc::ptr_eq(&a.base, &b.base) || a.base == b.base {
        Ok(())
    } else {
        Err(LalgError::BaseMismatch)
    }
}

/// Memoising evaluator for the extended operation on letter sequences.
pub struct WordEngine<'a> {
    table: &'a AlgebraTable,
    budget: usize,
    memo: HashMap<(Vec<usize>, Vec<usize>), Vec<usize>>,
}

impl<'a> WordEngine<'a> {
    pub fn new(table: &'a AlgebraTable, budget: usize) -> Self {
        WordEngine {
            table,
            budget,
            memo: HashMap::new(),
        }
    }

    pub fn table(&self) -> &AlgebraTable {
        self.table
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn guard(&self, w: &[usize]) -> Result<()> {
        if w.len() > self.budget {
            Err(LalgError::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    pub fn dot(&mut self, a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
        self.guard(a)?;
        self.guard(b)?;
        if a.contains(&0) || b.contains(&0) {
            let strip = |w: &[usize]| -> Vec<usize> { w.iter().copied().filter(|&l| l != 0).collect() };
            return self.dot(&strip(a), &strip(b));
        }
        if a.is_empty() {
            return Ok(b.to_vec());
        }
        if b.is_empty() {
            return Ok(Vec::new());
        }
        if let Some(r) = self.memo.get(&(a.to_vec(), b.to_vec())) {
            return Ok(r.clone());
        }
        let out = if a.len() > 1 {
            let inner = self.dot(&a[1..], b)?;
            self.dot(&a[..1], &inner)?
        } else if b.len() == 1 {
            match self.table.op(a[0], b[0]) {
                0 => Vec::new(),
                z => vec![z],
            }
        } else {
            let (head, rest) = (&b[..1], &b[1..]);
            let ca = self.dot(rest, a)?;
            let mut left = self.dot(&ca, head)?;
            let right = self.dot(a, rest)?;
            left.extend(right);
            left
        };
        self.guard(&out)?;
        self.memo.insert((a.to_vec(), b.to_vec()), out.clone());
        Ok(out)
    }
}

/// `a·b` in `M(X)`, failing with `BudgetExceeded` when a word longer than
/// `budget` would be formed.
pub fn word_dot(a: &Word, b: &Word, budget: usize) -> Result<Word> {
    same_base(a, b)?;
    let letters = WordEngine::new(&a.base, budget).dot(&a.letters, &b.letters)?;
    Ok(Word {
        base: Arc::clone(&a.base),
        letters,
    })
}

/// All words over `letters` of length at most `max_len`, by length and then
/// lexicographically.
pub fn words_up_to(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..letters).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Outcome of a bounded test of `a ≈ b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Equivalence {
    /// No context of length at most `depth` separates the words. This is a
    /// bounded certificate only.
    Equivalent { depth: usize },
    /// `(c·a)·d ≠ (c·b)·d`, with both values.
    Distinguished {
        c: Vec<usize>,
        d: Vec<usize>,
        left: Vec<usize>,
        right: Vec<usize>,
    },
    /// No separating context was found, but some contexts could not be
    /// evaluated within the word budget.
    BudgetExceeded { depth: usize, skipped: usize },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }

    pub fn is_distinguished(&self) -> bool {
        matches!(self, Equivalence::Distinguished { .. })
    }
}

enum ContextResult {
    Same,
    Differ(Vec<usize>, Vec<usize>),
    Skipped,
}

/// Index of the separating `d` with both values.
type ContextHit = (usize, Vec<usize>, Vec<usize>);

fn test_context(t: &AlgebraTable, budget: usize, a: &[usize], b: &[usize], c: &[usize], ds: &[Vec<usize>]) -> (Option<ContextHit>, usize) {
    let mut e = WordEngine::new(t, budget);
    let mut skipped = 0;
    let ca = e.dot(c, a);
    let cb = e.dot(c, b);
    let (ca, cb) = match (ca, cb) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return (None, ds.len()),
    };
    for (k, d) in ds.iter().enumerate() {
        let r = match (e.dot(&ca, d), e.dot(&cb, d)) {
            (Ok(l), Ok(r)) if l == r => ContextResult::Same,
            (Ok(l), Ok(r)) => ContextResult::Differ(l, r),
            _ => ContextResult::Skipped,
        };
        match r {
            ContextResult::Same => {}
            ContextResult::Differ(l, r) => return (Some((k, l, r)), skipped),
            ContextResult::Skipped => skipped += 1,
        }
    }
    (None, skipped)
}

/// Bounded test of `a ≈ b`: all contexts `c`, `d` of length at most `depth`.
/// The first separating pair in (length, lexicographic) order is reported.
pub fn approx_equiv(a: &Word, b: &Word, depth: usize, budget: usize) -> Result<Equivalence> {
    same_base(a, b)?;
    Ok(approx_equiv_letters(&a.base, &a.letters, &b.letters, depth, budget))
}

pub(crate) fn approx_equiv_letters(t: &AlgebraTable, a: &[usize], b: &[usize], depth: usize, budget: usize) -> Equivalence {
    if a == b {
        return Equivalence::Equivalent { depth };
    }
    let contexts = words_up_to(t.size(), depth);
    let results: Vec<(Option<ContextHit>, usize)> = contexts
        .par_iter()
        .map(|c| test_context(t, budget, a, b, c, &contexts))
        .collect();
    let mut skipped = 0;
    for (ci, (hit, s)) in results.into_iter().enumerate() {
        if let Some((di, left, right)) = hit {
            return Equivalence::Distinguished {
                c: contexts[ci].clone(),
                d: contexts[di].clone(),
                left,
                right,
            };
        }
        skipped += s;
    }
    if skipped > 0 {
        Equivalence::BudgetExceeded { depth, skipped }
    } else {
        Equivalence::Equivalent { depth }
    }
}

/// Re-evaluates a separating context and confirms the two sides differ.
pub fn witness_holds(t: &AlgebraTable, a: &[usize], b: &[usize], outcome: &Equivalence, budget: usize) -> bool {
    match outcome {
        Equivalence::Distinguished { c, d, left, right } => {
            let mut e = WordEngine::new(t, budget);
            let eval = |e: &mut WordEngine, w: &[usize]| e.dot(c, w).and_then(|cw| e.dot(&cw, d));
            matches!((eval(&mut e, a), eval(&mut e, b)), (Ok(l), Ok(r)) if l == *left && r == *right && l != r)
        }
        _ => true,
    }
}

/// Whether every `σ_x` maps `↓x` bijectively onto `X`.
pub fn is_self_similar(t: &AlgebraTable) -> Result<bool> {
    require_l(t)?;
    let n = t.size();
    for x in 0..n {
        let down = downset(t, x)?;
        if down.len() != n {
            return Ok(false);
        }
        let mut hit = vec![false; n];
        for y in down.iter() {
            let z = t.op(x, y);
            if hit[z] {
                return Ok(false);
            }
            hit[z] = true;
        }
    }
    Ok(true)
}

/// `ρ'_w(x)` for a word `w = u₁…u_m` over the acting algebra:
/// `ρ_{u₁} ∘ … ∘ ρ_{u_m}`, applied from the right.
pub fn extend_action_to_words(action: &ActionMap, u_word: &[usize], x: usize, budget: usize) -> Result<usize> {
    if u_word.len() > budget {
        return Err(LalgError::BudgetExceeded { budget });
    }
    action.base.check_index(x)?;
    for &u in u_word {
        action.actor.check_index(u)?;
    }
    Ok(u_word.iter().rev().fold(x, |acc, &u| action.rho[u][acc]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub max_len: usize,
    pub pairs_checked: usize,
    pub budget_exceeded: usize,
    /// `(a, b, x)` with `ρ'_{a·b}(ρ'_a(x)) ≠ ρ'_{b·a}(ρ'_b(x))`.
    pub failures: Vec<(Vec<usize>, Vec<usize>, usize)>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `ρ'_{a·b} ∘ ρ'_a = ρ'_{b·a} ∘ ρ'_b` for all words `a`, `b` over the
/// acting algebra of length at most `max_len`.
pub fn check_word_compatibility(action: &ActionMap, max_len: usize, budget: usize) -> CompatibilityReport {
    let y = &action.actor;
    let words = words_up_to(y.size(), max_len);
    let mut e = WordEngine::new(y, budget);
    let mut report = CompatibilityReport {
        max_len,
        pairs_checked: 0,
        budget_exceeded: 0,
        failures: Vec::new(),
    };
    let apply = |w: &[usize], x: usize| w.iter().rev().fold(x, |acc, &u| action.rho[u][acc]);
    for a in &words {
        for b in &words {
            let (ab, ba) = match (e.dot(a, b), e.dot(b, a)) {
                (Ok(ab), Ok(ba)) => (ab, ba),
                _ => {
                    report.budget_exceeded += 1;
                    continue;
                }
            };
            report.pairs_checked += 1;
            for x in 0..action.base.size() {
                if apply(&ab, apply(a, x)) != apply(&ba, apply(b, x)) {
                    report.failures.push((a.clone(), b.clone(), x));
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectWordReport {
    pub depth: usize,
    /// `(x,u) ≈ (x,1)(1,u)` in `M(X ⋊ Y)` for every pair.
    pub factorizations_checked: usize,
    pub pairs_checked: usize,
    pub budget_exceeded: usize,
    pub failures: Vec<String>,
}

impl SemidirectWordReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Bounded check that words over `X ⋊ Y` multiply like pairs of words under
/// `(a,s)·(b,t) = (ρ̃_{s·t}(a)·ρ̃_{t·s}(b), s·t)`, where a word over the
/// product is sent to a pair by `(z,t)(x,u) = (z ρ̃_t(x), tu)`. Values are
/// compared up to `≈` with contexts of length at most `depth`; product words
/// of length at most `depth` are tested.
pub fn semidirect_word_product_check(action: &ActionMap, depth: usize, budget: usize) -> Result<SemidirectWordReport> {
    let p = semidirect(action)?;
    let (x_t, y_t, pt) = (&action.base, &action.actor, &p.algebra);
    let mut report = SemidirectWordReport {
        depth,
        factorizations_checked: 0,
        pairs_checked: 0,
        budget_exceeded: 0,
        failures: Vec::new(),
    };
    let idx = |x: usize, u: usize| p.index(x, u).expect("full carrier");
    for &(x, u) in &p.carrier {
        let (xu, x1, u1) = (idx(x, u), idx(x, 0), idx(0, u));
        if pt.op(u1, xu) != x1 {
            report.failures.push(format!("(1,{u})·({x},{u}) ≠ ({x},1)"));
        }
        report.factorizations_checked += 1;
        match approx_equiv_letters(pt, &[xu], &[x1, u1], depth, budget) {
            Equivalence::Equivalent { .. } => {}
            Equivalence::BudgetExceeded { .. } => report.budget_exceeded += 1,
            other => report.failures.push(format!("({x},{u}) vs ({x},1)(1,{u}): {other:?}")),
        }
    }

    let rho_word = |s: &[usize], a: &[usize]| -> Vec<usize> {
        a.iter()
            .map(|&x| s.iter().rev().fold(x, |acc, &u| action.rho[u][acc]))
            .collect()
    };
    let phi = |w: &[usize]| -> (Vec<usize>, Vec<usize>) {
        let (mut a, mut s) = (Vec::new(), Vec::new());
        for &k in w {
            let (x, u) = p.carrier[k];
            a.push(rho_word(&s, &[x])[0]);
            s.push(u);
        }
        (a, s)
    };
    let mut pe = WordEngine::new(pt, budget);
    let mut xe = WordEngine::new(x_t, budget);
    let mut ye = WordEngine::new(y_t, budget);
    let words = words_up_to(pt.size(), depth);
    for a in &words {
        for b in &words {
            let lhs = match pe.dot(a, b) {
                Ok(w) => phi(&w),
                Err(_) => {
                    report.budget_exceeded += 1;
                    continue;
                }
            };
            let ((ax, ay), (bx, by)) = (phi(a), phi(b));
            let rhs = (|| -> Result<(Vec<usize>, Vec<usize>)> {
                let st = ye.dot(&ay, &by)?;
                let ts = ye.dot(&by, &ay)?;
                Ok((xe.dot(&rho_word(&st, &ax), &rho_word(&ts, &bx))?, st))
            })();
            let rhs = match rhs {
                Ok(r) => r,
                Err(_) => {
                    report.budget_exceeded += 1;
                    continue;
                }
            };
            report.pairs_checked += 1;
            for (t, l, r, side) in [(x_t, &lhs.0, &rhs.0, "X"), (y_t, &lhs.1, &rhs.1, "Y")] {
                match approx_equiv_letters(t, l, r, depth, budget) {
                    Equivalence::Equivalent { .. } => {}
                    Equivalence::BudgetExceeded { .. } => report.budget_exceeded += 1,
                    other => report.failures.push(format!(
                        "[{}]·[{}]: {side}-components {:?} vs {:?}: {other:?}",
                        word_text(a),
                        word_text(b),
                        l,
                        r
                    )),
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// The table violates `x·(y·x) = 1` at `(y, x)`, so this is false.
    pub base_is_ckl: bool,
    pub kl_violation: Option<Witness>,
    /// `x·(y·xx)`.
    pub left: Vec<usize>,
    /// `y·(x·xx)`.
    pub right: Vec<usize>,
}

impl CounterexampleReport {
    /// Left side is the empty word, right side is `x`.
    pub fn passed(&self) -> bool {
        self.left.is_empty() && self.right == [1]
    }
}

/// Evaluates both sides of the exchange law for `x`, `y`, `xx` over
/// `{1, x, y}` with `x·y = y·x = x`.
pub fn reproduce_sx_counterexample() -> CounterexampleReport {
    let t = crate::examples::three_element_example();
    let kl_violation = find_violation(&t, Axiom::Kl);
    let base_is_ckl = kl_violation.is_none() && find_violation(&t, Axiom::Exchange).is_none();
    let mut e = WordEngine::new(&t, DEFAULT_WORD_BUDGET);
    let (x, y) = (1, 2);
    let mut side = |p: usize, q: usize| -> Vec<usize> {
        let inner = e.dot(&[q], &[x, x]).expect("short words");
        e.dot(&[p], &inner).expect("short words")
    };
    let left = side(x, y);
    let right = side(y, x);
    CounterexampleReport {
        base_is_ckl,
        kl_violation,
        left,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{semidirect_example_action, three_element_example};
    use crate::families::make_a;

    fn base() -> Arc<AlgebraTable> {
        Arc::new(three_element_example())
    }

    #[test]
    fn unit_and_single_letters() {
        let b = base();
        let x = Word::letter(&b, 1).unwrap();
        let e = Word::empty(&b);
        assert_eq!(word_dot(&e, &x, 12).unwrap(), x);
        assert!(word_dot(&x, &x, 12).unwrap().is_empty());
        assert!(word_dot(&x, &e, 12).unwrap().is_empty());
        let t = three_element_example();
        for i in 0..3 {
            for j in 0..3 {
                let w = word_dot(&Word::letter(&b, i).unwrap(), &Word::letter(&b, j).unwrap(), 12).unwrap();
                let expect: Vec<usize> = [t.op(i, j)].into_iter().filter(|&z| z != 0).collect();
                assert_eq!(w.letters(), expect);
            }
        }
    }

    #[test]
    fn sx_counterexample() {
        let r = reproduce_sx_counterexample();
        assert!(r.passed(), "{r:?}");
        assert!(!r.base_is_ckl);
        assert_eq!(r.kl_violation.unwrap().elements, vec![2, 1]);
    }

    #[test]
    fn base_mismatch() {
        let a = Word::letter(&base(), 1).unwrap();
        let b = Word::letter(&Arc::new(make_a(3).unwrap()), 1).unwrap();
        assert_eq!(word_dot(&a, &b, 12), Err(LalgError::BaseMismatch));
        assert!(approx_equiv(&a, &b, 1, 12).is_err());
    }

    #[test]
    fn budget_is_reported() {
        let b = base();
        let long = Word::new(&b, vec![1; 5]).unwrap();
        assert_eq!(
            word_dot(&long, &long, 3),
            Err(LalgError::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn unit_letter_matches_empty_word() {
        let b = base();
        let one = Word::letter(&b, 0).unwrap();
        let e = Word::empty(&b);
        for depth in 0..=3 {
            assert!(approx_equiv(&one, &e, depth, 12).unwrap().is_equivalent());
        }
    }

    #[test]
    fn distinct_letters_are_distinguished() {
        let b = base();
        let x = Word::letter(&b, 1).unwrap();
        let y = Word::letter(&b, 2).unwrap();
        let r = approx_equiv(&x, &y, 1, 12).unwrap();
        assert!(r.is_distinguished());
        assert!(witness_holds(&b, &[1], &[2], &r, 12));
    }

    #[test]
    fn self_similarity() {
        assert!(is_self_similar(&AlgebraTable::trivial()).unwrap());
        for n in 2..6 {
            assert!(!is_self_similar(&make_a(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn action_on_words() {
        let a = semidirect_example_action();
        for x in 0..3 {
            assert_eq!(extend_action_to_words(&a, &[], x, 12).unwrap(), x);
            for u in 0..2 {
                assert_eq!(extend_action_to_words(&a, &[u], x, 12).unwrap(), a.rho[u][x]);
            }
        }
        let r = check_word_compatibility(&a, 3, 12);
        assert!(r.passed() && r.budget_exceeded == 0, "{r:?}");
    }

    #[test]
    fn semidirect_words_on_example() {
        let r = semidirect_word_product_check(&semidirect_example_action(), 2, 12).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn semidirect_words_trivial_action() {
        let a = ActionMap::trivial(make_a(2).unwrap(), make_a(2).unwrap()).unwrap();
        let r = semidirect_word_product_check(&a, 2, 12).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}
