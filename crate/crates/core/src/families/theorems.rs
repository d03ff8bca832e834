//! Exhaustive checks of the classification results over enumerated algebras.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate, run_enumeration, ClassFilter, EnumerationTask, DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET};
use super::tails::tail_analysis;
use super::{make_a, make_lh};
use crate::bitset::ElemSet;
use crate::canon::{canonical_form, isomorphic};
use crate::classify::validate;
use crate::error::Result;
use crate::ideals::{all_ideals, generated_ideal, ideal_sets, is_prime_ideal, quotient, spectrum};
use crate::order::{is_chain, minimal_of, order_structure, upset};
use crate::products::{
    enumerate_operations, hilbert_a2_ideal_count, symmetric_semidirect, ActionMap, OperationClass,
    DEFAULT_OPERATION_LIMIT,
};
use crate::table::AlgebraTable;

/// Budgets shared by the enumeration-driven checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub node_budget: u64,
    pub time_budget_secs: u64,
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget_secs: DEFAULT_TIME_BUDGET.as_secs(),
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn task(&self, n: usize, class: ClassFilter) -> EnumerationTask {
        EnumerationTask::new(n, class)
            .with_budget(self.node_budget, Duration::from_secs(self.time_budget_secs))
            .with_workers(self.workers)
    }
}

/// Elements of a linear algebra from the top down: `x_0 = 1 > x_1 > …`.
pub fn chain_order(t: &AlgebraTable) -> Vec<usize> {
    let n = t.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| t.leq(x, y)).count());
    order
}

/// Ideals of a linear algebra predicted from its invariant elements:
/// `↑x_i` for `i = n-1` or `x_{i+1}` invariant.
pub fn linear_ideal_prediction(t: &AlgebraTable) -> Result<Vec<ElemSet>> {
    let chain = chain_order(t);
    let inv = order_structure(t)?.invariant_elements;
    let n = chain.len();
    let mut out = Vec::new();
    for i in 0..n {
        if i == n - 1 || inv.contains(chain[i + 1]) {
            out.push(chain[..=i].iter().copied().collect());
        }
    }
    crate::ideals::sort_ideals(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleLinearSize {
    pub n: usize,
    pub linear: usize,
    pub simple: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleLinearReport {
    pub sizes: Vec<SimpleLinearSize>,
    pub failures: Vec<String>,
}

impl SimpleLinearReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every linear L-algebra of size `2..=max_n`: the ideals are exactly
/// the predicted upsets, every proper ideal is prime, the algebra is KL,
/// removing the bottom leaves a subalgebra keeping every proper ideal, and a
/// simple one is isomorphic to `A_n` (exactly one per size).
pub fn verify_simple_linear_classification(max_n: usize, cfg: &SweepConfig) -> Result<SimpleLinearReport> {
    let mut report = SimpleLinearReport {
        sizes: Vec::new(),
        failures: Vec::new(),
    };
    for n in 2..=max_n {
        let tables = enumerate(&cfg.task(n, ClassFilter::Linear))?;
        let a_n = canonical_form(&make_a(n)?)?;
        let mut simple = 0;
        for t in &tables {
            let tag = format!("n = {n}, table {:?}", t.cells());
            let ideals = ideal_sets(t);
            if ideals != linear_ideal_prediction(t)? {
                report.failures.push(format!("{tag}: ideals differ from the invariant-element prediction"));
            }
            let spec = spectrum(t)?;
            if spec.len() + 1 != ideals.len() {
                report.failures.push(format!("{tag}: some proper ideal is not prime"));
            }
            let r = validate(t);
            if !r.is_kl {
                report.failures.push(format!("{tag}: linear but not KL"));
            }
            let chain = chain_order(t);
            let bottom = chain[n - 1];
            let mut y = t.all();
            y.remove(bottom);
            if !t.is_closed(&y) {
                report.failures.push(format!("{tag}: removing the bottom is not a subalgebra"));
            } else {
                let (sub, embed) = t.subalgebra(&y)?;
                let sub_ideals = ideal_sets(&sub);
                for i in &ideals[..ideals.len() - 1] {
                    let local: ElemSet = (0..embed.len()).filter(|&k| i.contains(embed[k])).collect();
                    if !sub_ideals.contains(&local) {
                        report.failures.push(format!("{tag}: proper ideal {i:?} is not an ideal of X ∖ {{bottom}}"));
                    }
                }
            }
            if r.is_simple {
                simple += 1;
                if *t != a_n {
                    report.failures.push(format!("{tag}: simple but not isomorphic to A_{n}"));
                }
            }
        }
        if simple != 1 {
            report.failures.push(format!("n = {n}: {simple} simple linear algebras"));
        }
        report.sizes.push(SimpleLinearSize {
            n,
            linear: tables.len(),
            simple,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPlusSize {
    pub n: usize,
    pub simple_ckl: usize,
    pub tail_plus: usize,
    pub tail_plus_alt: usize,
    pub linear: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPlusReport {
    pub sizes: Vec<TailPlusSize>,
    pub failures: Vec<String>,
    /// Simple algebras that are tail⁺ only under the `X ∖ Y₀` reading and
    /// are not linear.
    pub alt_reading_exceptions: Vec<AlgebraTable>,
}

impl TailPlusReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every simple tail⁺ CKL-algebra of size `2..=max_n` is linear and
/// isomorphic to `A_n`.
pub fn verify_tail_plus_theorem(max_n: usize, cfg: &SweepConfig) -> Result<TailPlusReport> {
    let mut report = TailPlusReport {
        sizes: Vec::new(),
        failures: Vec::new(),
        alt_reading_exceptions: Vec::new(),
    };
    for n in 2..=max_n {
        let tables = enumerate(&cfg.task(n, ClassFilter::Ckl).simple(true))?;
        let a_n = canonical_form(&make_a(n)?)?;
        let mut row = TailPlusSize {
            n,
            simple_ckl: tables.len(),
            tail_plus: 0,
            tail_plus_alt: 0,
            linear: 0,
        };
        for t in &tables {
            let tr = tail_analysis(t)?;
            let linear = validate(t).is_linear;
            row.linear += linear as usize;
            if tr.is_tail_plus {
                row.tail_plus += 1;
                if !linear || *t != a_n {
                    report.failures.push(format!("n = {n}: simple tail⁺ table {:?} is not A_{n}", t.cells()));
                }
            }
            if tr.is_tail_plus_alt {
                row.tail_plus_alt += 1;
                if !linear {
                    report.alt_reading_exceptions.push(t.clone());
                }
            }
        }
        report.sizes.push(row);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureSize {
    pub n: usize,
    pub simple_ckl: usize,
    pub linear: usize,
    pub nonlinear: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub sizes: Vec<ConjectureSize>,
    /// Nonlinear simple CKL-algebras, verbatim.
    pub counterexamples: Vec<AlgebraTable>,
    /// Size at which a budget stopped the search, if any.
    pub frontier: Option<usize>,
}

/// Searches for finite simple CKL-algebras that are not linear.
pub fn conjecture_search(max_n: usize, cfg: &SweepConfig) -> Result<ConjectureReport> {
    let mut report = ConjectureReport {
        sizes: Vec::new(),
        counterexamples: Vec::new(),
        frontier: None,
    };
    for n in 2..=max_n {
        let out = run_enumeration(&cfg.task(n, ClassFilter::Ckl).simple(true))?;
        let mut row = ConjectureSize {
            n,
            simple_ckl: out.tables.len(),
            linear: 0,
            nonlinear: 0,
        };
        for t in out.tables {
            if validate(&t).is_linear {
                row.linear += 1;
            } else {
                row.nonlinear += 1;
                report.counterexamples.push(t);
            }
        }
        report.sizes.push(row);
        if !out.complete {
            report.frontier = Some(n);
            break;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Algebras checked per size, starting at size 1.
    pub counts: Vec<usize>,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Hasse components of `X ∖ {1}`.
pub fn hasse_components(t: &AlgebraTable) -> Vec<ElemSet> {
    let n = t.size();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 1..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut set = ElemSet::singleton(s);
        comp[s] = out.len();
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for (y, c) in comp.iter_mut().enumerate().skip(1) {
                if *c == usize::MAX && (t.leq(x, y) || t.leq(y, x)) {
                    *c = out.len();
                    set.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(set);
    }
    out
}

/// Over every CKL-algebra of size `1..=max_n`: tails are ideals, each Hasse
/// component of `X ∖ {1}` plus the unit is an ideal, and for bounded ones
/// with at least two elements `X ∖ {0}` is a subalgebra whose ideals are the
/// proper ideals of `X` and `X ∖ {0}` itself.
pub fn ckl_structure_suite(max_n: usize, cfg: &SweepConfig) -> Result<StructureReport> {
    let mut report = StructureReport {
        counts: Vec::new(),
        failures: Vec::new(),
    };
    for n in 1..=max_n {
        let tables = enumerate(&cfg.task(n, ClassFilter::Ckl))?;
        for t in &tables {
            let tag = format!("n = {n}, table {:?}", t.cells());
            let ideals = ideal_sets(t);
            for (z, up) in tail_analysis(t)?.tails {
                if !ideals.contains(&up) {
                    report.failures.push(format!("{tag}: tail ↑{z} is not an ideal"));
                }
            }
            for c in hasse_components(t) {
                let mut i = c;
                i.insert(0);
                if !ideals.contains(&i) {
                    report.failures.push(format!("{tag}: component {c:?} with the unit is not an ideal"));
                }
            }
            let mins = minimal_of(t, &t.all());
            if n >= 2 && mins.len() == 1 {
                let zero = mins.first().expect("one minimal element");
                let mut y = t.all();
                y.remove(zero);
                if !t.is_closed(&y) {
                    report.failures.push(format!("{tag}: X ∖ {{0}} is not a subalgebra"));
                    continue;
                }
                let (sub, embed) = t.subalgebra(&y)?;
                if !validate(&sub).is_ckl {
                    report.failures.push(format!("{tag}: X ∖ {{0}} is not CKL"));
                }
                let mut expected: Vec<ElemSet> = ideals[..ideals.len() - 1]
                    .iter()
                    .map(|i| (0..embed.len()).filter(|&k| i.contains(embed[k])).collect())
                    .collect();
                expected.push(sub.all());
                crate::ideals::sort_ideals(&mut expected);
                expected.dedup();
                if ideal_sets(&sub) != expected {
                    report.failures.push(format!("{tag}: ideals of X ∖ {{0}} differ from the prediction"));
                }
            }
        }
        report.counts.push(tables.len());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub counts: Vec<usize>,
    /// Hilbert operations of `A_2` checked against the ideal-count formula.
    pub a2_operations: usize,
    /// `(n, i)` pairs for which `LH_n ≅ ↑x_i ∝ (LH_n/↑x_i)` was rebuilt.
    pub reconstructions: usize,
    pub failures: Vec<String>,
}

impl HilbertReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The operation of `X/I` on `I` with `ρ_{[1]} = id` and every other
/// `ρ_{[u]}` constant at the unit.
pub fn constant_unit_action(t: &AlgebraTable, ideal: &ElemSet) -> Result<ActionMap> {
    let (base, _) = t.subalgebra(ideal)?;
    let q = quotient(t, ideal)?.quotient;
    let m = base.size();
    let rho = (0..q.size())
        .map(|u| if u == 0 { (0..m).collect() } else { vec![0; m] })
        .collect();
    ActionMap::new(base, q, rho)
}

/// Over every Hilbert algebra of size `1..=max_n`: `⟨z⟩ = ↑z`, ideals are
/// unions of the upsets of their minimal elements, the `P_i` primality
/// criterion, simplicity exactly at size 2, linear ones are `LH_n`, and the
/// ideal count of `X ∝ A_2` for every Hilbert operation of `A_2`. Then, for
/// `LH_n` with `n ≤ max_n`, each proper ideal `I` rebuilds `LH_n` as
/// `I ∝ (LH_n/I)`, and only `Y ≅ LH_n/I` does so among Hilbert algebras of
/// that size.
pub fn hilbert_structure_suite(max_n: usize, cfg: &SweepConfig) -> Result<HilbertReport> {
    let mut report = HilbertReport {
        counts: Vec::new(),
        a2_operations: 0,
        reconstructions: 0,
        failures: Vec::new(),
    };
    let a2 = make_a(2)?;
    let mut by_size: Vec<Vec<AlgebraTable>> = vec![Vec::new()];
    for n in 1..=max_n {
        let tables = enumerate(&cfg.task(n, ClassFilter::Hilbert))?;
        let lh = canonical_form(&make_lh(n)?)?;
        for t in &tables {
            let tag = format!("n = {n}, table {:?}", t.cells());
            for z in 0..n {
                if generated_ideal(t, &ElemSet::singleton(z))? != upset(t, z)? {
                    report.failures.push(format!("{tag}: ⟨{z}⟩ ≠ ↑{z}"));
                }
            }
            let lattice = all_ideals(t)?;
            for i in &lattice.ideals {
                let union = minimal_of(t, i)
                    .iter()
                    .try_fold(ElemSet::empty(), |acc, z| upset(t, z).map(|u| acc.union(&u)))?;
                if union != *i {
                    report.failures.push(format!("{tag}: {i:?} is not the union of its minimal upsets"));
                }
            }
            let mins = minimal_of(t, &t.all()).to_vec();
            for &mi in &mins {
                let pi = mins
                    .iter()
                    .filter(|&&m| m != mi)
                    .try_fold(ElemSet::empty(), |acc, &m| upset(t, m).map(|u| acc.union(&u)))?;
                for p in &lattice.ideals[..lattice.len() - 1] {
                    if pi.is_subset(p) && is_chain(t, &t.all().difference(p)) && !is_prime_ideal(&lattice, p)? {
                        report.failures.push(format!("{tag}: {p:?} meets the P_i criterion but is not prime"));
                    }
                }
            }
            let r = validate(t);
            if n >= 2 && r.is_simple != (n == 2) {
                report.failures.push(format!("{tag}: simple = {}", r.is_simple));
            }
            if r.is_linear && *t != lh {
                report.failures.push(format!("{tag}: linear Hilbert algebra is not LH_{n}"));
            }
            if n <= DEFAULT_OPERATION_LIMIT {
                for a in enumerate_operations(t, &a2, OperationClass::Hilbert, DEFAULT_OPERATION_LIMIT)? {
                    report.a2_operations += 1;
                    let (direct, formula) = hilbert_a2_ideal_count(&a)?;
                    if direct != formula {
                        report.failures.push(format!("{tag}: ρ_0 = {:?} gives {direct} ideals, formula {formula}", a.rho[1]));
                    }
                    let z = symmetric_semidirect(&a)?;
                    let bounded_by_unit_bottom = z
                        .index(0, 1)
                        .is_some_and(|b| (0..z.algebra.size()).all(|y| z.algebra.leq(b, y)));
                    let plus_one = direct == ideal_sets(t).len() + 1;
                    if plus_one != bounded_by_unit_bottom {
                        report.failures.push(format!(
                            "{tag}: ρ_0 = {:?}: |𝒮| = |𝒮(X)| + 1 is {plus_one}, (1,0) least is {bounded_by_unit_bottom}",
                            a.rho[1]
                        ));
                    }
                }
            }
        }
        report.counts.push(tables.len());
        by_size.push(tables);
    }

    for n in 2..=max_n {
        let lh = make_lh(n)?;
        for i in 0..n - 1 {
            let ideal = upset(&lh, i)?;
            let a = constant_unit_action(&lh, &ideal)?;
            let tag = format!("LH_{n}, I = ↑x_{i}");
            if a.class < OperationClass::Hilbert {
                report.failures.push(format!("{tag}: operation is only {}", a.class));
                continue;
            }
            let z = symmetric_semidirect(&a)?;
            report.reconstructions += 1;
            if !isomorphic(&z.algebra, &lh)? {
                report.failures.push(format!("{tag}: I ∝ (X/I) is not LH_{n}"));
            }
            let q = quotient(&lh, &ideal)?.quotient;
            if q.size() != n - i {
                report.failures.push(format!("{tag}: |X/I| = {}", q.size()));
            }
            // converse over Hilbert algebras Y of every size up to max_n
            for (m, ys) in by_size.iter().enumerate().skip(1) {
                if m > DEFAULT_OPERATION_LIMIT || a.base.size() > DEFAULT_OPERATION_LIMIT {
                    continue;
                }
                for y in ys {
                    for b in enumerate_operations(&a.base, y, OperationClass::Hilbert, DEFAULT_OPERATION_LIMIT)? {
                        let zb = symmetric_semidirect(&b)?;
                        if zb.algebra.size() == n && isomorphic(&zb.algebra, &lh)? && !isomorphic(y, &q)? {
                            report.failures.push(format!("{tag}: Y = {:?} also rebuilds LH_{n}", y.cells()));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub max_n: usize,
    pub max_formula_n: usize,
    pub failures: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `ρ^(k)` on `LH_n`: `ρ_0(x_i) = x_i` for `i > k` and `1` otherwise, where
/// `0` is the bottom of `A_2` (index 1).
pub fn lh_a2_action(n: usize, k: usize) -> Result<ActionMap> {
    let rho0: Vec<usize> = (0..n).map(|i| if i > k { i } else { 0 }).collect();
    ActionMap::new(make_lh(n)?, make_a(2)?, vec![(0..n).collect(), rho0])
}

/// `A_n` is simple, linear and CKL with invariant elements `{x_0, x_1}`;
/// `LH_n` is linear Hilbert with `n` ideals and `n - 1` primes (both for
/// `2 ≤ n ≤ max_n`); `|𝒮(LH_n ∝_{ρ^(k)} A_2)| = 2n - k` for
/// `n ≤ max_formula_n` and `0 ≤ k < n`.
pub fn verify_family_formulas(max_n: usize, max_formula_n: usize) -> Result<FamilyReport> {
    let mut failures = Vec::new();
    for n in 2..=max_n {
        let a = make_a(n)?;
        let r = validate(&a);
        if !(r.is_simple && r.is_linear && r.is_ckl) {
            failures.push(format!("A_{n}: flags {:?}", r.flags()));
        }
        let inv = order_structure(&a)?.invariant_elements;
        if inv != [0, 1].into_iter().collect() {
            failures.push(format!("A_{n}: invariant elements {inv:?}"));
        }
        let lh = make_lh(n)?;
        let r = validate(&lh);
        if !(r.is_hilbert && r.is_linear) {
            failures.push(format!("LH_{n}: flags {:?}", r.flags()));
        }
        let lattice = all_ideals(&lh)?;
        let spec = crate::ideals::spectrum_of(&lattice)?;
        if lattice.len() != n || spec.len() != n - 1 {
            failures.push(format!("LH_{n}: {} ideals, {} primes", lattice.len(), spec.len()));
        }
    }
    for n in 1..=max_formula_n {
        for k in 0..n {
            let a = lh_a2_action(n, k)?;
            if a.class < OperationClass::Hilbert {
                failures.push(format!("ρ^({k}) on LH_{n} is only {}", a.class));
                continue;
            }
            let count = ideal_sets(&symmetric_semidirect(&a)?.algebra).len();
            let (_, formula) = hilbert_a2_ideal_count(&a)?;
            if count != 2 * n - k || formula != count {
                failures.push(format!("LH_{n}, k = {k}: {count} ideals, formula {formula}, expected {}", 2 * n - k));
            }
        }
    }
    Ok(FamilyReport {
        max_n,
        max_formula_n,
        failures,
    })
}
