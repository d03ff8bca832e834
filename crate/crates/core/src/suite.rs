//! Sweeps that run every check over the small algebras and collect the
//! results into one report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{LalgError, Result};
use crate::examples::{four_element_ckl, semidirect_example_action, seven_element_ckl, three_element_example};
use crate::families::{
    ckl_structure_suite, conjecture_search, enumerate, hilbert_structure_suite, make_a, make_lh, tail_analysis,
    verify_family_formulas, verify_simple_linear_classification, verify_tail_plus_theorem, ClassFilter,
    ConjectureReport, FamilyReport, HilbertReport, SimpleLinearReport, StructureReport, SweepConfig,
    TailPlusReport,
};
use crate::ideals::{all_ideals, ideal_sets, ideal_violation, verify_join_membership, IdealCondition};
use crate::order::upset;
use crate::products::{
    check_pair_conditions, corollary_equivalences, enumerate_operations, ideal_count_formulas, kernel_findings,
    project_ideal,
    semidirect, semidirect_lemmas, spec_decomposition, symmetric_ideal_bijection, ActionMap, OperationClass,
};
use crate::table::AlgebraTable;
use crate::words::{
    approx_equiv_letters, check_word_compatibility, reproduce_sx_counterexample, witness_holds, WordEngine,
};

/// Seed used when `LALG_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x4c41_4c47;

/// Reads `LALG_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("LALG_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub failures: Vec<String>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn set(v: &[usize]) -> ElemSet {
    v.iter().copied().collect()
}

/// The worked examples: the six-element semidirect product, the four- and
/// seven-element CKL-algebras and the self-similar closure counterexample.
pub fn worked_examples() -> Result<ExampleReport> {
    let mut f = Vec::new();
    let p = semidirect(&semidirect_example_action())?;
    let lattice = all_ideals(&p.algebra)?;
    let (k1, k2, k3) = (set(&[0]), set(&[0, 2, 4]), p.algebra.all());
    if lattice.ideals != vec![k1, k2, k3] {
        f.push(format!("semidirect example ideals {:?}", lattice.ideals));
    } else if lattice.ideal_product(&k2, &k1)? != k1 {
        f.push("K2·K1 ≠ K1".into());
    }
    // I₁ ⋊ J₂ = {1} × Y
    match ideal_violation(&p.algebra, &p.pair_set(&set(&[0]), &set(&[0, 1]))) {
        Some(v) if v.condition == IdealCondition::I1 => {}
        other => f.push(format!("{{1}} ⋊ Y: expected an (I1) witness, got {other:?}")),
    }
    let four = ideal_sets(&four_element_ckl());
    for i in [set(&[0, 1, 3]), set(&[0, 2])] {
        if !four.contains(&i) {
            f.push(format!("four-element example lacks ideal {i:?}"));
        }
    }
    let seven = seven_element_ckl();
    let s7 = ideal_sets(&seven);
    if !s7.contains(&upset(&seven, 5)?) {
        f.push("↑x5 is not an ideal".into());
    }
    if s7.contains(&upset(&seven, 6)?) {
        f.push("↑x6 is an ideal".into());
    }
    if tail_analysis(&seven)?.tails.iter().map(|(z, _)| *z).collect::<Vec<_>>() != vec![5] {
        f.push("seven-element tails".into());
    }
    let sx = reproduce_sx_counterexample();
    if !sx.passed() {
        f.push(format!("S(X) counterexample evaluated to {:?}, {:?}", sx.left, sx.right));
    }
    Ok(ExampleReport { failures: f })
}

/// Every L-algebra of size `1..=max_n`, by size.
pub fn l_algebras_up_to(max_n: usize, cfg: &SweepConfig) -> Result<Vec<AlgebraTable>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate(&cfg.task(n, ClassFilter::L))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSweepReport {
    pub max_n: usize,
    pub component_pairs: usize,
    pub operations: usize,
    pub ckl_operations: usize,
    pub pair_conditions_checked: usize,
    pub product_ideals_split: usize,
    /// Operations with a ρ-ideal `I` whose `ker(ρ^I)` is not an ideal of `Y`.
    pub kernel_not_ideal: usize,
    /// The first few such cases.
    pub kernel_examples: Vec<String>,
    pub failures: Vec<String>,
}

impl ProductSweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn note<T>(failures: &mut Vec<String>, tag: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            failures.push(format!("{tag}: {e}"));
            None
        }
    }
}

/// All checks of the product ideal theory for one operation.
pub fn check_product_theory(a: &ActionMap) -> ProductSweepReport {
    let mut r = ProductSweepReport {
        operations: 1,
        ..Default::default()
    };
    let tag = format!("X = {:?}, Y = {:?}, ρ = {:?}", a.base.cells(), a.actor.cells(), a.rho);
    let f = &mut r.failures;
    let Some(p) = note(f, &tag, semidirect(a)) else {
        return r;
    };
    let xs = ideal_sets(&a.base);
    let ys = ideal_sets(&a.actor);
    for i in &xs {
        for u in &ys {
            r.pair_conditions_checked += 1;
            note(f, &tag, check_pair_conditions(&p, i, u));
        }
    }
    if let Some(cs) = note(f, &tag, corollary_equivalences(&p)) {
        for ((i, u), c) in cs {
            if !c.agree() {
                f.push(format!("{tag}: I = {i:?}, U = {u:?}: {c:?}"));
            }
        }
    }
    for k in ideal_sets(&p.algebra) {
        r.product_ideals_split += 1;
        note(f, &tag, project_ideal(&p, &k));
    }
    if let Some(c) = note(f, &tag, ideal_count_formulas(a)) {
        f.extend(c.failures.into_iter().map(|s| format!("{tag}: {s}")));
    }
    if let Some(s) = note(f, &tag, spec_decomposition(a)) {
        f.extend(s.failures.into_iter().map(|x| format!("{tag}: {x}")));
    }
    if let Some(l) = note(f, &tag, semidirect_lemmas(a)) {
        f.extend(l.into_iter().map(|x| format!("{tag}: {x}")));
    }
    if let Some(k) = note(f, &tag, kernel_findings(a)) {
        if let Some((i, ker)) = k.first() {
            r.kernel_not_ideal = 1;
            r.kernel_examples.push(format!("{tag}: I = {i:?}, ker(ρ^I) = {ker:?}"));
        }
    }
    if a.class >= OperationClass::Ckl {
        r.ckl_operations = 1;
        if let Some(b) = note(f, &tag, symmetric_ideal_bijection(a)) {
            f.extend(b.failures.into_iter().map(|x| format!("{tag}: {x}")));
        }
    }
    r
}

/// Runs [`check_product_theory`] for every operation between every pair of
/// L-algebras of size at most `max_n`.
pub fn product_sweep(max_n: usize, cfg: &SweepConfig) -> Result<ProductSweepReport> {
    let algebras = l_algebras_up_to(max_n, cfg)?;
    let pairs: Vec<(&AlgebraTable, &AlgebraTable)> =
        algebras.iter().flat_map(|x| algebras.iter().map(move |y| (x, y))).collect();
    let parts: Vec<Result<ProductSweepReport>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let ops = enumerate_operations(x, y, OperationClass::L, max_n.max(1))?;
            let reports: Vec<ProductSweepReport> = ops.par_iter().map(check_product_theory).collect();
            let mut total = ProductSweepReport::default();
            for s in reports {
                merge(&mut total, s);
            }
            total.component_pairs = 1;
            Ok(total)
        })
        .collect();
    let mut total = ProductSweepReport {
        max_n,
        ..Default::default()
    };
    for p in parts {
        merge(&mut total, p?);
    }
    Ok(total)
}

const KERNEL_EXAMPLES: usize = 5;

fn merge(into: &mut ProductSweepReport, from: ProductSweepReport) {
    into.component_pairs += from.component_pairs;
    into.operations += from.operations;
    into.ckl_operations += from.ckl_operations;
    into.pair_conditions_checked += from.pair_conditions_checked;
    into.product_ideals_split += from.product_ideals_split;
    into.kernel_not_ideal += from.kernel_not_ideal;
    let room = KERNEL_EXAMPLES.saturating_sub(into.kernel_examples.len());
    into.kernel_examples.extend(from.kernel_examples.into_iter().take(room));
    into.failures.extend(from.failures);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSweepReport {
    pub max_n: usize,
    pub algebras: usize,
    pub lattices_verified: usize,
    pub join_pairs_checked: usize,
    /// Pairs `(I, J)` where the relation modulo `J` is not a congruence;
    /// reported, not counted as passes.
    pub congruence_undefined: usize,
    pub failures: Vec<String>,
}

impl LatticeSweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Distributivity, the ideal L-algebra, and join membership for every
/// L-algebra of size at most `max_n`.
pub fn lattice_sweep(max_n: usize, cfg: &SweepConfig) -> Result<LatticeSweepReport> {
    let algebras = l_algebras_up_to(max_n, cfg)?;
    let per: Vec<(usize, usize, usize, Vec<String>)> = algebras
        .par_iter()
        .map(|t| {
            let tag = format!("table {:?}", t.cells());
            let mut f = Vec::new();
            let (mut checked, mut undefined) = (0, 0);
            let lattice = match all_ideals(t) {
                Ok(l) => l,
                Err(e) => {
                    f.push(format!("{tag}: {e}"));
                    return (0, 0, 0, f);
                }
            };
            for i in &lattice.ideals {
                for j in &lattice.ideals {
                    match verify_join_membership(&lattice, i, j) {
                        Ok(true) => checked += 1,
                        Ok(false) => f.push(format!("{tag}: join membership fails for {i:?}, {j:?}")),
                        Err(LalgError::CongruenceUndefined(_)) => undefined += 1,
                        Err(e) => f.push(format!("{tag}: {e}")),
                    }
                }
            }
            (1, checked, undefined, f)
        })
        .collect();
    let mut r = LatticeSweepReport {
        max_n,
        algebras: algebras.len(),
        lattices_verified: 0,
        join_pairs_checked: 0,
        congruence_undefined: 0,
        failures: Vec::new(),
    };
    for (v, c, u, f) in per {
        r.lattices_verified += v;
        r.join_pairs_checked += c;
        r.congruence_undefined += u;
        r.failures.extend(f);
    }
    Ok(r)
}

/// Algebras on which the word identities are sampled.
pub fn word_corpus() -> Result<Vec<(String, AlgebraTable)>> {
    Ok(vec![
        ("three-element CKL".into(), three_element_example()),
        ("four-element CKL".into(), four_element_ckl()),
        ("seven-element CKL".into(), seven_element_ckl()),
        ("A_3".into(), make_a(3)?),
        ("A_4".into(), make_a(4)?),
        ("LH_4".into(), make_lh(4)?),
        ("semidirect example".into(), semidirect(&semidirect_example_action())?.algebra),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSweepReport {
    pub seed: u64,
    pub budget: usize,
    pub triples_per_algebra: usize,
    pub identity_checks: usize,
    pub identity_budget_exceeded: usize,
    pub equivalence_pairs: usize,
    pub distinguished: usize,
    pub equivalence_budget_exceeded: usize,
    pub actions: usize,
    pub compatibility_pairs: usize,
    pub compatibility_budget_exceeded: usize,
    pub failures: Vec<String>,
}

impl WordSweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Fraction of identity checks abandoned for budget reasons.
    pub fn budget_exceeded_rate(&self) -> f64 {
        let total = self.identity_checks + self.identity_budget_exceeded;
        if total == 0 {
            0.0
        } else {
            self.identity_budget_exceeded as f64 / total as f64
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, letters: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..letters)).collect()
}

/// Samples `ab·c = a·(b·c)` and `a·bc = ((c·a)·b)(a·c)` on random words of
/// length at most 3, tests `≈` at depth 2 on random short pairs (witnesses
/// re-evaluated, symmetry checked), and checks the compatibility of the word
/// extension for every operation between L-algebras of size at most
/// `max_action_n` on word pairs of length at most 3.
pub fn word_sweep(
    triples: usize,
    max_action_n: usize,
    budget: usize,
    seed: u64,
    cfg: &SweepConfig,
) -> Result<WordSweepReport> {
    let mut r = WordSweepReport {
        seed,
        budget,
        triples_per_algebra: triples,
        identity_checks: 0,
        identity_budget_exceeded: 0,
        equivalence_pairs: 0,
        distinguished: 0,
        equivalence_budget_exceeded: 0,
        actions: 0,
        compatibility_pairs: 0,
        compatibility_budget_exceeded: 0,
        failures: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, t) in word_corpus()? {
        let n = t.size();
        let mut e = WordEngine::new(&t, budget);
        for _ in 0..triples {
            let (a, b, c) = (random_word(&mut rng, n, 3), random_word(&mut rng, n, 3), random_word(&mut rng, n, 3));
            let ab: Vec<usize> = a.iter().chain(&b).copied().collect();
            let bc: Vec<usize> = b.iter().chain(&c).copied().collect();
            let first = (|| {
                let bc_val = e.dot(&b, &c)?;
                Ok::<_, LalgError>((e.dot(&ab, &c)?, e.dot(&a, &bc_val)?))
            })();
            let second = (|| {
                let lhs = e.dot(&a, &bc)?;
                let ca = e.dot(&c, &a)?;
                let mut rhs = e.dot(&ca, &b)?;
                rhs.extend(e.dot(&a, &c)?);
                Ok::<_, LalgError>((lhs, rhs))
            })();
            for (label, res) in [("ab·c = a·(b·c)", first), ("a·bc = ((c·a)·b)(a·c)", second)] {
                match res {
                    Ok((l, rr)) if l == rr => r.identity_checks += 1,
                    Ok((l, rr)) => {
                        r.identity_checks += 1;
                        r.failures.push(format!("{name}: {label} fails for {a:?}, {b:?}, {c:?}: {l:?} vs {rr:?}"))
                    }
                    Err(_) => r.identity_budget_exceeded += 1,
                }
            }
        }
        let samples: Vec<(Vec<usize>, Vec<usize>)> =
            (0..40).map(|_| (random_word(&mut rng, n, 2), random_word(&mut rng, n, 2))).collect();
        let outcomes: Vec<_> = samples
            .par_iter()
            .map(|(a, b)| (approx_equiv_letters(&t, a, b, 2, budget), approx_equiv_letters(&t, b, a, 2, budget)))
            .collect();
        for ((a, b), (ab, ba)) in samples.iter().zip(outcomes) {
            r.equivalence_pairs += 1;
            if ab.is_distinguished() != ba.is_distinguished() {
                r.failures.push(format!("{name}: ≈ not symmetric on {a:?}, {b:?}"));
            }
            if ab.is_distinguished() {
                r.distinguished += 1;
                if !witness_holds(&t, a, b, &ab, budget) {
                    r.failures.push(format!("{name}: witness for {a:?}, {b:?} does not re-verify"));
                }
            } else if !ab.is_equivalent() {
                r.equivalence_budget_exceeded += 1;
            }
        }
    }

    let small = l_algebras_up_to(max_action_n, cfg)?;
    let mut actions = Vec::new();
    for x in &small {
        for y in &small {
            actions.extend(enumerate_operations(x, y, OperationClass::L, max_action_n.max(1))?);
        }
    }
    let reports: Vec<_> = actions.par_iter().map(|a| check_word_compatibility(a, 3, budget)).collect();
    for (a, c) in actions.iter().zip(reports) {
        r.actions += 1;
        r.compatibility_pairs += c.pairs_checked;
        r.compatibility_budget_exceeded += c.budget_exceeded;
        for (u, v, x) in c.failures {
            r.failures.push(format!(
                "ρ = {:?} over Y = {:?}: compatibility fails for {u:?}, {v:?} at {x}",
                a.rho,
                a.actor.cells()
            ));
        }
    }
    Ok(r)
}

/// Sizes and budgets for [`verify_all`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub sweep: SweepConfig,
    pub family_max_n: usize,
    pub formula_max_n: usize,
    pub product_max_n: usize,
    pub lattice_max_n: usize,
    pub linear_max_n: usize,
    pub tail_plus_max_n: usize,
    pub conjecture_max_n: usize,
    pub structure_max_n: usize,
    pub word_triples: usize,
    pub word_action_max_n: usize,
    pub word_budget: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            sweep: SweepConfig::default(),
            family_max_n: 64,
            formula_max_n: 16,
            product_max_n: 4,
            lattice_max_n: 5,
            linear_max_n: 6,
            tail_plus_max_n: 5,
            conjecture_max_n: 5,
            structure_max_n: 5,
            word_triples: 10_000,
            word_action_max_n: 3,
            word_budget: crate::words::DEFAULT_WORD_BUDGET,
            seed: DEFAULT_SEED,
        }
    }
}

impl VerifyConfig {
    /// Caps every size at `max_n`.
    pub fn capped(mut self, max_n: usize) -> Self {
        for v in [
            &mut self.product_max_n,
            &mut self.lattice_max_n,
            &mut self.linear_max_n,
            &mut self.tail_plus_max_n,
            &mut self.conjecture_max_n,
            &mut self.structure_max_n,
            &mut self.word_action_max_n,
        ] {
            *v = (*v).min(max_n);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyAllReport {
    pub config: VerifyConfig,
    pub examples: ExampleReport,
    pub families: FamilyReport,
    pub products: ProductSweepReport,
    pub lattices: LatticeSweepReport,
    pub simple_linear: SimpleLinearReport,
    pub tail_plus: TailPlusReport,
    pub conjecture: ConjectureReport,
    pub ckl_structure: StructureReport,
    pub hilbert: HilbertReport,
    pub words: WordSweepReport,
}

impl VerifyAllReport {
    /// Names of the sections with failures.
    pub fn failed_sections(&self) -> Vec<&'static str> {
        [
            ("examples", self.examples.passed()),
            ("families", self.families.passed()),
            ("products", self.products.passed()),
            ("lattices", self.lattices.passed()),
            ("simple_linear", self.simple_linear.passed()),
            ("tail_plus", self.tail_plus.passed()),
            ("ckl_structure", self.ckl_structure.passed()),
            ("hilbert", self.hilbert.passed()),
            ("words", self.words.passed()),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(s, _)| s)
        .collect()
    }

    pub fn passed(&self) -> bool {
        self.failed_sections().is_empty()
    }
}

/// Runs every sweep. A budget running out aborts with `ResourceBound`.
pub fn verify_all(cfg: &VerifyConfig) -> Result<VerifyAllReport> {
    let s = &cfg.sweep;
    Ok(VerifyAllReport {
        examples: worked_examples()?,
        families: verify_family_formulas(cfg.family_max_n, cfg.formula_max_n)?,
        products: product_sweep(cfg.product_max_n, s)?,
        lattices: lattice_sweep(cfg.lattice_max_n, s)?,
        simple_linear: verify_simple_linear_classification(cfg.linear_max_n, s)?,
        tail_plus: verify_tail_plus_theorem(cfg.tail_plus_max_n, s)?,
        conjecture: conjecture_search(cfg.conjecture_max_n, s)?,
        ckl_structure: ckl_structure_suite(cfg.structure_max_n, s)?,
        hilbert: hilbert_structure_suite(cfg.structure_max_n, s)?,
        words: word_sweep(cfg.word_triples, cfg.word_action_max_n, cfg.word_budget, cfg.seed, s)?,
        config: cfg.clone(),
    })
}
