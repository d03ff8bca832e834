//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs without the libtest harness so the lines are printed on every run.
//! Set `LALG_SEED` to change the random word triples of criterion 7.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lalg::families::{
    conjecture_search, enumerate, verify_family_formulas, verify_simple_linear_classification,
    verify_tail_plus_theorem, ClassFilter, EnumerationTask, SweepConfig,
};
use lalg::suite::{lattice_sweep, product_sweep, seed_from_env, word_sweep, worked_examples};
use lalg::words::reproduce_sx_counterexample;
use lalg::{endomorphisms, AlgebraTable};

const WORD_TRIPLES: usize = 10_000;
const WORD_BUDGET: usize = 12;

struct Line {
    id: usize,
    ok: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn run(id: usize, limit_secs: u64, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    Line {
        id,
        ok: ok && elapsed <= limit,
        detail,
        elapsed,
        limit,
    }
}

fn first<T: std::fmt::Debug>(v: &[T]) -> String {
    v.iter().take(3).map(|x| format!("{x:?}")).collect::<Vec<_>>().join("; ")
}

// ---- independent oracles ----

fn op(t: &[usize], n: usize, x: usize, y: usize) -> usize {
    t[x * n + y]
}

fn is_l(t: &[usize], n: usize) -> bool {
    let o = |x, y| op(t, n, x, y);
    for x in 0..n {
        if o(0, x) != x || o(x, 0) != 0 || o(x, x) != 0 {
            return false;
        }
        for y in 0..n {
            if x != y && o(x, y) == 0 && o(y, x) == 0 {
                return false;
            }
            for z in 0..n {
                if o(o(x, y), o(x, z)) != o(o(y, x), o(y, z)) {
                    return false;
                }
            }
        }
    }
    true
}

fn all3(n: usize, f: impl Fn(usize, usize, usize) -> bool) -> bool {
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| f(x, y, z))))
}

fn in_class(t: &[usize], n: usize, class: ClassFilter) -> bool {
    let o = |x, y| op(t, n, x, y);
    let kl = all3(n, |x, y, _| o(x, o(y, x)) == 0);
    let ckl = kl && all3(n, |x, y, z| o(x, o(y, z)) == o(y, o(x, z)));
    match class {
        ClassFilter::L => true,
        ClassFilter::Kl => kl,
        ClassFilter::Ckl => ckl,
        ClassFilter::Hilbert => ckl && all3(n, |x, y, z| o(x, o(y, z)) == o(o(x, y), o(x, z))),
        ClassFilter::Linear => all3(n, |x, y, _| o(x, y) == 0 || o(y, x) == 0),
    }
}

/// Subsets satisfying the four ideal conditions, by brute force.
fn ideal_count(t: &[usize], n: usize) -> usize {
    let o = |x, y| op(t, n, x, y);
    (0u32..1 << n)
        .filter(|&m| {
            let has = |x: usize| m >> x & 1 == 1;
            m != 0
                && (0..n).filter(|&x| has(x)).all(|x| {
                    (0..n).all(|y| {
                        (!has(o(x, y)) || has(y)) && has(o(y, x)) && has(o(o(x, y), y)) && has(o(y, o(x, y)))
                    })
                })
        })
        .count()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 1..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabelled cell vector over all permutations fixing the unit.
fn canonical(t: &[usize], n: usize, perms: &[Vec<usize>]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| {
            let mut c = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    c[p[x] * n + p[y]] = p[op(t, n, x, y)];
                }
            }
            c
        })
        .min()
        .expect("at least one permutation")
}

/// Every completion of the forced unit and diagonal cells, filtered.
fn naive(n: usize, class: ClassFilter, simple: bool) -> BTreeSet<Vec<usize>> {
    let free: Vec<(usize, usize)> = (1..n)
        .flat_map(|x| (1..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let perms = permutations(n);
    let mut t = vec![0; n * n];
    for (x, cell) in t.iter_mut().take(n).enumerate() {
        *cell = x;
    }
    let mut out = BTreeSet::new();
    for code in 0..n.pow(free.len() as u32) {
        let mut c = code;
        for &(x, y) in &free {
            t[x * n + y] = c % n;
            c /= n;
        }
        if is_l(&t, n) && in_class(&t, n, class) && (!simple || (n >= 2 && ideal_count(&t, n) == 2)) {
            out.insert(canonical(&t, n, &perms));
        }
    }
    out
}

fn endomorphism_oracle(t: &AlgebraTable) -> Vec<Vec<usize>> {
    let n = t.size();
    let mut out = Vec::new();
    for code in 0..n.pow(n as u32) {
        let mut f = vec![0; n];
        let mut c = code;
        for slot in f.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        if (0..n).all(|x| (0..n).all(|y| f[t.op(x, y)] == t.op(f[x], f[y]))) {
            out.push(f);
        }
    }
    out
}

// ---- criteria ----

fn criterion_1() -> (bool, String) {
    let r = worked_examples().expect("worked examples run");
    let sx = reproduce_sx_counterexample();
    let detail = format!(
        "semidirect ideals, four- and seven-element ideals, S(X) values ({:?}, {:?}){}",
        sx.left,
        sx.right,
        if r.passed() { String::new() } else { format!("; {}", first(&r.failures)) }
    );
    (r.passed(), detail)
}

fn criterion_2() -> (bool, String) {
    let r = verify_family_formulas(64, 16).expect("family checks run");
    let detail = format!("A_n and LH_n for n in 2..=64, 2n-k for n <= 16; {} failures {}", r.failures.len(), first(&r.failures));
    (r.passed(), detail)
}

fn criterion_3(cfg: &SweepConfig) -> (bool, String) {
    let r = product_sweep(4, cfg).expect("product sweep runs");
    let detail = format!(
        "{} component pairs, {} operations ({} CKL), {} (I, U) pairs, {} product ideals split; \
         {} operations with a non-ideal kernel (reported); {} failures {}",
        r.component_pairs,
        r.operations,
        r.ckl_operations,
        r.pair_conditions_checked,
        r.product_ideals_split,
        r.kernel_not_ideal,
        r.failures.len(),
        first(&r.failures)
    );
    (r.passed(), detail)
}

fn criterion_4(cfg: &SweepConfig) -> (bool, String) {
    let r = lattice_sweep(5, cfg).expect("lattice sweep runs");
    let detail = format!(
        "{} algebras, {} lattices, {} join pairs, {} undefined congruences reported; {} failures {}",
        r.algebras,
        r.lattices_verified,
        r.join_pairs_checked,
        r.congruence_undefined,
        r.failures.len(),
        first(&r.failures)
    );
    (r.passed(), detail)
}

fn criterion_5(cfg: &SweepConfig) -> (bool, String) {
    let lin = verify_simple_linear_classification(6, cfg).expect("classification runs");
    let tail = verify_tail_plus_theorem(5, cfg).expect("tail+ sweep runs");
    let conj = conjecture_search(5, cfg).expect("conjecture search runs");
    let complete = conj.frontier.is_none();
    let detail = format!(
        "simple linear: {:?}; simple tail+ CKL: {:?}; conjecture counterexamples: {} {}{}",
        lin.sizes.iter().map(|s| (s.n, s.simple)).collect::<Vec<_>>(),
        tail.sizes.iter().map(|s| (s.n, s.tail_plus, s.linear)).collect::<Vec<_>>(),
        conj.counterexamples.len(),
        first(&conj.counterexamples),
        if complete { "" } else { " (search stopped by budget)" }
    );
    for c in &conj.counterexamples {
        println!("conjecture counterexample:\n{}", c.to_text());
    }
    (lin.passed() && tail.passed() && complete, detail)
}

fn criterion_6() -> (bool, String) {
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for n in 1..=4 {
        let perms = permutations(n);
        for class in [ClassFilter::L, ClassFilter::Kl, ClassFilter::Ckl, ClassFilter::Hilbert, ClassFilter::Linear] {
            for simple in [false, true] {
                let fast: BTreeSet<Vec<usize>> = enumerate(&EnumerationTask::new(n, class).simple(simple))
                    .expect("enumeration runs")
                    .iter()
                    .map(|t| canonical(t.cells(), n, &perms))
                    .collect();
                compared += 1;
                if fast != naive(n, class, simple) {
                    mismatches.push(format!("n = {n}, {class}, simple = {simple}"));
                }
            }
        }
    }
    let mut endo_algebras = 0;
    for n in 1..=5 {
        for t in enumerate(&EnumerationTask::new(n, ClassFilter::L)).expect("enumeration runs") {
            endo_algebras += 1;
            let fast: Vec<Vec<usize>> = endomorphisms(&t).expect("L-algebra").into_iter().map(|m| m.map).collect();
            if fast != endomorphism_oracle(&t) {
                mismatches.push(format!("endomorphisms of {:?}", t.cells()));
            }
        }
    }
    let detail = format!(
        "{compared} (n, class, simple) enumerations vs completion oracle, {endo_algebras} algebras vs n^n endomorphism filter; {} mismatches {}",
        mismatches.len(),
        first(&mismatches)
    );
    (mismatches.is_empty(), detail)
}

fn criterion_7(cfg: &SweepConfig) -> (bool, String) {
    let seed = seed_from_env();
    let r = word_sweep(WORD_TRIPLES, 3, WORD_BUDGET, seed, cfg).expect("word sweep runs");
    let detail = format!(
        "seed {seed}, {} identity checks, {} witness pairs ({} distinguished), {} actions with {} compatibility pairs; \
         budget-exceeded rate {:.4} (identities), {} (equivalence), {} (compatibility); {} failures {}",
        r.identity_checks,
        r.equivalence_pairs,
        r.distinguished,
        r.actions,
        r.compatibility_pairs,
        r.budget_exceeded_rate(),
        r.equivalence_budget_exceeded,
        r.compatibility_budget_exceeded,
        r.failures.len(),
        first(&r.failures)
    );
    (r.passed(), detail)
}

fn main() -> ExitCode {
    let cfg = SweepConfig::default();
    let lines = [
        run(1, 1, criterion_1),
        run(2, 10, criterion_2),
        run(3, 300, || criterion_3(&cfg)),
        run(4, 600, || criterion_4(&cfg)),
        run(5, 900, || criterion_5(&cfg)),
        run(6, 600, criterion_6),
        run(7, 600, || criterion_7(&cfg)),
    ];
    for l in &lines {
        println!(
            "criterion {}: {} [{:.2?} of {:?}] {}",
            l.id,
            if l.ok { "PASS" } else { "FAIL" },
            l.elapsed,
            l.limit,
            l.detail
        );
    }
    if lines.iter().all(|l| l.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
