//! Isomorph-free enumeration of small L-algebras.
//!
//! The unit row, unit column and diagonal are fixed. Elements are labelled so
//! that `x_i ≤ x_j` forces `i ≥ j` (a linear extension of the order read from
//! the top), which makes antisymmetry automatic and removes most relabelled
//! copies before canonical deduplication. Cells are filled by growing leading
//! blocks; after each assignment every fully evaluable instance of the cycloid
//! equation and of the class identities is checked.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_labelling;
use crate::classify::validate;
use crate::error::{LalgError, Result};
use crate::table::AlgebraTable;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(600);

/// Largest size the enumerator accepts.
pub const MAX_ENUMERATION_SIZE: usize = 12;

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassFilter {
    L,
    Kl,
    Ckl,
    Hilbert,
    /// Totally ordered L-algebras.
    Linear,
}

impl fmt::Display for ClassFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassFilter::L => "l",
            ClassFilter::Kl => "kl",
            ClassFilter::Ckl => "ckl",
            ClassFilter::Hilbert => "hilbert",
            ClassFilter::Linear => "linear",
        })
    }
}

impl FromStr for ClassFilter {
    type Err = LalgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l" => Ok(ClassFilter::L),
            "kl" => Ok(ClassFilter::Kl),
            "ckl" => Ok(ClassFilter::Ckl),
            "hilbert" => Ok(ClassFilter::Hilbert),
            "linear" => Ok(ClassFilter::Linear),
            other => Err(LalgError::Parse(format!("unknown class `{other}`"))),
        }
    }
}

impl ClassFilter {
    /// Whether a validated table belongs to the class.
    pub fn accepts(&self, t: &AlgebraTable) -> bool {
        let r = validate(t);
        match self {
            ClassFilter::L => r.is_l,
            ClassFilter::Kl => r.is_kl,
            ClassFilter::Ckl => r.is_ckl,
            ClassFilter::Hilbert => r.is_hilbert,
            ClassFilter::Linear => r.is_linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationTask {
    pub size: usize,
    pub class: ClassFilter,
    pub require_simple: bool,
    /// Keep only the first `limit` tables of the sorted output.
    pub limit: Option<usize>,
    pub node_budget: u64,
    #[serde(with = "secs")]
    pub time_budget: Duration,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

mod secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl EnumerationTask {
    pub fn new(size: usize, class: ClassFilter) -> Self {
        EnumerationTask {
            size,
            class,
            require_simple: false,
            limit: None,
            node_budget: DEFAULT_NODE_BUDGET,
            time_budget: DEFAULT_TIME_BUDGET,
            workers: None,
        }
    }

    pub fn simple(mut self, yes: bool) -> Self {
        self.require_simple = yes;
        self
    }

    pub fn with_budget(mut self, nodes: u64, time: Duration) -> Self {
        self.node_budget = nodes;
        self.time_budget = time;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationOutcome {
    /// Canonical tables in lexicographic order of their cells.
    pub tables: Vec<AlgebraTable>,
    /// Search nodes visited.
    pub nodes: u64,
    /// False when a budget stopped the search; `tables` is then partial.
    pub complete: bool,
}

/// Every isomorphism class matching the task, or `ResourceBound` when a
/// budget runs out.
pub fn enumerate(task: &EnumerationTask) -> Result<Vec<AlgebraTable>> {
    let out = run_enumeration(task)?;
    if out.complete {
        Ok(out.tables)
    } else {
        Err(LalgError::ResourceBound {
            nodes: out.nodes,
            partial: out.tables.len(),
        })
    }
}

/// Like [`enumerate`] but returns partial results instead of failing.
pub fn run_enumeration(task: &EnumerationTask) -> Result<EnumerationOutcome> {
    let n = task.size;
    if n == 0 {
        return Err(LalgError::MalformedTable("enumeration size must be at least 1".into()));
    }
    if n > MAX_ENUMERATION_SIZE {
        return Err(LalgError::TooLarge {
            n,
            max: MAX_ENUMERATION_SIZE,
        });
    }
    let run = || search(task);
    match task.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| LalgError::Parse(format!("worker pool: {e}")))?
            .install(run),
        None => run(),
    }
}

/// An identity instance `lhs(x,y,z) = rhs(x,y,z)` to test.
#[derive(Clone, Copy)]
enum Check {
    Cycloid(usize, usize, usize),
    Kl(usize, usize),
    Exchange(usize, usize, usize),
    SelfDistributive(usize, usize, usize),
}

struct Shape {
    n: usize,
    cells: Vec<(usize, usize)>,
    /// Allowed values per free cell.
    domains: Vec<Vec<usize>>,
    checks: Vec<Check>,
}

impl Shape {
    fn new(n: usize, class: ClassFilter) -> Self {
        let mut cells: Vec<(usize, usize)> = (1..n)
            .flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        cells.sort_by_key(|&(i, j)| (i.max(j), i, j));
        let domains = cells
            .iter()
            .map(|&(i, j)| match class {
                ClassFilter::Linear if i > j => vec![0],
                _ if i < j => (1..n).collect(),
                _ => (0..n).collect(),
            })
            .collect();
        let mut checks = Vec::new();
        for x in 1..n {
            for y in x + 1..n {
                for z in 1..n {
                    if z != x && z != y {
                        checks.push(Check::Cycloid(x, y, z));
                    }
                }
            }
        }
        let kl = matches!(class, ClassFilter::Kl | ClassFilter::Ckl | ClassFilter::Hilbert);
        for x in 1..n {
            for y in 1..n {
                if x == y {
                    continue;
                }
                if kl {
                    checks.push(Check::Kl(x, y));
                }
                for z in 1..n {
                    if matches!(class, ClassFilter::Ckl | ClassFilter::Hilbert) && x < y && z != x && z != y {
                        checks.push(Check::Exchange(x, y, z));
                    }
                }
            }
        }
        if class == ClassFilter::Hilbert {
            for x in 1..n {
                for y in 1..n {
                    for z in 1..n {
                        if x != z && y != z {
                            checks.push(Check::SelfDistributive(x, y, z));
                        }
                    }
                }
            }
        }
        Shape {
            n,
            cells,
            domains,
            checks,
        }
    }

    fn initial(&self) -> Vec<usize> {
        let n = self.n;
        let mut t = vec![UNSET; n * n];
        for x in 0..n {
            t[x] = x;
            t[x * n] = 0;
            t[x * n + x] = 0;
        }
        t
    }
}

/// Evaluates `x·y` on a partial table.
#[inline]
fn get(t: &[usize], n: usize, x: usize, y: usize) -> Option<usize> {
    if x == UNSET || y == UNSET {
        return None;
    }
    let v = t[x * n + y];
    (v != UNSET).then_some(v)
}

fn violated(t: &[usize], n: usize, c: Check) -> bool {
    let g = |x, y| get(t, n, x, y);
    let pair = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    };
    match c {
        Check::Cycloid(x, y, z) => {
            let l = g(x, y).zip(g(x, z)).and_then(|(a, b)| g(a, b));
            let r = g(y, x).zip(g(y, z)).and_then(|(a, b)| g(a, b));
            pair(l, r)
        }
        Check::Kl(x, y) => g(y, x).and_then(|a| g(x, a)).is_some_and(|v| v != 0),
        Check::Exchange(x, y, z) => pair(g(y, z).and_then(|a| g(x, a)), g(x, z).and_then(|a| g(y, a))),
        Check::SelfDistributive(x, y, z) => pair(
            g(y, z).and_then(|a| g(x, a)),
            g(x, y).zip(g(x, z)).and_then(|(a, b)| g(a, b)),
        ),
    }
}

fn consistent(shape: &Shape, t: &[usize]) -> bool {
    !shape.checks.iter().any(|&c| violated(t, shape.n, c))
}

struct Budget {
    nodes: AtomicU64,
    stop: AtomicBool,
    limit: u64,
    deadline: Instant,
}

impl Budget {
    /// Adds `k` visited nodes; returns false once the search must stop.
    fn spend(&self, k: u64) -> bool {
        let total = self.nodes.fetch_add(k, Ordering::Relaxed) + k;
        if total > self.limit || Instant::now() > self.deadline {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

struct Worker<'a> {
    shape: &'a Shape,
    budget: &'a Budget,
    pending: u64,
    found: Vec<Vec<usize>>,
}

impl Worker<'_> {
    fn dfs(&mut self, t: &mut Vec<usize>, k: usize) -> bool {
        self.pending += 1;
        if self.pending >= 4096 {
            let ok = self.budget.spend(self.pending);
            self.pending = 0;
            if !ok {
                return false;
            }
        }
        if k == self.shape.cells.len() {
            self.found.push(t.clone());
            return true;
        }
        let (i, j) = self.shape.cells[k];
        let n = self.shape.n;
        for &v in &self.shape.domains[k] {
            if v == 0 && t[j * n + i] == 0 {
                continue;
            }
            t[i * n + j] = v;
            if consistent(self.shape, t) && !self.dfs(t, k + 1) {
                t[i * n + j] = UNSET;
                return false;
            }
        }
        t[i * n + j] = UNSET;
        true
    }
}

/// Partial tables with the first `depth` free cells assigned consistently.
fn prefixes(shape: &Shape, depth: usize) -> Vec<Vec<usize>> {
    let mut layer = vec![shape.initial()];
    for k in 0..depth.min(shape.cells.len()) {
        let (i, j) = shape.cells[k];
        let n = shape.n;
        layer = layer
            .into_iter()
            .flat_map(|t| {
                shape.domains[k]
                    .iter()
                    .filter_map(|&v| {
                        if v == 0 && t[j * n + i] == 0 {
                            return None;
                        }
                        let mut u = t.clone();
                        u[i * n + j] = v;
                        consistent(shape, &u).then_some(u)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    layer
}

fn search(task: &EnumerationTask) -> Result<EnumerationOutcome> {
    let n = task.size;
    let shape = Shape::new(n, task.class);
    let budget = Budget {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        limit: task.node_budget,
        deadline: Instant::now() + task.time_budget,
    };
    let split = 2.min(shape.cells.len());
    let starts = prefixes(&shape, split);
    let results: Vec<(Vec<Vec<usize>>, bool)> = starts
        .into_par_iter()
        .map(|mut t| {
            let mut w = Worker {
                shape: &shape,
                budget: &budget,
                pending: 0,
                found: Vec::new(),
            };
            let done = w.dfs(&mut t, split);
            budget.spend(w.pending);
            (w.found, done)
        })
        .collect();
    let complete = results.iter().all(|(_, done)| *done) && !budget.stop.load(Ordering::Relaxed);

    let leaves: Vec<Vec<usize>> = results.into_iter().flat_map(|(f, _)| f).collect();
    let canon: Vec<Option<AlgebraTable>> = leaves
        .into_par_iter()
        .map(|cells| {
            let t = AlgebraTable::from_cells_unchecked(n, cells);
            let (c, _) = canonical_labelling(&t);
            let keep = (task.class != ClassFilter::Linear || validate(&c).is_linear)
                && (!task.require_simple || crate::ideals::is_simple(&c));
            keep.then_some(c)
        })
        .collect();
    let mut unique: BTreeMap<Vec<usize>, AlgebraTable> = BTreeMap::new();
    for c in canon.into_iter().flatten() {
        unique.entry(c.cells().to_vec()).or_insert(c);
    }
    let mut tables: Vec<AlgebraTable> = unique.into_values().collect();
    if let Some(limit) = task.limit {
        tables.truncate(limit);
    }
    Ok(EnumerationOutcome {
        tables,
        nodes: budget.nodes.load(Ordering::Relaxed),
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::classify::is_l_algebra;
    use crate::families::{make_a, make_lh};
    use std::collections::BTreeSet;

    /// Every completion of the free cells, filtered by the axioms.
    fn naive(n: usize, class: ClassFilter) -> BTreeSet<Vec<usize>> {
        let free: Vec<(usize, usize)> = (1..n)
            .flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut out = BTreeSet::new();
        let total = n.pow(free.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut cells = vec![0; n * n];
            cells[..n].copy_from_slice(&(0..n).collect::<Vec<_>>());
            for &(i, j) in &free {
                cells[i * n + j] = c % n;
                c /= n;
            }
            let t = AlgebraTable::from_cells_unchecked(n, cells);
            if is_l_algebra(&t) && class.accepts(&t) {
                out.insert(canonical_form(&t).unwrap().cells().to_vec());
            }
        }
        out
    }

    fn fast(n: usize, class: ClassFilter) -> BTreeSet<Vec<usize>> {
        enumerate(&EnumerationTask::new(n, class))
            .unwrap()
            .iter()
            .map(|t| t.cells().to_vec())
            .collect()
    }

    #[test]
    fn small_sizes_match_naive_search() {
        for n in 1..=4 {
            for class in [ClassFilter::L, ClassFilter::Ckl, ClassFilter::Hilbert, ClassFilter::Linear] {
                assert_eq!(fast(n, class), naive(n, class), "n = {n}, {class}");
            }
        }
    }

    #[test]
    fn unique_small_algebras() {
        assert_eq!(enumerate(&EnumerationTask::new(1, ClassFilter::L)).unwrap().len(), 1);
        let two = enumerate(&EnumerationTask::new(2, ClassFilter::L)).unwrap();
        assert_eq!(two.len(), 1);
        assert!(crate::canon::isomorphic(&two[0], &make_a(2).unwrap()).unwrap());
    }

    #[test]
    fn simple_linear_and_linear_hilbert() {
        for n in 2..=5 {
            let s = enumerate(&EnumerationTask::new(n, ClassFilter::Linear).simple(true)).unwrap();
            assert_eq!(s, vec![canonical_form(&make_a(n).unwrap()).unwrap()]);
            let h = enumerate(&EnumerationTask::new(n, ClassFilter::Hilbert)).unwrap();
            let lh = canonical_form(&make_lh(n).unwrap()).unwrap();
            assert_eq!(h.iter().filter(|t| validate(t).is_linear).collect::<Vec<_>>(), vec![&lh]);
        }
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let base = enumerate(&EnumerationTask::new(5, ClassFilter::Ckl)).unwrap();
        for w in [1, 3] {
            let other = enumerate(&EnumerationTask::new(5, ClassFilter::Ckl).with_workers(Some(w))).unwrap();
            assert_eq!(base, other);
        }
    }

    #[test]
    fn node_budget_is_reported() {
        let task = EnumerationTask::new(5, ClassFilter::L).with_budget(10, DEFAULT_TIME_BUDGET);
        assert!(matches!(enumerate(&task), Err(LalgError::ResourceBound { .. })));
        let out = run_enumeration(&task).unwrap();
        assert!(!out.complete);
    }
}
