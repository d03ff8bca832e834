//! Operations `ρ: Y → End(X)` and the semidirect products they define.
//!
//! An operation satisfies `ρ_1 = id` and `ρ_{u·v}∘ρ_u = ρ_{v·u}∘ρ_v`. The
//! semidirect product `X ⋊ Y` has carrier `X × Y` with
//! `(x,u)·(y,v) = (ρ_{u·v}(x)·ρ_{v·u}(y), u·v)`; pairs are stored row-major,
//! `(x,u)` at position `x·|Y| + u`. The symmetric product keeps the pairs with
//! `ρ_u(x) = x`, in the same relative order.

mod ideals;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ideals::*;

use crate::bitset::{ElemSet, MAX_SET_ELEMS};
use crate::classify::{find_violation, l_algebra_violation, require_l, validate, Axiom};
use crate::error::{LalgError, Result};
use crate::morphism::{homomorphisms, morphism_violation};
use crate::table::AlgebraTable;

/// Strength of an operation, ordered `L < KL < CKL < Hilbert`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperationClass {
    L,
    Kl,
    Ckl,
    Hilbert,
}

impl fmt::Display for OperationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperationClass::L => "L",
            OperationClass::Kl => "KL",
            OperationClass::Ckl => "CKL",
            OperationClass::Hilbert => "Hilbert",
        })
    }
}

/// `rho[u][x] = ρ_u(x)` for an actor `Y` operating on a base `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionMap {
    pub base: AlgebraTable,
    pub actor: AlgebraTable,
    pub rho: Vec<Vec<usize>>,
    /// Strongest class the operation satisfies.
    pub class: OperationClass,
}

impl ActionMap {
    /// Validates both tables and the operation axioms.
    pub fn new(base: AlgebraTable, actor: AlgebraTable, rho: Vec<Vec<usize>>) -> Result<Self> {
        require_l(&base)?;
        require_l(&actor)?;
        if rho.len() != actor.size() {
            return Err(LalgError::ActionInvalid(format!(
                "{} maps for an actor of size {}",
                rho.len(),
                actor.size()
            )));
        }
        for (u, r) in rho.iter().enumerate() {
            if r.len() != base.size() || r.iter().any(|&v| v >= base.size()) {
                return Err(LalgError::ActionInvalid(format!("ρ_{u} is not a self-map of the base")));
            }
        }
        if let Some(msg) = operation_violation(&base, &actor, &rho) {
            return Err(LalgError::ActionInvalid(msg));
        }
        let class = operation_class(&base, &actor, &rho);
        Ok(ActionMap {
            base,
            actor,
            rho,
            class,
        })
    }

    /// `ρ_u = id` for every `u`: the direct product.
    pub fn trivial(base: AlgebraTable, actor: AlgebraTable) -> Result<Self> {
        let id: Vec<usize> = (0..base.size()).collect();
        let rho = vec![id; actor.size()];
        Self::new(base, actor, rho)
    }

    /// `X` acting on itself by `ρ_u(x) = u·x`.
    /// `ρ_u(x) = u·x`; an operation exactly when `t` is a Hilbert algebra.
    pub fn self_action(t: AlgebraTable) -> Result<Self> {
        let rho = (0..t.size()).map(|u| t.row(u).to_vec()).collect();
        Self::new(t.clone(), t, rho)
    }

    #[inline]
    pub fn apply(&self, u: usize, x: usize) -> usize {
        self.rho[u][x]
    }

    pub fn is_trivial(&self) -> bool {
        self.rho.iter().all(|r| r.iter().enumerate().all(|(x, &v)| x == v))
    }

    /// Parses the action file format: base table, actor table, then one line
    /// of `|X|` indices per element of `Y`. JSON input uses the keys `base`,
    /// `actor` and `rho`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            #[derive(Deserialize)]
            struct Raw {
                base: AlgebraTable,
                actor: AlgebraTable,
                rho: Vec<Vec<usize>>,
            }
            let raw: Raw = serde_json::from_str(text).map_err(|e| LalgError::Parse(e.to_string()))?;
            return Self::new(raw.base, raw.actor, raw.rho);
        }
        let mut lines = crate::table::content_lines(text).peekable();
        let base = crate::table::parse_table_block(&mut lines)?;
        let actor = crate::table::parse_table_block(&mut lines)?;
        let mut rho = Vec::with_capacity(actor.size());
        for _ in 0..actor.size() {
            let (no, line) = lines
                .next()
                .ok_or_else(|| LalgError::Parse("missing action rows".into()))?;
            rho.push(crate::table::parse_indices(no, line)?);
        }
        if let Some((no, _)) = lines.next() {
            return Err(LalgError::Parse(format!("line {no}: unexpected trailing content")));
        }
        Self::new(base, actor, rho)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.base.to_text();
        s.push_str(&self.actor.to_text());
        for r in &self.rho {
            let row: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Description of the first failed operation axiom, if any.
pub fn operation_violation(base: &AlgebraTable, actor: &AlgebraTable, rho: &[Vec<usize>]) -> Option<String> {
    let n = base.size();
    if rho[0].iter().enumerate().any(|(x, &v)| x != v) {
        return Some("ρ_1 is not the identity".into());
    }
    for (u, r) in rho.iter().enumerate() {
        if r[0] != 0 {
            return Some(format!("ρ_{u}(1) ≠ 1"));
        }
        if let Some((x, y)) = morphism_violation(base, base, r) {
            return Some(format!("ρ_{u} is not an endomorphism at ({x}, {y})"));
        }
    }
    for u in 0..actor.size() {
        for v in 0..actor.size() {
            let (uv, vu) = (actor.op(u, v), actor.op(v, u));
            if let Some(x) = (0..n).find(|&x| rho[uv][rho[u][x]] != rho[vu][rho[v][x]]) {
                return Some(format!("ρ_(u·v)∘ρ_u ≠ ρ_(v·u)∘ρ_v at u = {u}, v = {v}, x = {x}"));
            }
        }
    }
    None
}

/// Strongest class of a valid operation. Each class requires both tables to
/// lie in it.
pub fn operation_class(base: &AlgebraTable, actor: &AlgebraTable, rho: &[Vec<usize>]) -> OperationClass {
    class_with(base, rho, ClassFlags::of(base), ClassFlags::of(actor))
}

/// The KL, CKL and Hilbert flags of an L-algebra.
#[derive(Clone, Copy)]
struct ClassFlags {
    is_kl: bool,
    is_ckl: bool,
    is_hilbert: bool,
}

impl ClassFlags {
    fn of(t: &AlgebraTable) -> Self {
        let is_kl = find_violation(t, Axiom::Kl).is_none();
        let is_ckl = is_kl && find_violation(t, Axiom::Exchange).is_none();
        let is_hilbert = is_ckl && find_violation(t, Axiom::SelfDistributive).is_none();
        ClassFlags { is_kl, is_ckl, is_hilbert }
    }
}

fn class_with(base: &AlgebraTable, rho: &[Vec<usize>], rb: ClassFlags, ra: ClassFlags) -> OperationClass {
    let n = base.size();
    let kl = rb.is_kl && ra.is_kl && rho.iter().all(|r| (0..n).all(|x| base.op(x, r[x]) == 0));
    if !kl {
        return OperationClass::L;
    }
    let ckl = rb.is_ckl
        && ra.is_ckl
        && rho.iter().all(|r| rho.iter().all(|s| (0..n).all(|x| r[s[x]] == s[r[x]])))
        && rho
            .iter()
            .all(|r| (0..n).all(|x| (0..n).all(|y| r[base.op(x, y)] == base.op(x, r[y]))));
    if !ckl {
        return OperationClass::Kl;
    }
    let hilbert = rb.is_hilbert && ra.is_hilbert && rho.iter().all(|r| (0..n).all(|x| r[r[x]] == r[x]));
    if hilbert {
        OperationClass::Hilbert
    } else {
        OperationClass::Ckl
    }
}

/// The class of the operation, or `None` when it is not an operation.
pub fn is_operation(base: &AlgebraTable, actor: &AlgebraTable, rho: &[Vec<usize>]) -> Option<OperationClass> {
    if l_algebra_violation(base).is_some() || l_algebra_violation(actor).is_some() {
        return None;
    }
    if rho.len() != actor.size() || rho.iter().any(|r| r.len() != base.size() || r.iter().any(|&v| v >= base.size())) {
        return None;
    }
    match operation_violation(base, actor, rho) {
        None => Some(operation_class(base, actor, rho)),
        Some(_) => None,
    }
}

/// Default cap on component sizes for [`enumerate_operations`].
pub const DEFAULT_OPERATION_LIMIT: usize = 6;

/// Every operation of `actor` on `base` of class at least `min_class`, in
/// lexicographic order of the `rho` arrays.
pub fn enumerate_operations(
    base: &AlgebraTable,
    actor: &AlgebraTable,
    min_class: OperationClass,
    limit: usize,
) -> Result<Vec<ActionMap>> {
    require_l(base)?;
    require_l(actor)?;
    for t in [base, actor] {
        if t.size() > limit {
            return Err(LalgError::TooLarge { n: t.size(), max: limit });
        }
    }
    let ends = homomorphisms(base, base);
    let m = actor.size();
    let id = ends
        .iter()
        .position(|e| e.iter().enumerate().all(|(x, &v)| x == v))
        .expect("identity is an endomorphism");
    let mut choice = vec![id; m];
    let mut out = Vec::new();
    let search = OperationSearch {
        base,
        actor,
        ends: &ends,
        flags: (ClassFlags::of(base), ClassFlags::of(actor)),
        min_class,
    };
    search.assign(&mut choice, 1, &mut out);
    Ok(out)
}

/// Fixed data of the backtracking search in [`enumerate_operations`].
struct OperationSearch<'a> {
    base: &'a AlgebraTable,
    actor: &'a AlgebraTable,
    ends: &'a [Vec<usize>],
    flags: (ClassFlags, ClassFlags),
    min_class: OperationClass,
}

impl OperationSearch<'_> {
    fn assign(&self, choice: &mut Vec<usize>, k: usize, out: &mut Vec<ActionMap>) {
        let OperationSearch { base, actor, ends, flags, min_class } = *self;
        let m = choice.len();
        if k == m {
            let rho: Vec<Vec<usize>> = choice.iter().map(|&c| ends[c].clone()).collect();
            let class = class_with(base, &rho, flags.0, flags.1);
            if class >= min_class {
                out.push(ActionMap {
                    base: base.clone(),
                    actor: actor.clone(),
                    rho,
                    class,
                });
            }
            return;
        }
        let n = base.size();
        for c in 0..ends.len() {
            choice[k] = c;
            let r = |u: usize| &ends[choice[u]];
            // pairs whose four maps became assigned at this level
            let ok = (0..=k).all(|a| {
                (0..=k).all(|b| {
                    let (ab, ba) = (actor.op(a, b), actor.op(b, a));
                    ab > k
                        || ba > k
                        || a.max(b).max(ab).max(ba) < k
                        || (0..n).all(|x| r(ab)[r(a)[x]] == r(ba)[r(b)[x]])
                })
            });
            if ok {
                self.assign(choice, k + 1, out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductKind {
    Semidirect,
    Symmetric,
}

/// A semidirect or symmetric semidirect product with its carrier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductAlgebra {
    pub kind: ProductKind,
    pub action: ActionMap,
    /// `carrier[i] = (x, u)`.
    pub carrier: Vec<(usize, usize)>,
    pub algebra: AlgebraTable,
    /// Position of `(x, u)` at `x·|Y| + u`, if it lies in the carrier.
    pub pair_index: Vec<Option<usize>>,
}

impl ProductAlgebra {
    pub fn index(&self, x: usize, u: usize) -> Option<usize> {
        self.pair_index[x * self.action.actor.size() + u]
    }

    /// `{(x, u) ∈ carrier | x ∈ i, u ∈ v}`.
    pub fn pair_set(&self, i: &ElemSet, v: &ElemSet) -> ElemSet {
        (0..self.carrier.len())
            .filter(|&p| {
                let (x, u) = self.carrier[p];
                i.contains(x) && v.contains(u)
            })
            .collect()
    }

    /// `(K_X, K_Y) = ({x | (x,1) ∈ K}, {u | (1,u) ∈ K})`.
    pub fn components(&self, k: &ElemSet) -> (ElemSet, ElemSet) {
        let kx = (0..self.action.base.size())
            .filter(|&x| self.index(x, 0).is_some_and(|p| k.contains(p)))
            .collect();
        let ky = (0..self.action.actor.size())
            .filter(|&u| self.index(0, u).is_some_and(|p| k.contains(p)))
            .collect();
        (kx, ky)
    }
}

/// The pair operation `(x,u)·(y,v)`.
pub fn pair_op(a: &ActionMap, (x, u): (usize, usize), (y, v): (usize, usize)) -> (usize, usize) {
    let (uv, vu) = (a.actor.op(u, v), a.actor.op(v, u));
    (a.base.op(a.rho[uv][x], a.rho[vu][y]), uv)
}

fn build(action: &ActionMap, kind: ProductKind, keep: impl Fn(usize, usize) -> bool) -> Result<ProductAlgebra> {
    let (n, m) = (action.base.size(), action.actor.size());
    if n * m > MAX_SET_ELEMS {
        return Err(LalgError::TooLarge {
            n: n * m,
            max: MAX_SET_ELEMS,
        });
    }
    let mut carrier = Vec::new();
    let mut pair_index = vec![None; n * m];
    for x in 0..n {
        for u in 0..m {
            if keep(x, u) {
                pair_index[x * m + u] = Some(carrier.len());
                carrier.push((x, u));
            }
        }
    }
    let k = carrier.len();
    let mut cells = Vec::with_capacity(k * k);
    for &a in &carrier {
        for &b in &carrier {
            let (z, w) = pair_op(action, a, b);
            let p = pair_index[z * m + w].ok_or_else(|| {
                LalgError::falsified(
                    "symmetric product is closed",
                    format!("{a:?}·{b:?} = {:?} leaves the carrier", (z, w)),
                )
            })?;
            cells.push(p);
        }
    }
    let algebra = AlgebraTable::from_cells_unchecked(k, cells);
    if let Some(w) = l_algebra_violation(&algebra) {
        return Err(LalgError::falsified(
            "product is an L-algebra",
            format!("{} fails at {:?}", w.axiom, w.elements),
        ));
    }
    Ok(ProductAlgebra {
        kind,
        action: action.clone(),
        carrier,
        algebra,
        pair_index,
    })
}

/// `X ⋊_ρ Y`. Also confirms that the product is KL exactly when both
/// components are KL and `x·ρ_u(x) = 1`.
pub fn semidirect(action: &ActionMap) -> Result<ProductAlgebra> {
    if let Some(msg) = operation_violation(&action.base, &action.actor, &action.rho) {
        return Err(LalgError::ActionInvalid(msg));
    }
    let p = build(action, ProductKind::Semidirect, |_, _| true)?;
    let predicted = find_violation(&action.base, Axiom::Kl).is_none()
        && find_violation(&action.actor, Axiom::Kl).is_none()
        && (0..action.base.size())
            .all(|x| action.rho.iter().all(|r| action.base.op(x, r[x]) == 0));
    let actual = find_violation(&p.algebra, Axiom::Kl).is_none();
    if predicted != actual {
        return Err(LalgError::falsified(
            "semidirect product is KL iff the operation is KL",
            format!("predicted {predicted}, product KL = {actual}"),
        ));
    }
    Ok(p)
}

/// `X ∝_ρ Y = {(x,u) | ρ_u(x) = x}` for operations of class CKL or stronger.
/// The result is checked to be CKL, and Hilbert when the operation is.
pub fn symmetric_semidirect(action: &ActionMap) -> Result<ProductAlgebra> {
    if action.class < OperationClass::Ckl {
        return Err(LalgError::ActionClassTooWeak {
            required: OperationClass::Ckl.to_string(),
            actual: action.class.to_string(),
        });
    }
    let p = build(action, ProductKind::Symmetric, |x, u| action.rho[u][x] == x)?;
    let r = validate(&p.algebra);
    let want_hilbert = action.class == OperationClass::Hilbert;
    if !r.is_ckl || (want_hilbert && !r.is_hilbert) {
        return Err(LalgError::falsified(
            "symmetric product class",
            format!("ckl = {}, hilbert = {} for a {} operation", r.is_ckl, r.is_hilbert, action.class),
        ));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{semidirect_example_action, three_element_example};
    use crate::families::{make_a, make_lh};
    use crate::order::downset;

    /// Every assignment of arbitrary self-maps, filtered by the definition.
    fn brute_force_operations(x: &AlgebraTable, y: &AlgebraTable) -> Vec<Vec<Vec<usize>>> {
        let n = x.size();
        let maps: Vec<Vec<usize>> = (0..n.pow(n as u32))
            .map(|mut c| {
                let mut m = vec![0; n];
                for slot in m.iter_mut().rev() {
                    *slot = c % n;
                    c /= n;
                }
                m
            })
            .collect();
        let m = y.size();
        let mut out = Vec::new();
        let mut idx = vec![0usize; m];
        loop {
            let rho: Vec<Vec<usize>> = idx.iter().map(|&i| maps[i].clone()).collect();
            if is_operation(x, y, &rho).is_some() {
                out.push(rho);
            }
            let mut k = m;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < maps.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    #[test]
    fn example_action_is_valid() {
        let a = semidirect_example_action();
        let p = semidirect(&a).unwrap();
        let (one, u, x) = (p.index(0, 0).unwrap(), p.index(0, 1).unwrap(), p.index(1, 0).unwrap());
        assert_eq!(p.algebra.op(u, x), one);
        assert_eq!(p.algebra.size(), 6);
    }

    #[test]
    fn self_action_and_trivial_action() {
        for t in [three_element_example(), make_a(3).unwrap(), make_lh(3).unwrap()] {
            assert_eq!(ActionMap::self_action(t.clone()).is_ok(), validate(&t).is_hilbert);
            let triv = ActionMap::trivial(t.clone(), make_a(2).unwrap()).unwrap();
            let p = semidirect(&triv).unwrap();
            // direct product: componentwise
            for (i, &(x, u)) in p.carrier.iter().enumerate() {
                for (j, &(y, v)) in p.carrier.iter().enumerate() {
                    assert_eq!(p.carrier[p.algebra.op(i, j)], (t.op(x, y), triv.actor.op(u, v)));
                }
            }
            let s = symmetric_semidirect(&triv);
            if triv.class >= OperationClass::Ckl {
                assert_eq!(s.unwrap().algebra, p.algebra);
            }
        }
    }

    #[test]
    fn operations_match_brute_force() {
        let cases = [
            (three_element_example(), make_a(2).unwrap()),
            (make_a(3).unwrap(), make_a(3).unwrap()),
            (make_lh(3).unwrap(), three_element_example()),
        ];
        for (x, y) in cases {
            let fast: Vec<_> = enumerate_operations(&x, &y, OperationClass::L, 6)
                .unwrap()
                .into_iter()
                .map(|a| a.rho)
                .collect();
            assert_eq!(fast, brute_force_operations(&x, &y));
        }
        use crate::families::{enumerate, ClassFilter, EnumerationTask};
        for m in 1..=4 {
            for y in enumerate(&EnumerationTask::new(m, ClassFilter::L)).unwrap() {
                let mut bases = vec![make_a(2).unwrap()];
                if m <= 3 {
                    bases.push(three_element_example());
                }
                for x in bases {
                    let fast: Vec<_> = enumerate_operations(&x, &y, OperationClass::L, 6)
                        .unwrap()
                        .into_iter()
                        .map(|a| a.rho)
                        .collect();
                    assert_eq!(fast, brute_force_operations(&x, &y), "{y:?}");
                }
            }
        }
    }

    #[test]
    fn downset_of_actor_generator() {
        let a = semidirect_example_action();
        let p = semidirect(&a).unwrap();
        let d = downset(&p.algebra, p.index(0, 1).unwrap()).unwrap();
        let expect = p.pair_set(&a.base.all(), &downset(&a.actor, 1).unwrap());
        assert_eq!(d, expect);
    }

    #[test]
    fn symmetric_needs_ckl_operation() {
        let a = ActionMap::trivial(make_a(3).unwrap(), make_a(2).unwrap()).unwrap();
        assert_eq!(a.class, OperationClass::Ckl);
        let bad = ActionMap::trivial(crate::examples::seven_element_ckl(), make_lh(3).unwrap()).unwrap();
        assert!(bad.class >= OperationClass::Ckl);
        let l_only = enumerate_operations(&make_a(3).unwrap(), &make_a(3).unwrap(), OperationClass::L, 6)
            .unwrap()
            .into_iter()
            .find(|a| a.class == OperationClass::L);
        if let Some(a) = l_only {
            assert!(matches!(symmetric_semidirect(&a), Err(LalgError::ActionClassTooWeak { .. })));
        }
    }

    #[test]
    fn action_file_round_trip() {
        let a = semidirect_example_action();
        let back = ActionMap::parse(&a.to_text()).unwrap();
        assert_eq!(back.rho, a.rho);
        assert_eq!(back.base, a.base);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(ActionMap::parse(&json).unwrap().rho, a.rho);
    }
}
