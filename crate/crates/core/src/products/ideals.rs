//! Ideals of semidirect products in terms of their components.

use serde::{Deserialize, Serialize};

use super::{semidirect, symmetric_semidirect, ActionMap, OperationClass, ProductAlgebra, ProductKind};
use crate::bitset::ElemSet;
use crate::error::{LalgError, Result};
use crate::ideals::{
    build_lattice, generated_ideal, ideal_join, ideal_sets, ideal_violation, is_prime_ideal, quotient, IdealLattice,
    QuotientResult,
};
use crate::morphism::is_morphism;
use crate::table::AlgebraTable;

fn require_ideal(t: &AlgebraTable, s: &ElemSet) -> Result<()> {
    t.check_set(s)?;
    match ideal_violation(t, s) {
        None => Ok(()),
        Some(v) => Err(LalgError::NotAnIdeal(format!("{s:?}: {:?} fails at {:?}", v.condition, v.elements))),
    }
}

/// Splits an ideal `K` of a product into `(K_X, K_Y)` and checks that both
/// are ideals and that `K = K_X ⋊ K_Y` as sets.
pub fn project_ideal(p: &ProductAlgebra, k: &ElemSet) -> Result<(ElemSet, ElemSet)> {
    require_ideal(&p.algebra, k)?;
    let (kx, ky) = p.components(k);
    if ideal_violation(&p.action.base, &kx).is_some() || ideal_violation(&p.action.actor, &ky).is_some() {
        return Err(LalgError::falsified(
            "components of an ideal are ideals",
            format!("K = {k:?} gives K_X = {kx:?}, K_Y = {ky:?}"),
        ));
    }
    if p.pair_set(&kx, &ky) != *k {
        return Err(LalgError::falsified(
            "ideal splits as K_X ⋊ K_Y",
            format!("K = {k:?}, K_X = {kx:?}, K_Y = {ky:?}"),
        ));
    }
    Ok((kx, ky))
}

/// Result of testing (I'1) and (I'2) for a pair of component ideals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    /// `(v, x)` with `x ∈ I` and `ρ_v(x) ∉ I`.
    pub i1_witness: Option<(usize, usize)>,
    /// `(u, x, y)` with `u ∈ U`, `x ∈ I` and one of the two products outside `I`.
    pub i2_witness: Option<(usize, usize, usize)>,
    /// Whether `I ⋊ U` is an ideal of the product, by direct check.
    pub is_ideal: bool,
}

impl PairCheck {
    pub fn holds(&self) -> bool {
        self.i1_witness.is_none() && self.i2_witness.is_none()
    }
}

/// (I'1) `ρ_v(I) ⊆ I` for all `v`.
pub fn i1_witness(a: &ActionMap, i: &ElemSet) -> Option<(usize, usize)> {
    (0..a.actor.size())
        .flat_map(|v| i.iter().map(move |x| (v, x)))
        .find(|&(v, x)| !i.contains(a.rho[v][x]))
}

/// (I'2) `(x·ρ_u(y))·y ∈ I` and `y·(x·ρ_u(y)) ∈ I` for `u ∈ U`, `x ∈ I`.
pub fn i2_witness(a: &ActionMap, i: &ElemSet, u_set: &ElemSet) -> Option<(usize, usize, usize)> {
    let t = &a.base;
    for u in u_set.iter() {
        for x in i.iter() {
            for y in 0..t.size() {
                let w = t.op(x, a.rho[u][y]);
                if !i.contains(t.op(w, y)) || !i.contains(t.op(y, w)) {
                    return Some((u, x, y));
                }
            }
        }
    }
    None
}

/// Tests (I'1) and (I'2) for ideals `I` of `X` and `U` of `Y`, and confirms
/// that they hold exactly when `I ⋊ U` is an ideal of the semidirect product.
pub fn check_pair_conditions(p: &ProductAlgebra, i: &ElemSet, u: &ElemSet) -> Result<PairCheck> {
    let a = &p.action;
    require_ideal(&a.base, i)?;
    require_ideal(&a.actor, u)?;
    let check = PairCheck {
        i1_witness: i1_witness(a, i),
        i2_witness: i2_witness(a, i, u),
        is_ideal: ideal_violation(&p.algebra, &p.pair_set(i, u)).is_none(),
    };
    if check.holds() != check.is_ideal {
        return Err(LalgError::falsified(
            "I ⋊ U is an ideal iff (I'1) and (I'2)",
            format!("I = {i:?}, U = {u:?}: conditions {}, ideal {}", check.holds(), check.is_ideal),
        ));
    }
    Ok(check)
}

/// Ideals of `X` stable under every `ρ_v`, in lattice order. Closure under
/// intersection and join is checked.
pub fn rho_ideals(a: &ActionMap) -> Result<Vec<ElemSet>> {
    let lattice = build_lattice(&a.base)?;
    rho_ideals_in(a, &lattice)
}

pub(crate) fn rho_ideals_in(a: &ActionMap, lattice: &IdealLattice) -> Result<Vec<ElemSet>> {
    let out: Vec<ElemSet> = lattice.ideals.iter().copied().filter(|i| i1_witness(a, i).is_none()).collect();
    for i in &out {
        for j in &out {
            let meet = i.intersection(j);
            let join = ideal_join(lattice, i, j)?;
            if !out.contains(&meet) || !out.contains(&join) {
                return Err(LalgError::falsified(
                    "ρ-ideals form a sublattice",
                    format!("{i:?} and {j:?}"),
                ));
            }
        }
    }
    Ok(out)
}

fn require_rho_ideal(a: &ActionMap, i: &ElemSet) -> Result<()> {
    require_ideal(&a.base, i)?;
    if i1_witness(a, i).is_some() {
        return Err(LalgError::NotRhoIdeal);
    }
    Ok(())
}

/// A proper ρ-ideal `I` such that `I₁ ∩ I₂ ⊆ I` forces `I₁ ⊆ I` or `I₂ ⊆ I`
/// for all ρ-ideals `I₁, I₂`.
pub fn is_rho_prime(a: &ActionMap, i: &ElemSet) -> Result<bool> {
    require_rho_ideal(a, i)?;
    if *i == a.base.all() {
        return Err(LalgError::NotProper);
    }
    let rho = rho_ideals(a)?;
    Ok(rho_prime_among(&rho, i))
}

fn rho_prime_among(rho: &[ElemSet], i: &ElemSet) -> bool {
    rho.iter().all(|a| {
        rho.iter()
            .all(|b| !a.intersection(b).is_subset(i) || a.is_subset(i) || b.is_subset(i))
    })
}

pub fn rho_spectrum(a: &ActionMap) -> Result<Vec<ElemSet>> {
    let rho = rho_ideals(a)?;
    let whole = a.base.all();
    Ok(rho.iter().copied().filter(|i| *i != whole && rho_prime_among(&rho, i)).collect())
}

/// `ker(ρ^I) = {u | ρ_u(x) ≡ x (mod I) for all x}`, checked to be an ideal
/// of `Y`.
pub fn ker_rho_mod(a: &ActionMap, i: &ElemSet) -> Result<ElemSet> {
    require_rho_ideal(a, i)?;
    let q = quotient(&a.base, i)?;
    let cls = &q.projection.map;
    Ok((0..a.actor.size())
        .filter(|&u| (0..a.base.size()).all(|x| cls[a.rho[u][x]] == cls[x]))
        .collect())
}

/// Greatest ideal of `Y` inside `ker(ρ^I)`. It is the kernel itself whenever
/// the kernel is an ideal, which can fail when `Y` is not KL.
pub fn rho_kernel_ideal(a: &ActionMap, i: &ElemSet) -> Result<ElemSet> {
    let ker = ker_rho_mod(a, i)?;
    if ideal_violation(&a.actor, &ker).is_none() {
        return Ok(ker);
    }
    let inside: Vec<ElemSet> = ideal_sets(&a.actor).into_iter().filter(|u| u.is_subset(&ker)).collect();
    inside
        .iter()
        .copied()
        .find(|v| inside.iter().all(|u| u.is_subset(v)))
        .ok_or_else(|| LalgError::falsified("ideals inside ker(ρ^I) have a maximum", format!("I = {i:?}, kernel {ker:?}")))
}

/// ρ-ideals `I` whose kernel `ker(ρ^I)` is not an ideal of `Y`, with the kernel.
pub fn kernel_findings(a: &ActionMap) -> Result<Vec<(ElemSet, ElemSet)>> {
    let mut out = Vec::new();
    for i in rho_ideals(a)? {
        let ker = ker_rho_mod(a, &i)?;
        if ideal_violation(&a.actor, &ker).is_some() {
            out.push((i, ker));
        }
    }
    Ok(out)
}

/// The operation `ρ^I` of `Y` on `X/I` induced by a ρ-ideal.
pub fn induced_action(a: &ActionMap, i: &ElemSet) -> Result<(ActionMap, QuotientResult)> {
    require_rho_ideal(a, i)?;
    let q = quotient(&a.base, i)?;
    let cls = &q.projection.map;
    let reps: Vec<usize> = q.classes.iter().map(|c| c.first().expect("non-empty class")).collect();
    let mut rho = Vec::with_capacity(a.actor.size());
    for r in &a.rho {
        for x in 0..a.base.size() {
            if cls[r[x]] != cls[r[reps[cls[x]]]] {
                return Err(LalgError::ActionInvalid(format!("ρ does not respect congruence mod {i:?}")));
            }
        }
        rho.push(reps.iter().map(|&x| cls[r[x]]).collect());
    }
    Ok((ActionMap::new(q.quotient.clone(), a.actor.clone(), rho)?, q))
}

/// Checks collected by a report; empty means every statement held.
pub type Failures = Vec<String>;

/// How a prime of `X ⋊ Y` arises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeShape {
    /// `X ⋊ Q` with `Q` prime in `Y`.
    Actor(ElemSet),
    /// `P ⋊ ker(ρ^P)` with `P` ρ-prime in `X`.
    Base(ElemSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDecomposition {
    pub product_primes: Vec<ElemSet>,
    pub shapes: Vec<PrimeShape>,
    pub rho_spectrum: Vec<ElemSet>,
    pub actor_spectrum: Vec<ElemSet>,
    pub open_map: bool,
    pub failures: Failures,
}

impl SpecDecomposition {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Computes `Spec(X ⋊ Y)` directly and compares it with
/// `ρSpec(X) ⊔ Spec(Y)`: prime shapes, both directions of the
/// correspondence, the cardinality, and openness of the correspondence for
/// the basic open sets (with the subspace basis on `ρSpec(X)`).
pub fn spec_decomposition(a: &ActionMap) -> Result<SpecDecomposition> {
    let p = semidirect(a)?;
    let pl = build_lattice(&p.algebra)?;
    let xl = build_lattice(&a.base)?;
    let yl = build_lattice(&a.actor)?;
    let rho = rho_ideals_in(a, &xl)?;
    let whole_x = a.base.all();
    let rho_spec: Vec<ElemSet> = rho.iter().copied().filter(|i| *i != whole_x && rho_prime_among(&rho, i)).collect();
    let mut actor_spec = Vec::new();
    for q in &yl.ideals[..yl.len() - 1] {
        if is_prime_ideal(&yl, q)? {
            actor_spec.push(*q);
        }
    }
    let mut failures = Vec::new();
    let mut product_primes = Vec::new();
    let mut shapes = Vec::new();
    for k in &pl.ideals[..pl.len() - 1] {
        if !is_prime_ideal(&pl, k)? {
            continue;
        }
        product_primes.push(*k);
        let (kx, ky) = project_ideal(&p, k)?;
        if kx == whole_x && actor_spec.contains(&ky) {
            shapes.push(PrimeShape::Actor(ky));
        } else if rho_spec.contains(&kx) && ky == rho_kernel_ideal(a, &kx)? {
            shapes.push(PrimeShape::Base(kx));
        } else {
            failures.push(format!("prime {k:?} splits as ({kx:?}, {ky:?}), matching neither shape"));
        }
    }
    for q in &actor_spec {
        let k = p.pair_set(&whole_x, q);
        if !product_primes.contains(&k) {
            failures.push(format!("X ⋊ {q:?} is not prime"));
        }
    }
    for pr in &rho_spec {
        let k = p.pair_set(pr, &rho_kernel_ideal(a, pr)?);
        if !product_primes.contains(&k) {
            failures.push(format!("{pr:?} ⋊ ker is not prime"));
        }
    }
    if product_primes.len() != rho_spec.len() + actor_spec.len() {
        failures.push(format!(
            "|Spec(X ⋊ Y)| = {} but |ρSpec(X)| + |Spec(Y)| = {} + {}",
            product_primes.len(),
            rho_spec.len(),
            actor_spec.len()
        ));
    }

    // The correspondence as positions in rho_spec ++ actor_spec.
    let image: Vec<Option<usize>> = shapes
        .iter()
        .map(|s| match s {
            PrimeShape::Base(pr) => rho_spec.iter().position(|q| q == pr),
            PrimeShape::Actor(q) => actor_spec.iter().position(|r| r == q).map(|i| i + rho_spec.len()),
        })
        .collect();
    let total = rho_spec.len() + actor_spec.len();
    let as_set = |v: &[usize]| -> u128 { v.iter().fold(0u128, |acc, &i| acc | 1 << i) };
    // open sets of the disjoint union: unions of (𝒰_I ∩ ρSpec) and 𝒰_U
    let mut basis: Vec<u128> = Vec::new();
    for i in &xl.ideals {
        let s: Vec<usize> = (0..rho_spec.len()).filter(|&j| !i.is_subset(&rho_spec[j])).collect();
        basis.push(as_set(&s));
    }
    for u in &yl.ideals {
        let s: Vec<usize> = (0..actor_spec.len())
            .filter(|&j| !u.is_subset(&actor_spec[j]))
            .map(|j| j + rho_spec.len())
            .collect();
        basis.push(as_set(&s));
    }
    let is_open = |s: u128| basis.iter().filter(|&&b| b & !s == 0).fold(0u128, |acc, &b| acc | b) == s;
    let mut open_map = total <= 128 && image.iter().all(Option::is_some);
    if open_map {
        for k in &pl.ideals {
            let s: Vec<usize> = (0..product_primes.len())
                .filter(|&j| !k.is_subset(&product_primes[j]))
                .map(|j| image[j].expect("checked"))
                .collect();
            if !is_open(as_set(&s)) {
                open_map = false;
                failures.push(format!("image of 𝒰_K for K = {k:?} is not open"));
                break;
            }
        }
    } else {
        failures.push("correspondence undefined on some prime".into());
    }
    Ok(SpecDecomposition {
        product_primes,
        shapes,
        rho_spectrum: rho_spec,
        actor_spectrum: actor_spec,
        open_map,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealCountReport {
    pub product_ideals: usize,
    pub base_ideals: usize,
    pub actor_ideals: usize,
    pub is_direct_product: bool,
    /// `Σ_{I ∈ ρ𝒮(X)} |{U ∈ 𝒮(Y) | U ⊆ ker(ρ^I)}|`.
    pub sum_formula: usize,
    pub failures: Failures,
}

impl IdealCountReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both sides of `|𝒮(X ⋊ Y)| ≤ |𝒮(X)|·|𝒮(Y)|` (equality exactly for the
/// direct product) and of the exact sum over ρ-ideals.
pub fn ideal_count_formulas(a: &ActionMap) -> Result<IdealCountReport> {
    let p = semidirect(a)?;
    let product_ideals = ideal_sets(&p.algebra).len();
    let xl = build_lattice(&a.base)?;
    let ys = ideal_sets(&a.actor);
    let mut sum_formula = 0;
    for i in rho_ideals_in(a, &xl)? {
        let ker = ker_rho_mod(a, &i)?;
        sum_formula += ys.iter().filter(|u| u.is_subset(&ker)).count();
    }
    let (bx, by) = (xl.len(), ys.len());
    let is_direct_product = a.is_trivial();
    let mut failures = Vec::new();
    if product_ideals > bx * by {
        failures.push(format!("{product_ideals} > {bx}·{by}"));
    }
    if (product_ideals == bx * by) != is_direct_product {
        failures.push(format!(
            "equality {} but direct product {is_direct_product}",
            product_ideals == bx * by
        ));
    }
    if sum_formula != product_ideals {
        failures.push(format!("sum formula gives {sum_formula}, product has {product_ideals}"));
    }
    Ok(IdealCountReport {
        product_ideals,
        base_ideals: bx,
        actor_ideals: by,
        is_direct_product,
        sum_formula,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricBijectionReport {
    pub symmetric_ideals: usize,
    pub semidirect_ideals: usize,
    pub failures: Failures,
}

impl SymmetricBijectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `L ↦ L_X ⋊ L_Y` and `K ↦ K ∩ (X ∝ Y)` are inverse bijections
/// between the ideals of the symmetric and the full semidirect product.
pub fn symmetric_ideal_bijection(a: &ActionMap) -> Result<SymmetricBijectionReport> {
    let z = symmetric_semidirect(a)?;
    let s = semidirect(a)?;
    let zi = ideal_sets(&z.algebra);
    let si = ideal_sets(&s.algebra);
    let mut failures = Vec::new();
    // position in s of each carrier element of z
    let embed: Vec<usize> = z.carrier.iter().map(|&(x, u)| s.index(x, u).expect("full carrier")).collect();
    let restrict = |k: &ElemSet| -> ElemSet { (0..embed.len()).filter(|&j| k.contains(embed[j])).collect() };
    for l in &zi {
        let (lx, ly) = z.components(l);
        let tilde = s.pair_set(&lx, &ly);
        if !si.contains(&tilde) {
            failures.push(format!("L = {l:?}: L_X ⋊ L_Y = {tilde:?} is not an ideal"));
        } else if restrict(&tilde) != *l {
            failures.push(format!("L = {l:?} does not come back from L_X ⋊ L_Y"));
        }
    }
    for k in &si {
        let l = restrict(k);
        if !zi.contains(&l) {
            failures.push(format!("K ∩ (X ∝ Y) for K = {k:?} is not an ideal"));
            continue;
        }
        let (lx, ly) = z.components(&l);
        if s.pair_set(&lx, &ly) != *k {
            failures.push(format!("K = {k:?} does not come back from K ∩ (X ∝ Y)"));
        }
    }
    if zi.len() != si.len() {
        failures.push(format!("|𝒮(X ∝ Y)| = {} ≠ |𝒮(X ⋊ Y)| = {}", zi.len(), si.len()));
    }
    Ok(SymmetricBijectionReport {
        symmetric_ideals: zi.len(),
        semidirect_ideals: si.len(),
        failures,
    })
}

/// For a Hilbert operation of `A_2` on `X`: `|𝒮(X ∝ A_2)|` and
/// `|𝒮(X)| + |𝒮(X/I₀)|` with `I₀ = ker ρ_0`, where `0` is the bottom of `A_2`.
pub fn hilbert_a2_ideal_count(a: &ActionMap) -> Result<(usize, usize)> {
    if a.class < OperationClass::Hilbert || a.actor.size() != 2 {
        return Err(LalgError::ActionClassTooWeak {
            required: "Hilbert operation of A_2".into(),
            actual: format!("{} operation of a size-{} algebra", a.class, a.actor.size()),
        });
    }
    let z = symmetric_semidirect(a)?;
    let i0: ElemSet = (0..a.base.size()).filter(|&x| a.rho[1][x] == 0).collect();
    let q = quotient(&a.base, &i0)?;
    Ok((
        ideal_sets(&z.algebra).len(),
        ideal_sets(&a.base).len() + ideal_sets(&q.quotient).len(),
    ))
}

/// The four statements of the equivalence for a pair of component ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryCheck {
    /// `I ⋊ U` is an ideal.
    pub pair_is_ideal: bool,
    /// `ρ` induces `ρ̃: Y/U → End(X/I)` and `(x,u) ↦ ([x],[u])` is a
    /// surjective morphism onto `X/I ⋊ Y/U` with kernel `I ⋊ U`.
    pub quotient_product: bool,
    /// `ρ^I` exists and is the identity on `U`.
    pub trivial_on_u: bool,
    /// `ρ^I` exists and `{[1]} × U` is an ideal of `X/I ⋊ Y`.
    pub unit_times_u_ideal: bool,
}

impl CorollaryCheck {
    pub fn agree(&self) -> bool {
        let v = self.pair_is_ideal;
        self.quotient_product == v && self.trivial_on_u == v && self.unit_times_u_ideal == v
    }
}

pub fn corollary_equivalence(p: &ProductAlgebra, i: &ElemSet, u: &ElemSet) -> Result<CorollaryCheck> {
    let a = &p.action;
    require_ideal(&a.base, i)?;
    require_ideal(&a.actor, u)?;
    let side = BaseSide::new(a, i)?;
    let qy = quotient(&a.actor, u)?;
    pair_corollary(p, i, u, side.as_ref(), &qy)
}

/// [`corollary_equivalence`] for every pair of ideals `(I, U)`, in the order
/// of [`ideal_sets`] on `X` and then on `Y`.
pub fn corollary_equivalences(p: &ProductAlgebra) -> Result<Vec<((ElemSet, ElemSet), CorollaryCheck)>> {
    let a = &p.action;
    let ys: Vec<(ElemSet, QuotientResult)> = ideal_sets(&a.actor)
        .into_iter()
        .map(|u| Ok((u, quotient(&a.actor, &u)?)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in ideal_sets(&a.base) {
        let side = BaseSide::new(a, &i)?;
        for (u, qy) in &ys {
            out.push(((i, *u), pair_corollary(p, &i, u, side.as_ref(), qy)?));
        }
    }
    Ok(out)
}

/// What depends on `I` alone: `ρ^I` with `X/I` and `X/I ⋊ Y`.
struct BaseSide {
    induced: ActionMap,
    qx: QuotientResult,
    over_y: ProductAlgebra,
}

impl BaseSide {
    fn new(a: &ActionMap, i: &ElemSet) -> Result<Option<Self>> {
        if i1_witness(a, i).is_some() {
            return Ok(None);
        }
        let (induced, qx) = induced_action(a, i)?;
        let over_y = semidirect(&induced)?;
        Ok(Some(BaseSide { induced, qx, over_y }))
    }
}

fn pair_corollary(
    p: &ProductAlgebra,
    i: &ElemSet,
    u: &ElemSet,
    side: Option<&BaseSide>,
    qy: &QuotientResult,
) -> Result<CorollaryCheck> {
    let a = &p.action;
    let pair = p.pair_set(i, u);
    let pair_is_ideal = ideal_violation(&p.algebra, &pair).is_none();
    let (mut quotient_product, mut trivial_on_u, mut unit_times_u_ideal) = (false, false, false);
    if let Some(BaseSide { induced: ri, qx, over_y }) = side {
        trivial_on_u = u.iter().all(|v| ri.rho[v].iter().enumerate().all(|(c, &d)| c == d));
        unit_times_u_ideal = ideal_violation(&over_y.algebra, &over_y.pair_set(&ElemSet::singleton(0), u)).is_none();

        let cy = &qy.projection.map;
        let cx = &qx.projection.map;
        // ρ̃_[v] = ρ^I_v must not depend on the representative
        let mut tilde: Vec<Option<&Vec<usize>>> = vec![None; qy.quotient.size()];
        let mut well_defined = true;
        for v in 0..a.actor.size() {
            match tilde[cy[v]] {
                Some(r) if *r != ri.rho[v] => well_defined = false,
                Some(_) => {}
                None => tilde[cy[v]] = Some(&ri.rho[v]),
            }
        }
        if well_defined {
            let rho_t: Vec<Vec<usize>> = tilde.into_iter().map(|r| r.expect("every class hit").clone()).collect();
            if let Ok(at) = ActionMap::new(qx.quotient.clone(), qy.quotient.clone(), rho_t) {
                let target = semidirect(&at)?;
                let map: Vec<usize> = p
                    .carrier
                    .iter()
                    .map(|&(x, v)| target.index(cx[x], cy[v]).expect("full carrier"))
                    .collect();
                let kernel: ElemSet = (0..map.len()).filter(|&j| map[j] == 0).collect();
                let onto = {
                    let img: ElemSet = map.iter().copied().collect();
                    img == target.algebra.all()
                };
                quotient_product = is_morphism(&p.algebra, &target.algebra, &map) && onto && kernel == pair;
                if quotient_product && !factors_isomorphically(&p.algebra, &kernel, &map, &target.algebra)? {
                    return Err(LalgError::falsified("quotient of the product", format!("I = {i:?}, U = {u:?}")));
                }
            }
        }
    }
    Ok(CorollaryCheck {
        pair_is_ideal,
        quotient_product,
        trivial_on_u,
        unit_times_u_ideal,
    })
}

/// Whether `map` induces an isomorphism from `t / kernel` onto `target`.
fn factors_isomorphically(t: &AlgebraTable, kernel: &ElemSet, map: &[usize], target: &AlgebraTable) -> Result<bool> {
    let direct = quotient(t, kernel)?;
    let m = direct.quotient.size();
    if m != target.size() {
        return Ok(false);
    }
    let mut f = vec![usize::MAX; m];
    for (j, &c) in direct.projection.map.iter().enumerate() {
        if f[c] == usize::MAX {
            f[c] = map[j];
        } else if f[c] != map[j] {
            return Ok(false);
        }
    }
    let image: ElemSet = f.iter().copied().collect();
    Ok(image.len() == m && is_morphism(&direct.quotient, target, &f))
}

/// Identities relating a semidirect product to its components: downsets and
/// left multiplications of the generators, the factorisation
/// `(x,u) = (x,1)(1,u)` through `(1,u)·(x,u) = (x,1)`, generated ideals,
/// component bounds for ideal products, `(X ⋊ {1})·(I ⋊ U) = I ⋊ ker(ρ^I)`,
/// monotonicity of `ker(ρ^I)`, and the description of ρ-ideals.
pub fn semidirect_lemmas(a: &ActionMap) -> Result<Failures> {
    let p = semidirect(a)?;
    let (x_t, y_t, t) = (&a.base, &a.actor, &p.algebra);
    let (n, m) = (x_t.size(), y_t.size());
    let mut f = Vec::new();
    let ix = |x: usize, u: usize| x * m + u;

    for x in 0..n {
        for u in 0..m {
            let xu = ix(x, u);
            // ↓(x,u) = {(y,v) | v ≤ u, y ≤ ρ_{u·v}(x)}
            for y in 0..n {
                for v in 0..m {
                    let below = t.leq(ix(y, v), xu);
                    let expect = y_t.leq(v, u) && x_t.leq(y, a.rho[y_t.op(u, v)][x]);
                    if below != expect {
                        f.push(format!("downset of ({x},{u}) at ({y},{v})"));
                    }
                    if x == 0 && below && t.op(xu, ix(y, v)) != ix(y, y_t.op(u, v)) {
                        f.push(format!("σ_(1,{u}) at ({y},{v})"));
                    }
                    if u == 0 && below && t.op(xu, ix(y, v)) != ix(x_t.op(a.rho[v][x], y), v) {
                        f.push(format!("σ_({x},1) at ({y},{v})"));
                    }
                }
            }
            if t.op(ix(0, u), xu) != ix(x, 0) {
                f.push(format!("(1,{u})·({x},{u}) ≠ ({x},1)"));
            }
            // generated ideals
            let k = generated_ideal(t, &ElemSet::singleton(xu))?;
            let (kx, ky) = p.components(&k);
            let gu = generated_ideal(y_t, &ElemSet::singleton(u))?;
            let gx = generated_ideal(x_t, &ElemSet::singleton(x))?;
            if ky != gu || p.pair_set(&kx, &gu) != k || !gx.is_subset(&kx) {
                f.push(format!("generated ideal of ({x},{u})"));
            }
        }
    }

    let pl = build_lattice(t)?;
    let xl = build_lattice(x_t)?;
    let yl = build_lattice(y_t)?;
    let splits: Vec<(ElemSet, ElemSet)> = pl.ideals.iter().map(|k| p.components(k)).collect();
    for a_i in 0..pl.len() {
        for b_i in 0..pl.len() {
            let l = &pl.ideals[pl.product[a_i][b_i]];
            let (lx, ly) = p.components(l);
            let ((i, u), (j, v)) = (splits[a_i], splits[b_i]);
            if !lx.is_subset(&xl.ideal_product(&i, &j)?) || !ly.is_subset(&yl.ideal_product(&u, &v)?) {
                f.push(format!("component bound for {:?}·{:?}", pl.ideals[a_i], pl.ideals[b_i]));
            }
        }
    }
    let x1 = p.pair_set(&x_t.all(), &ElemSet::singleton(0));
    let rho = rho_ideals_in(a, &xl)?;
    for (k, &(i, u)) in pl.ideals.iter().zip(&splits) {
        let ker = ker_rho_mod(a, &i)?;
        if pl.ideal_product(&x1, k)? != p.pair_set(&i, &rho_kernel_ideal(a, &i)?) {
            f.push(format!("(X ⋊ 1)·({i:?} ⋊ {u:?}) ≠ I ⋊ V"));
        }
        if !u.is_subset(&ker) {
            f.push(format!("{u:?} ⊄ ker(ρ^I) for I = {i:?}"));
        }
    }
    for i in &rho {
        let ker_i = ker_rho_mod(a, i)?;
        for uu in &yl.ideals {
            if uu.is_subset(&ker_i) && ideal_violation(t, &p.pair_set(i, uu)).is_some() {
                f.push(format!("{i:?} ⋊ {uu:?} not an ideal below the kernel"));
            }
        }
        for j in &rho {
            if j.is_subset(i) && !ker_rho_mod(a, j)?.is_subset(&ker_i) {
                f.push(format!("ker(ρ^J) ⊄ ker(ρ^I) for J = {j:?} ⊆ I = {i:?}"));
            }
        }
    }
    let described: Vec<ElemSet> = xl
        .ideals
        .iter()
        .copied()
        .filter(|i| ideal_violation(t, &p.pair_set(i, &ElemSet::singleton(0))).is_none())
        .collect();
    if described != rho {
        f.push("ρ-ideals differ from {I | I ⋊ {1} is an ideal}".into());
    }
    if a.class >= OperationClass::Kl && rho != xl.ideals {
        f.push("KL operation with a non-stable ideal".into());
    }
    for pr in &xl.ideals[..xl.len() - 1] {
        if is_prime_ideal(&xl, pr)? && rho.contains(pr) && !rho_prime_among(&rho, pr) {
            f.push(format!("prime ρ-ideal {pr:?} is not ρ-prime"));
        }
    }
    Ok(f)
}

/// Whether the product is a semidirect one (as opposed to symmetric).
pub fn is_full_product(p: &ProductAlgebra) -> bool {
    p.kind == ProductKind::Semidirect
}
