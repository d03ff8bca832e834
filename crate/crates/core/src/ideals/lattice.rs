use serde::{Deserialize, Serialize};

use super::{close, ideal_sets, ideal_sets_from, principal_ideals, quotient::congruence_classes};
use crate::bitset::ElemSet;
use crate::classify::{l_algebra_violation, require_l};
use crate::error::{LalgError, Result};
use crate::table::AlgebraTable;

/// All ideals of an algebra with the ideal product `I·J = {x | ⟨x⟩ ∩ I ⊆ J}`.
///
/// `ideals` is sorted by cardinality then bitmask, so `ideals[0] = {1}` and
/// the last entry is the whole algebra. `product[i][j]` and `join[i][j]` are
/// indices into `ideals`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealLattice {
    #[serde(skip_serializing)]
    pub parent: AlgebraTable,
    pub ideals: Vec<ElemSet>,
    /// `⟨x⟩` for each element `x`.
    pub principal: Vec<ElemSet>,
    pub product: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    /// `inclusion[i][j]` iff `ideals[i] ⊆ ideals[j]`.
    pub inclusion: Vec<Vec<bool>>,
}

impl IdealLattice {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn index_of(&self, s: &ElemSet) -> Option<usize> {
        self.ideals.iter().position(|i| i == s)
    }

    pub fn whole(&self) -> usize {
        self.ideals.len() - 1
    }

    fn require(&self, s: &ElemSet) -> Result<usize> {
        self.index_of(s)
            .ok_or_else(|| LalgError::NotAnIdeal(format!("{s:?}")))
    }

    /// `I·J` computed from the definition.
    pub fn ideal_product(&self, i: &ElemSet, j: &ElemSet) -> Result<ElemSet> {
        self.require(i)?;
        self.require(j)?;
        Ok(product_set(&self.principal, i, j))
    }

    /// `I ∩ J`, which is again an ideal.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        let m = self.ideals[i].intersection(&self.ideals[j]);
        self.index_of(&m).expect("ideals are closed under intersection")
    }

    /// The ideal lattice as an L-algebra with unit `X`: index 0 is the whole
    /// algebra, followed by the remaining ideals in list order. The returned
    /// vector maps table index to ideal index.
    pub fn as_algebra(&self) -> (AlgebraTable, Vec<usize>) {
        let k = self.len();
        let whole = self.whole();
        let order: Vec<usize> = std::iter::once(whole).chain(0..whole).collect();
        let mut pos = vec![0; k];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let cells = (0..k * k)
            .map(|c| pos[self.product[order[c / k]][order[c % k]]])
            .collect();
        (AlgebraTable::from_cells_unchecked(k, cells), order)
    }

    /// Checks the structural facts every ideal lattice must satisfy:
    /// products are ideals with `(I·J) ∩ I ⊆ J` and the maximality property,
    /// the lattice is distributive, and the product is an L-algebra.
    pub fn verify(&self) -> Result<()> {
        let k = self.len();
        for a in 0..k {
            for b in 0..k {
                let p = &self.ideals[self.product[a][b]];
                if !p.intersection(&self.ideals[a]).is_subset(&self.ideals[b]) {
                    return Err(LalgError::falsified(
                        "ideal product",
                        format!("(I·J) ∩ I ⊄ J for I = {:?}, J = {:?}", self.ideals[a], self.ideals[b]),
                    ));
                }
                for c in 0..k {
                    let kk = &self.ideals[c];
                    if kk.intersection(&self.ideals[a]).is_subset(&self.ideals[b]) && !kk.is_subset(p) {
                        return Err(LalgError::falsified(
                            "ideal product maximality",
                            format!("K = {kk:?} not below I·J = {p:?}"),
                        ));
                    }
                }
            }
        }
        if let Some((a, b, c)) = self.distributivity_violation() {
            return Err(LalgError::falsified(
                "distributive ideal lattice",
                format!(
                    "I ∧ (J ∨ K) ≠ (I ∧ J) ∨ (I ∧ K) for {:?}, {:?}, {:?}",
                    self.ideals[a], self.ideals[b], self.ideals[c]
                ),
            ));
        }
        let (alg, _) = self.as_algebra();
        if let Some(w) = l_algebra_violation(&alg) {
            return Err(LalgError::falsified(
                "ideal L-algebra",
                format!("{} fails at {:?}", w.axiom, w.elements),
            ));
        }
        Ok(())
    }

    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let k = self.len();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let lhs = self.meet(a, self.join[b][c]);
                    let rhs = self.join[self.meet(a, b)][self.meet(a, c)];
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

fn product_set(principal: &[ElemSet], i: &ElemSet, j: &ElemSet) -> ElemSet {
    (0..principal.len())
        .filter(|&x| principal[x].intersection(i).is_subset(j))
        .collect()
}

/// Builds the ideal lattice and verifies it (see [`IdealLattice::verify`]).
pub fn all_ideals(t: &AlgebraTable) -> Result<IdealLattice> {
    let lattice = build_lattice(t)?;
    lattice.verify()?;
    Ok(lattice)
}

pub(crate) fn build_lattice(t: &AlgebraTable) -> Result<IdealLattice> {
    require_l(t)?;
    let principal = principal_ideals(t);
    let ideals = ideal_sets_from(t, &principal);
    let k = ideals.len();
    let index_of = |s: &ElemSet| ideals.iter().position(|i| i == s);

    let mut product = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            let p = product_set(&principal, &ideals[a], &ideals[b]);
            product[a][b] = index_of(&p).ok_or_else(|| {
                LalgError::falsified("ideal product", format!("{p:?} is not an ideal"))
            })?;
        }
    }
    let inclusion: Vec<Vec<bool>> = (0..k)
        .map(|a| (0..k).map(|b| ideals[a].is_subset(&ideals[b])).collect())
        .collect();
    // least upper bound: the intersection of all common upper bounds
    let mut join = vec![vec![0; k]; k];
    for a in 0..k {
        for b in 0..k {
            let ub = (0..k)
                .filter(|&c| inclusion[a][c] && inclusion[b][c])
                .fold(t.all(), |acc, c| acc.intersection(&ideals[c]));
            join[a][b] = index_of(&ub).expect("intersection of ideals is an ideal");
        }
    }
    Ok(IdealLattice {
        parent: t.clone(),
        ideals,
        principal,
        product,
        join,
        inclusion,
    })
}

/// `I ∨ J` as the ideal generated by `I ∪ J`.
pub fn ideal_join(lattice: &IdealLattice, i: &ElemSet, j: &ElemSet) -> Result<ElemSet> {
    lattice.require(i)?;
    lattice.require(j)?;
    Ok(close(&lattice.parent, i.union(j)))
}

/// Checks that `y ∈ I ∨ J` exactly when some `x ∈ I` is congruent to `y`
/// modulo `J`. Fails with `CongruenceUndefined` when the relation modulo `J`
/// is not a congruence.
pub fn verify_join_membership(lattice: &IdealLattice, i: &ElemSet, j: &ElemSet) -> Result<bool> {
    let join = ideal_join(lattice, i, j)?;
    let t = &lattice.parent;
    let (class_of, _) = congruence_classes(t, j)?;
    Ok((0..t.size()).all(|y| join.contains(y) == i.iter().any(|x| class_of[x] == class_of[y])))
}

/// A proper ideal `P` is prime when every ideal `I` satisfies `I ⊆ P` or
/// `I·P ⊆ P`.
pub fn is_prime_ideal(lattice: &IdealLattice, p: &ElemSet) -> Result<bool> {
    let pi = lattice.require(p)?;
    if pi == lattice.whole() {
        return Err(LalgError::NotProper);
    }
    Ok((0..lattice.len()).all(|i| lattice.inclusion[i][pi] || lattice.inclusion[lattice.product[i][pi]][pi]))
}

/// Primality through meets: `I₁ ∩ I₂ ⊆ P` forces `I₁ ⊆ P` or `I₂ ⊆ P`.
pub fn is_meet_prime(lattice: &IdealLattice, p: &ElemSet) -> Result<bool> {
    let pi = lattice.require(p)?;
    if pi == lattice.whole() {
        return Err(LalgError::NotProper);
    }
    let k = lattice.len();
    Ok((0..k).all(|a| {
        (0..k).all(|b| {
            !lattice.inclusion[lattice.meet(a, b)][pi] || lattice.inclusion[a][pi] || lattice.inclusion[b][pi]
        })
    }))
}

/// Prime ideals with the open-set basis `𝒰_I = {P | I ⊄ P}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub primes: Vec<ElemSet>,
    /// Lattice index of each prime.
    pub prime_indices: Vec<usize>,
    /// For each ideal (by lattice index), the primes (by position in
    /// `primes`) not containing it.
    pub basis: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

pub fn spectrum(t: &AlgebraTable) -> Result<Spectrum> {
    spectrum_of(&all_ideals(t)?)
}

pub(crate) fn spectrum_of(lattice: &IdealLattice) -> Result<Spectrum> {
    let mut prime_indices = Vec::new();
    for (idx, ideal) in lattice.ideals.iter().enumerate() {
        if idx != lattice.whole() && is_prime_ideal(lattice, ideal)? {
            prime_indices.push(idx);
        }
    }
    let primes = prime_indices.iter().map(|&i| lattice.ideals[i]).collect();
    let basis = (0..lattice.len())
        .map(|i| {
            (0..prime_indices.len())
                .filter(|&p| !lattice.inclusion[i][prime_indices[p]])
                .collect()
        })
        .collect();
    Ok(Spectrum {
        primes,
        prime_indices,
        basis,
    })
}

/// Exactly two ideals and at least two elements.
pub fn is_simple(t: &AlgebraTable) -> bool {
    l_algebra_violation(t).is_none() && t.size() >= 2 && ideal_sets(t).len() == 2
}
