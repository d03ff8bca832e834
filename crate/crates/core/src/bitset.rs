//! Fixed-capacity element sets.

use std::cmp::Ordering;
use std::fmt;

const WORDS: usize = 4;

/// Largest algebra whose subsets fit in an [`ElemSet`].
pub const MAX_SET_ELEMS: usize = 64 * WORDS;

/// A set of element indices below [`MAX_SET_ELEMS`], stored as a bitmask.
///
/// Ordering compares the masks as unsigned integers (highest element first).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElemSet([u64; WORDS]);

impl ElemSet {
    pub const fn empty() -> Self {
        ElemSet([0; WORDS])
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SET_ELEMS);
        let mut s = ElemSet::empty();
        for w in 0..WORDS {
            let lo = w * 64;
            if n >= lo + 64 {
                s.0[w] = u64::MAX;
            } else if n > lo {
                s.0[w] = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(x: usize) -> Self {
        let mut s = ElemSet::empty();
        s.insert(x);
        s
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < MAX_SET_ELEMS && self.0[x >> 6] & (1u64 << (x & 63)) != 0
    }

    /// Returns `true` if `x` was newly inserted.
    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < MAX_SET_ELEMS, "element {x} exceeds set capacity");
        let bit = 1u64 << (x & 63);
        let was = self.0[x >> 6] & bit != 0;
        self.0[x >> 6] |= bit;
        !was
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        if x < MAX_SET_ELEMS {
            self.0[x >> 6] &= !(1u64 << (x & 63));
        }
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for w in 0..WORDS {
            out.0[w] |= other.0[w];
        }
        out
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for w in 0..WORDS {
            out.0[w] &= other.0[w];
        }
        out
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut out = *self;
        for w in 0..WORDS {
            out.0[w] &= !other.0[w];
        }
        out
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        (0..WORDS).all(|w| self.0[w] & !other.0[w] == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..WORDS).flat_map(move |w| {
            let mut word = self.0[w];
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + bit)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElemSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for w in (0..WORDS).rev() {
            match self.0[w].cmp(&other.0[w]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl serde::Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for ElemSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_SET_ELEMS) {
            return Err(serde::de::Error::custom(format!("element {bad} too large")));
        }
        Ok(v.into_iter().collect())
    }
}
