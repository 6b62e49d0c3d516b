//! Index sets and the sign conventions used by all complexes in this crate.
//!
//! Basis elements of the complexes are labelled by subsets of `{1, ..., q}`
//! where `q` is the number of generators. Subsets are stored as 64-bit masks
//! (so `q <= 64`), ordered by their mask value; within a fixed cardinality
//! that is the colexicographic order, and it is the order in which bases are
//! listed everywhere.
//!
//! The sign functions encode the Koszul-style orientation on subsets: the
//! sign of a disjoint pair counts the transpositions needed to merge their
//! ascending sequences, and all differential and product formulas reduce to
//! them.

use std::fmt;

/// A subset of `{1, ..., 64}` stored as a bitmask (element `i` is bit `i-1`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(u64);

/// Largest admissible element of an [`IndexSet`].
pub const MAX_INDEX: usize = 64;

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    fn bit(element: usize) -> u64 {
        assert!(
            (1..=MAX_INDEX).contains(&element),
            "index {element} outside 1..=64"
        );
        1u64 << (element - 1)
    }

    pub fn singleton(element: usize) -> Self {
        IndexSet(Self::bit(element))
    }

    /// The full set `{1, ..., q}`.
    pub fn full(q: usize) -> Self {
        assert!(q <= MAX_INDEX, "ground set larger than 64");
        if q == 0 {
            IndexSet(0)
        } else {
            IndexSet(u64::MAX >> (MAX_INDEX - q))
        }
    }

    pub fn from_mask(mask: u64) -> Self {
        IndexSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn contains(self, element: usize) -> bool {
        self.0 & Self::bit(element) != 0
    }

    pub fn with(self, element: usize) -> Self {
        IndexSet(self.0 | Self::bit(element))
    }

    pub fn without(self, element: usize) -> Self {
        IndexSet(self.0 & !Self::bit(element))
    }

    pub fn union(self, other: Self) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset_of(self, other: Self) -> bool {
        other.is_subset_of(self)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| MAX_INDEX - self.0.leading_zeros() as usize)
    }

    /// Elements in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let element = rest.trailing_zeros() as usize + 1;
                rest &= rest - 1;
                Some(element)
            }
        })
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(IndexSet::EMPTY, |set, element| set.with(element))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (position, element) in self.iter().enumerate() {
            if position > 0 {
                write!(f, ",")?;
            }
            write!(f, "{element}")?;
        }
        write!(f, "}}")
    }
}

/// All subsets of `{1, ..., q}`, bucketed by cardinality; each bucket is in
/// ascending mask order.
pub fn subsets_by_cardinality(q: usize) -> Vec<Vec<IndexSet>> {
    assert!(q < MAX_INDEX, "full power set of 64 indices does not fit");
    let mut buckets: Vec<Vec<IndexSet>> = (0..=q)
        .map(|t| Vec::with_capacity(binomial(q as i64, t as i64) as usize))
        .collect();
    // Ascending mask order refines the bucket order within each cardinality.
    for mask in 0..(1u64 << q) {
        buckets[mask.count_ones() as usize].push(IndexSet(mask));
    }
    buckets
}

/// All `t`-element subsets of `{1, ..., q}` in ascending mask order.
pub fn subsets_with_cardinality(q: usize, t: usize) -> Vec<IndexSet> {
    assert!(q <= MAX_INDEX, "ground set larger than 64");
    if t > q {
        return Vec::new();
    }
    if t == 0 {
        return vec![IndexSet::EMPTY];
    }
    let limit = if q == MAX_INDEX {
        u64::MAX
    } else {
        (1u64 << q) - 1
    };
    let mut out = Vec::with_capacity(binomial(q as i64, t as i64) as usize);
    // Gosper's hack walks same-popcount masks in ascending order.
    let mut mask = (1u64 << t) - 1;
    while mask <= limit {
        out.push(IndexSet(mask));
        let lowest = mask & mask.wrapping_neg();
        let ripple = mask + lowest;
        if ripple == 0 {
            break;
        }
        mask = ripple | (((mask ^ ripple) >> 2) / lowest);
    }
    out
}

/// Binomial coefficient; any out-of-range argument (`k < 0`, `k > n`, or
/// `n < 0`) evaluates to zero, so callers may feed rank formulas verbatim.
pub fn binomial(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let (n, k) = (n as u128, k as u128);
    let k = k.min(n - k);
    let mut value: u128 = 1;
    for i in 0..k {
        value = value * (n - i) / (i + 1);
    }
    value
}

/// Sign of merging the ascending sequences of two disjoint sets: `0` when
/// they intersect, otherwise `(-1)^p` where `p` counts the transpositions
/// needed to sort the concatenation `A, B` ascending.
pub fn sign_pair(a: IndexSet, b: IndexSet) -> i32 {
    if !a.is_disjoint(b) {
        return 0;
    }
    let mut inversions = 0u32;
    for element in b.iter() {
        // Elements of `a` strictly above `element` each cost one swap.
        inversions += (a.mask() >> element).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of inserting a single element: `0` when `element` is in the set,
/// otherwise `(-1)^{|{j in set : j < element}|}`.
pub fn sign_elem(element: usize, set: IndexSet) -> i32 {
    if set.contains(element) {
        return 0;
    }
    let below = (set.mask() & (IndexSet::bit(element) - 1)).count_ones();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Incidence sign between a set and a one-element-smaller subset: removing
/// the `j`-th smallest element carries sign `(-1)^{j+1}`. Zero when `sub` is
/// not such a subset.
pub fn incidence(tau: IndexSet, sub: IndexSet) -> i32 {
    if !sub.is_subset_of(tau) || tau.len() != sub.len() + 1 {
        return 0;
    }
    let removed = tau.difference(sub).min_element().expect("one element");
    sign_elem(removed, sub)
}
