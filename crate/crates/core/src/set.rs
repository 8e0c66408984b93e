//! Subsets of the ground set and ordered tuples of ground elements.
//!
//! Ground elements are labelled `1..=64` and a subset is stored as a bitmask.
//! Minors keep the labels of the matroid they came from, so a ground set is
//! any subset of `1..=64`, not necessarily an initial segment.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Largest supported element label.
pub const MAX_ELEMENT: usize = 64;

/// A finite set of ground elements.
///
/// The ordering is lexicographic on the increasing sequence of elements, so
/// `{1,2,4} < {1,2,5} < {1,3} < {2}`; the empty set is smallest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElementSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., n}`.
    pub fn range(n: usize) -> Self {
        assert!(n <= MAX_ELEMENT);
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        assert!((1..=MAX_ELEMENT).contains(&e), "element {e} out of range");
        ElementSet(1u64 << (e - 1))
    }

    /// Builds a set, rejecting labels outside `1..=64`. Duplicates collapse.
    pub fn try_from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Result<Self, Error> {
        let mut s = ElementSet::EMPTY;
        for e in elems {
            if !(1..=MAX_ELEMENT).contains(&e) {
                return Err(Error::ElementOutOfRange(e));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_ELEMENT).contains(&e) && self.0 & (1u64 << (e - 1)) != 0
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= ElementSet::singleton(e).0;
    }

    pub fn remove(&mut self, e: usize) {
        if (1..=MAX_ELEMENT).contains(&e) {
            self.0 &= !(1u64 << (e - 1));
        }
    }

    pub fn with(self, e: usize) -> Self {
        ElementSet(self.0 | ElementSet::singleton(e).0)
    }

    pub fn without(self, e: usize) -> Self {
        let mut s = self;
        s.remove(e);
        s
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// 1-based position of `e` in the increasing enumeration of the set.
    pub fn position(self, e: usize) -> Option<usize> {
        self.contains(e)
            .then(|| (self.0 & ((1u64 << (e - 1)) - 1)).count_ones() as usize + 1)
    }

    /// All subsets, in no particular order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// All `k`-subsets in lexicographic order.
    pub fn combinations(self, k: usize) -> impl Iterator<Item = ElementSet> {
        use itertools::Itertools;
        self.to_vec()
            .into_iter()
            .combinations(k)
            .map(|c| ElementSet::try_from_elements(c).expect("labels already valid"))
    }
}

impl FromIterator<usize> for ElementSet {
    /// Panics on labels outside `1..=64`; use [`ElementSet::try_from_elements`]
    /// for untrusted input.
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl<const N: usize> From<[usize; N]> for ElementSet {
    fn from(elems: [usize; N]) -> Self {
        elems.into_iter().collect()
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff & diff.wrapping_neg();
        // Both sets agree below `low`; the one holding `low` is smaller unless
        // the other one stops there, in which case the other is a prefix.
        let at_or_above = !(low - 1);
        if self.0 & low != 0 {
            if other.0 & at_or_above == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if self.0 & at_or_above == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ElementSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(deserializer)?;
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom(
                "element lists must be strictly increasing",
            ));
        }
        ElementSet::try_from_elements(elems).map_err(serde::de::Error::custom)
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Elements {}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            Some((cur.wrapping_sub(self.mask)) & self.mask)
        };
        Some(ElementSet(cur))
    }
}

/// An ordered tuple of pairwise distinct ground elements, `X^σ` in the usual
/// notation. The sorted tuple of a set `X` is `X` itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrderedTuple(Vec<usize>);

impl OrderedTuple {
    pub fn new(entries: Vec<usize>) -> Result<Self, Error> {
        let support = ElementSet::try_from_elements(entries.iter().copied())?;
        if support.len() != entries.len() {
            return Err(Error::RepeatedEntry(entries));
        }
        Ok(OrderedTuple(entries))
    }

    /// The increasing enumeration of `set`.
    pub fn sorted(set: ElementSet) -> Self {
        OrderedTuple(set.to_vec())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn support(&self) -> ElementSet {
        self.0.iter().copied().collect()
    }

    /// `self * other`; fails when the supports meet.
    pub fn concat(&self, other: &OrderedTuple) -> Result<Self, Error> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        OrderedTuple::new(v)
    }

    pub fn push(&self, e: usize) -> Result<Self, Error> {
        let mut v = self.0.clone();
        v.push(e);
        OrderedTuple::new(v)
    }

    pub fn without(&self, e: usize) -> Self {
        OrderedTuple(self.0.iter().copied().filter(|&x| x != e).collect())
    }

    /// Sign of the permutation sorting the tuple into increasing order.
    pub fn sign(&self) -> i8 {
        permutation_sign(&self.0)
    }
}

impl fmt::Debug for OrderedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for OrderedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Parity of the number of inversions of a sequence of distinct values.
pub fn permutation_sign(entries: &[usize]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            if entries[i] > entries[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
