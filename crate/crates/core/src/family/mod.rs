//! Set families over a ground set `[n] = {1, ..., n}`.
//!
//! A [`SetMask`] stores one subset as a bit pattern: bit `k` is set when element
//! `k + 1` belongs to the set. Element indices in the public API are always
//! 1-based. A [`Family`] keeps its masks strictly sorted, so two families are
//! equal exactly when their representations are.

mod text;
mod transform;

use std::fmt;

use crate::error::{Error, Result};

pub use text::{parse_family, write_family};

/// Largest supported ground-set size.
pub const MAX_GROUND: u8 = 16;

pub(crate) fn check_ground(n: usize) -> Result<u8> {
    if (1..=MAX_GROUND as usize).contains(&n) {
        Ok(n as u8)
    } else {
        Err(Error::GroundSetSize(n))
    }
}

fn check_element(n: u8, e: usize) -> Result<()> {
    if e == 0 || e > n as usize {
        Err(Error::ElementOutOfRange {
            element: e,
            n: n as usize,
        })
    } else {
        Ok(())
    }
}

/// One subset of the ground set.
#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetMask(u16);

impl SetMask {
    pub const EMPTY: SetMask = SetMask(0);

    pub const fn from_bits(bits: u16) -> Self {
        SetMask(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// The full ground set `[n]`.
    pub const fn full(n: u8) -> Self {
        if n >= 16 {
            SetMask(u16::MAX)
        } else {
            SetMask((1u16 << n) - 1)
        }
    }

    pub fn from_elements(n: u8, elements: &[usize]) -> Result<Self> {
        let mut bits = 0u16;
        for &e in elements {
            check_element(n, e)?;
            bits |= 1 << (e - 1);
        }
        Ok(SetMask(bits))
    }

    pub const fn singleton(e: usize) -> Self {
        SetMask(1 << (e - 1))
    }

    pub const fn contains(self, e: usize) -> bool {
        e >= 1 && e <= 16 && self.0 & (1 << (e - 1)) != 0
    }

    pub const fn with(self, e: usize) -> Self {
        SetMask(self.0 | (1 << (e - 1)))
    }

    pub const fn without(self, e: usize) -> Self {
        SetMask(self.0 & !(1 << (e - 1)))
    }

    pub const fn union(self, other: SetMask) -> Self {
        SetMask(self.0 | other.0)
    }

    pub const fn is_subset_of(self, other: SetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn fits(self, n: u8) -> bool {
        self.0 & !SetMask::full(n).0 == 0
    }

    /// Elements in ascending order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..16usize)
            .filter(move |k| bits & (1 << k) != 0)
            .map(|k| k + 1)
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Per-element set counts: `counts[e-1]` is the number of sets containing `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyVector(Vec<u32>);

impl FrequencyVector {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Frequency of element `e` (1-based).
    pub fn of(&self, e: usize) -> u32 {
        self.0[e - 1]
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Elements ordered by decreasing frequency, lower index first on ties.
    pub fn order_by_frequency(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..=self.0.len()).collect();
        order.sort_by(|&a, &b| self.of(b).cmp(&self.of(a)).then(a.cmp(&b)));
        order
    }
}

/// Two member sets `little` and `big = little ∪ {diff}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TwinPair {
    pub little: SetMask,
    pub big: SetMask,
    pub diff: usize,
    /// The big twin is the whole ground set.
    pub trivial: bool,
}

/// Twin-pair tallies for one element under both conventions.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct TwinCount {
    pub total: u32,
    pub nontrivial: u32,
}

/// A duplicate-free, canonically ordered collection of subsets of `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u8,
    sets: Vec<SetMask>,
}

impl Family {
    /// Builds a family from element lists. Duplicate sets are rejected.
    pub fn new<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        let n = check_ground(n)?;
        let masks = sets
            .iter()
            .map(|s| SetMask::from_elements(n, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n as usize, masks)
    }

    pub fn from_masks(n: usize, masks: impl IntoIterator<Item = SetMask>) -> Result<Self> {
        let n = check_ground(n)?;
        let mut sets: Vec<SetMask> = masks.into_iter().collect();
        for s in &sets {
            if !s.fits(n) {
                let element = (16 - s.bits().leading_zeros()) as usize;
                return Err(Error::ElementOutOfRange {
                    element,
                    n: n as usize,
                });
            }
        }
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSet(w[0].to_string()));
        }
        Ok(Family { n, sets })
    }

    /// Masks must already be sorted, distinct and within `n` bits.
    pub(crate) fn from_sorted(n: u8, sets: Vec<SetMask>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(sets.iter().all(|s| s.fits(n)));
        Family { n, sets }
    }

    /// Same as [`Family::from_masks`] but merges duplicates.
    pub(crate) fn from_masks_dedup(n: u8, mut sets: Vec<SetMask>) -> Self {
        sets.sort_unstable();
        sets.dedup();
        Family::from_sorted(n, sets)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Ok(Family {
            n: check_ground(n)?,
            sets: Vec::new(),
        })
    }

    pub fn power_set(n: usize) -> Result<Self> {
        let n = check_ground(n)?;
        let sets = (0..=SetMask::full(n).bits()).map(SetMask).collect();
        Ok(Family { n, sets })
    }

    /// Ground-set size.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Number of sets, `m(F)`.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[SetMask] {
        &self.sets
    }

    pub fn contains(&self, s: SetMask) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    fn membership(&self) -> Vec<bool> {
        let mut present = vec![false; 1 << self.n];
        for s in &self.sets {
            present[s.bits() as usize] = true;
        }
        present
    }

    pub fn is_union_closed(&self) -> bool {
        let present = self.membership();
        self.sets.iter().enumerate().all(|(i, s)| {
            self.sets[i + 1..]
                .iter()
                .all(|t| present[(s.bits() | t.bits()) as usize])
        })
    }

    /// Smallest union-closed family containing `self`.
    pub fn union_closure(&self) -> Family {
        let mut present = self.membership();
        let mut all = self.sets.clone();
        let mut frontier = self.sets.clone();
        while let Some(s) = frontier.pop() {
            let mut i = 0;
            while i < all.len() {
                let u = s.union(all[i]);
                if !present[u.bits() as usize] {
                    present[u.bits() as usize] = true;
                    all.push(u);
                    frontier.push(u);
                }
                i += 1;
            }
        }
        Family::from_masks_dedup(self.n, all)
    }

    pub fn frequencies(&self) -> FrequencyVector {
        let mut counts = vec![0u32; self.n as usize];
        for s in &self.sets {
            for e in s.elements() {
                counts[e - 1] += 1;
            }
        }
        FrequencyVector(counts)
    }

    /// `a(F)`, the largest element frequency; 0 when no element is used.
    pub fn degree(&self) -> u32 {
        self.frequencies().max()
    }

    /// All pairs `(S, S ∪ {e})` of member sets with `e ∉ S`, by little mask.
    pub fn twin_pairs(&self, e: usize) -> Result<Vec<TwinPair>> {
        check_element(self.n, e)?;
        let full = SetMask::full(self.n);
        Ok(self
            .sets
            .iter()
            .filter(|s| !s.contains(e))
            .filter_map(|&little| {
                let big = little.with(e);
                self.contains(big).then_some(TwinPair {
                    little,
                    big,
                    diff: e,
                    trivial: big == full,
                })
            })
            .collect())
    }

    /// Twin-pair counts for every element, trivial pairs counted separately.
    pub fn twin_counts(&self) -> Vec<TwinCount> {
        let present = self.membership();
        let full = SetMask::full(self.n);
        (1..=self.n as usize)
            .map(|e| {
                let mut count = TwinCount::default();
                for s in self.sets.iter().filter(|s| !s.contains(e)) {
                    let big = s.with(e);
                    if present[big.bits() as usize] {
                        count.total += 1;
                        if big != full {
                            count.nontrivial += 1;
                        }
                    }
                }
                count
            })
            .collect()
    }

    /// Smallest number of non-trivial twin pairs over all elements.
    pub fn min_nontrivial_twin_count(&self) -> u32 {
        self.twin_counts()
            .iter()
            .map(|c| c.nontrivial)
            .min()
            .unwrap_or(0)
    }

    /// Frankl ratio `a(F) / m(F)` as an unreduced fraction.
    pub fn frankl_ratio(&self) -> (u32, usize) {
        (self.degree(), self.len())
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_list().entries(self.sets.iter()).finish()?;
        f.write_str(")")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_family(self))
    }
}
