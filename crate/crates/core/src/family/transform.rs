//! Structural transforms: element cloning and deletion, growing and shrinking
//! a family by one set, relabelling, and the separating-set chain.

use super::{check_element, Family, SetMask, MAX_GROUND};
use crate::error::{Error, Result};

fn drop_bit(mask: SetMask, e: usize) -> SetMask {
    let bits = mask.bits() as u32;
    let low = bits & ((1 << (e - 1)) - 1);
    let high = (bits >> e) << (e - 1);
    SetMask::from_bits((low | high) as u16)
}

impl Family {
    /// Adds element `n + 1` to exactly the sets containing `e`.
    pub fn clone_element(&self, e: usize) -> Result<Family> {
        check_element(self.n, e)?;
        if self.n >= MAX_GROUND {
            return Err(Error::WidthExhausted);
        }
        let new = self.n as usize + 1;
        let sets = self
            .sets
            .iter()
            .map(|&s| if s.contains(e) { s.with(new) } else { s })
            .collect();
        Ok(Family::from_masks_dedup(self.n + 1, sets))
    }

    /// Removes `e` from every set; indices above `e` shift down by one and
    /// sets that coincide afterwards are merged.
    pub fn delete_element(&self, e: usize) -> Result<Family> {
        check_element(self.n, e)?;
        if self.n == 1 {
            return Err(Error::LastElement);
        }
        let sets = self.sets.iter().map(|&s| drop_bit(s, e)).collect();
        Ok(Family::from_masks_dedup(self.n - 1, sets))
    }

    /// Adds a missing set of maximum cardinality, largest bit pattern on ties.
    pub fn add_largest_missing_set(&self) -> Result<Family> {
        let full = SetMask::full(self.n).bits();
        let mut present = vec![false; full as usize + 1];
        for s in &self.sets {
            present[s.bits() as usize] = true;
        }
        let pick = (0..=full)
            .rev()
            .filter(|&b| !present[b as usize])
            .max_by_key(|&b| (b.count_ones(), b))
            .ok_or(Error::FullPowerSet)?;
        let mut sets = self.sets.clone();
        sets.push(SetMask::from_bits(pick));
        sets.sort_unstable();
        Ok(Family::from_sorted(self.n, sets))
    }

    /// Removes a set of minimum cardinality, smallest bit pattern on ties.
    pub fn remove_smallest_set(&self) -> Result<Family> {
        let (idx, _) = self
            .sets
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| (s.len(), s.bits()))
            .ok_or(Error::EmptyFamily)?;
        let mut sets = self.sets.clone();
        sets.remove(idx);
        Ok(Family::from_sorted(self.n, sets))
    }

    /// Renames element `i` to `perm[i-1]` (both 1-based).
    pub fn permute(&self, perm: &[usize]) -> Family {
        assert_eq!(perm.len(), self.n as usize, "permutation length");
        let sets = self
            .sets
            .iter()
            .map(|s| {
                s.elements()
                    .fold(SetMask::EMPTY, |acc, e| acc.with(perm[e - 1]))
            })
            .collect();
        Family::from_masks_dedup(self.n, sets)
    }

    /// Relabels elements so frequencies are non-increasing in the index.
    pub fn relabel_by_frequency(&self) -> Family {
        let order = self.frequencies().order_by_frequency();
        let mut perm = vec![0; self.n as usize];
        for (rank, &e) in order.iter().enumerate() {
            perm[e - 1] = rank + 1;
        }
        self.permute(&perm)
    }

    /// Separating-set chain for a union-closed family.
    ///
    /// With elements ordered by decreasing frequency `v_1, ..., v_n`, pick for
    /// every `i < j` the first member containing `v_i` but not `v_j`, and let
    /// `S_j` be the union of those picks over `i < j`. Returns
    /// `S_2, ..., S_n, [n]` when every pick exists and all of them are members;
    /// these `n` sets are distinct and contain `v_1`.
    pub fn falgas_ravry_sets(&self) -> Option<Vec<SetMask>> {
        let full = SetMask::full(self.n);
        if self.is_empty() || !self.contains(full) {
            return None;
        }
        let order = self.frequencies().order_by_frequency();
        let mut chain = Vec::with_capacity(self.n as usize);
        for j in 1..order.len() {
            let target = order[j];
            let mut acc = SetMask::EMPTY;
            for &source in &order[..j] {
                let sep = self
                    .sets
                    .iter()
                    .find(|s| s.contains(source) && !s.contains(target))?;
                acc = acc.union(*sep);
            }
            if !self.contains(acc) {
                return None;
            }
            chain.push(acc);
        }
        chain.push(full);
        Some(chain)
    }
}
