//! Set partitions of small index sets, stored as bitmasks.

use std::collections::BTreeMap;

use thiserror::Error;

/// Largest index a partition may mention (bit positions of a `u64`).
pub const MAX_INDEX: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("block list is not a partition of the index set")]
    NotAPartition,
    #[error("label {label} exceeds the maximum {max}")]
    LabelTooLarge { label: u32, max: u32 },
}

/// Partition of an index set into nonempty blocks. Each block is a bitmask;
/// blocks are kept sorted by their lowest index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<u64>,
}

impl SetPartition {
    /// Validates that `blocks` are nonempty, pairwise disjoint and cover `indices`.
    pub fn new(indices: u64, mut blocks: Vec<u64>) -> Result<Self, PartitionError> {
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 || seen & b != 0 {
                return Err(PartitionError::NotAPartition);
            }
            seen |= b;
        }
        if seen != indices {
            return Err(PartitionError::NotAPartition);
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        Ok(SetPartition { blocks })
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn indices(&self) -> u64 {
        self.blocks.iter().fold(0, |a, b| a | b)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks as sorted index lists.
    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| mask_indices(b)).collect()
    }
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1u64 << i) != 0).collect()
}

/// Every partition of the index set `indices` (a bitmask) into nonempty
/// blocks, each exactly once, in restricted-growth order. The empty set has
/// exactly one partition, the one with no blocks.
pub fn enumerate_set_partitions(indices: u64) -> impl Iterator<Item = SetPartition> {
    let elems = mask_indices(indices);
    let n = elems.len();
    // restricted growth string: rgs[0] = 0, rgs[i] <= 1 + max(rgs[..i])
    let mut rgs = vec![0usize; n];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![0u64; k];
        for (i, &r) in rgs.iter().enumerate() {
            blocks[r] |= 1u64 << elems[i];
        }
        let out = SetPartition { blocks };
        // advance to the next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                done = true;
                break;
            }
            i -= 1;
            let bound = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
        Some(out)
    })
}

/// All nonempty submasks of `mask` in increasing numeric order.
pub fn nonempty_submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = 0u64;
    std::iter::from_fn(move || {
        sub = sub.wrapping_sub(mask) & mask;
        (sub != 0).then_some(sub)
    })
}

/// A total labeling of an index set by naturals `0..=max_label`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledPartition {
    labels: BTreeMap<usize, u32>,
    max_label: u32,
}

impl LabeledPartition {
    pub fn new(labels: BTreeMap<usize, u32>, max_label: u32) -> Result<Self, PartitionError> {
        if let Some(&label) = labels.values().find(|&&l| l > max_label) {
            return Err(PartitionError::LabelTooLarge { label, max: max_label });
        }
        Ok(LabeledPartition { labels, max_label })
    }

    pub fn label(&self, idx: usize) -> Option<u32> {
        self.labels.get(&idx).copied()
    }

    pub fn labels(&self) -> &BTreeMap<usize, u32> {
        &self.labels
    }

    pub fn max_label(&self) -> u32 {
        self.max_label
    }

    /// Indices carrying label `l`.
    pub fn fiber(&self, l: u32) -> Vec<usize> {
        self.labels.iter().filter(|(_, &v)| v == l).map(|(&k, _)| k).collect()
    }

    /// The set partition induced by the nonempty fibers.
    pub fn induced(&self) -> SetPartition {
        let mut by_label: BTreeMap<u32, u64> = BTreeMap::new();
        for (&i, &l) in &self.labels {
            *by_label.entry(l).or_default() |= 1u64 << i;
        }
        let indices = by_label.values().fold(0, |a, b| a | b);
        SetPartition::new(indices, by_label.into_values().collect()).expect("fibers partition the domain")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_set_partitions(0).collect::<Vec<_>>(), vec![SetPartition { blocks: vec![] }]);
        let two: Vec<_> = enumerate_set_partitions(0b11).collect();
        assert_eq!(two.len(), 2);
        assert!(two.contains(&SetPartition::new(0b11, vec![0b11]).unwrap()));
        assert!(two.contains(&SetPartition::new(0b11, vec![0b01, 0b10]).unwrap()));
        assert_eq!(enumerate_set_partitions(0b111).count(), 5);
    }

    #[test]
    fn bell_numbers_and_uniqueness() {
        for n in 0..=8 {
            let all: Vec<_> = enumerate_set_partitions((1u64 << n) - 1).collect();
            assert_eq!(all.len(), bell(n), "n = {n}");
            let distinct: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            for p in &all {
                assert!(SetPartition::new((1u64 << n) - 1, p.blocks().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn sparse_index_sets() {
        let parts: Vec<_> = enumerate_set_partitions(0b1010_0100).collect();
        assert_eq!(parts.len(), 5);
        assert!(parts.iter().all(|p| p.indices() == 0b1010_0100));
    }

    #[test]
    fn invalid_partitions() {
        assert_eq!(SetPartition::new(0b11, vec![0b01]), Err(PartitionError::NotAPartition));
        assert_eq!(SetPartition::new(0b11, vec![0b11, 0b01]), Err(PartitionError::NotAPartition));
        assert_eq!(SetPartition::new(0b11, vec![0b11, 0]), Err(PartitionError::NotAPartition));
    }

    #[test]
    fn submasks() {
        let subs: Vec<_> = nonempty_submasks(0b101).collect();
        assert_eq!(subs, vec![0b001, 0b100, 0b101]);
        assert_eq!(nonempty_submasks(0).count(), 0);
    }

    #[test]
    fn labeled() {
        let lp = LabeledPartition::new([(0, 2), (1, 0), (2, 2)].into(), 3).unwrap();
        assert_eq!(lp.fiber(2), vec![0, 2]);
        assert_eq!(lp.induced().blocks(), &[0b101, 0b010]);
        assert!(LabeledPartition::new([(0, 5)].into(), 3).is_err());
    }
}
