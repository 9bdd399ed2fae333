//! Store of inconsistent label sets.
//!
//! A stored set records that its labels can never hold together: any
//! elemental constraint whose label set includes a stored set is dead and
//! gets filtered out of results. The store keeps only subset-minimal sets,
//! so membership growth is an antichain walk, not a powerset.

use crate::label::LabelSet;

#[derive(Debug, Clone, Default)]
pub struct ILSetStore {
    sets: Vec<LabelSet>,
}

impl ILSetStore {
    pub fn new() -> ILSetStore {
        ILSetStore::default()
    }

    /// Adds one inconsistent set, keeping the store subset-minimal.
    /// Returns false when an existing subset already covers it.
    pub fn add(&mut self, set: LabelSet) -> bool {
        debug_assert!(!set.is_empty(), "an empty inconsistent set would kill everything");
        if self.covers(&set) {
            return false;
        }
        self.sets.retain(|s| !set.is_subset(s));
        self.sets.push(set);
        true
    }

    /// True when some stored set is a subset of `set`, i.e. the labels in
    /// `set` cannot all hold together.
    pub fn covers(&self, set: &LabelSet) -> bool {
        self.sets.iter().any(|s| s.is_subset(set))
    }

    pub fn iter(&self) -> impl Iterator<Item = &LabelSet> {
        self.sets.iter()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Drops one exact set, for rolling back a rejected input's bookkeeping.
    pub fn remove_exact(&mut self, set: &LabelSet) {
        self.sets.retain(|s| s != set);
    }

    /// Sorted snapshot for reporting and comparison against the oracle.
    pub fn sorted_sets(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.sets.iter().map(|s| s.iter().collect()).collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> LabelSet {
        LabelSet::from_iter(ids.iter().copied())
    }

    #[test]
    fn add_absorbs_supersets() {
        let mut store = ILSetStore::new();
        assert!(store.add(set(&[2, 3, 4])));
        assert!(store.add(set(&[5, 6])));
        // subset arrives later: the superset goes away
        assert!(store.add(set(&[2, 3])));
        assert_eq!(store.len(), 2);
        assert!(store.covers(&set(&[2, 3, 9])));
        assert!(!store.covers(&set(&[3, 4])));
        // superset of something stored is a no-op
        assert!(!store.add(set(&[2, 3, 7])));
        assert_eq!(store.len(), 2);
    }

    #[test]
    fn covers_is_subset_membership() {
        let mut store = ILSetStore::new();
        store.add(set(&[2, 3]));
        assert!(store.covers(&set(&[2, 3])));
        assert!(!store.covers(&set(&[2])));
        assert!(!store.covers(&LabelSet::new()));
    }
}
