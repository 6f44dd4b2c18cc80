//! Taxon universes and dense taxon bitsets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense taxon index within one universe.
pub type TaxonId = usize;

/// The ordered label list of a taxon universe. Taxon `i` carries label `labels[i]`.
///
/// Cloning is cheap; trees over the same universe share the allocation.
#[derive(Clone, PartialEq, Eq)]
pub struct Universe(Arc<[String]>);

impl Universe {
    pub fn new(labels: Vec<String>) -> Self {
        Universe(labels.into())
    }

    /// Universe labelled `"1"..="n"`.
    pub fn numbered(n: usize) -> Self {
        Universe::new((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn label(&self, id: TaxonId) -> &str {
        &self.0[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn id_of(&self, label: &str) -> Option<TaxonId> {
        self.0.iter().position(|l| l == label)
    }

    pub fn same_as(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }

    /// Sub-universe formed by the members of `set`, in ascending id order.
    pub fn subset(&self, set: &TaxonSet) -> Universe {
        Universe::new(set.iter().map(|t| self.0[t].clone()).collect())
    }

    pub fn full_set(&self) -> TaxonSet {
        TaxonSet::full(self.len())
    }

    /// Labels of the members of `set`, in ascending id order.
    pub fn labels_of(&self, set: &TaxonSet) -> Vec<String> {
        set.iter().map(|t| self.0[t].clone()).collect()
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A subset of a taxon universe of fixed size, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaxonSet {
    words: Vec<u64>,
    universe: usize,
}

impl TaxonSet {
    pub fn empty(universe: usize) -> Self {
        TaxonSet { words: vec![0; universe.div_ceil(64)], universe }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for t in 0..universe {
            s.insert(t);
        }
        s
    }

    pub fn from_ids<I: IntoIterator<Item = TaxonId>>(universe: usize, ids: I) -> Self {
        let mut s = Self::empty(universe);
        for t in ids {
            s.insert(t);
        }
        s
    }

    /// Checked construction: every id must lie in `0..universe`.
    pub fn try_from_ids<I: IntoIterator<Item = TaxonId>>(universe: usize, ids: I) -> Result<Self> {
        let mut s = Self::empty(universe);
        for t in ids {
            if t >= universe {
                return Err(Error::UnknownTaxon(t));
            }
            s.insert(t);
        }
        Ok(s)
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, t: TaxonId) {
        assert!(t < self.universe, "taxon {t} outside universe of size {}", self.universe);
        self.words[t / 64] |= 1 << (t % 64);
    }

    pub fn remove(&mut self, t: TaxonId) {
        if t < self.universe {
            self.words[t / 64] &= !(1 << (t % 64));
        }
    }

    pub fn contains(&self, t: TaxonId) -> bool {
        t < self.universe && self.words[t / 64] & (1 << (t % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<TaxonId> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn is_subset(&self, other: &TaxonSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &TaxonSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &TaxonSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &TaxonSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn intersection(&self, other: &TaxonSet) -> TaxonSet {
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = TaxonId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<TaxonId> {
        self.iter().collect()
    }
}

impl fmt::Debug for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops_across_word_boundary() {
        let a = TaxonSet::from_ids(130, [0, 63, 64, 129]);
        let b = TaxonSet::from_ids(130, [63, 64]);
        assert_eq!(a.len(), 4);
        assert!(b.is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.difference(&b).to_vec(), vec![0, 129]);
        assert_eq!(a.first(), Some(0));
        assert_eq!(TaxonSet::empty(130).first(), None);
        assert!(a.difference(&b).is_disjoint(&b));
    }

    #[test]
    fn checked_construction_rejects_out_of_range() {
        assert_eq!(TaxonSet::try_from_ids(4, [1, 4]), Err(Error::UnknownTaxon(4)));
    }

    #[test]
    fn universe_subset_keeps_id_order() {
        let u = Universe::numbered(5);
        let s = TaxonSet::from_ids(5, [4, 1]);
        assert_eq!(u.subset(&s).labels(), &["2".to_string(), "5".to_string()]);
        assert_eq!(u.id_of("3"), Some(2));
    }
}
