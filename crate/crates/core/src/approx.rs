//! Greedy forest by repeatedly removing a maximum agreement subtree.

use crate::error::Result;
use crate::mast::mast;
use crate::phylo::PhyloTree;
use crate::raf::{ForestKind, RafPartition};
use crate::taxa::TaxonSet;

/// Strips a MAST of the still uncovered taxa until none are left. The result
/// is always a valid RAF with at most `⌈n/3⌉` components.
pub fn greedy_mast_raf(t1: &PhyloTree, t2: &PhyloTree) -> Result<RafPartition> {
    t1.check_same_universe(t2)?;
    let n = t1.n();
    let mut rest = t1.taxa();
    let mut components = Vec::new();
    while !rest.is_empty() {
        let ids = rest.to_vec();
        let (r1, r2) = (t1.restrict(&rest)?, t2.restrict(&rest)?);
        let found = mast(&r1, &r2)?;
        let block = TaxonSet::from_ids(n, found.taxa.iter().map(|i| ids[i]));
        rest.difference_with(&block);
        components.push(block);
    }
    Ok(RafPartition::new(components, ForestKind::Raf))
}
