use crate::approx::greedy_mast_raf;
use crate::error::Result;
use crate::mast::mast;
use crate::phylo::{trees_equal, PhyloTree};
use crate::raf::partition::{ForestKind, RafPartition};
use crate::taxa::TaxonSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrafBounds {
    pub lower: usize,
    pub upper: usize,
    pub witness_upper: RafPartition,
    pub mast_size: usize,
}

/// Any partition into blocks of at most three taxa is a RAF.
pub fn triples_partition(n: usize) -> RafPartition {
    let components = (0..n).step_by(3).map(|s| TaxonSet::from_ids(n, s..(s + 3).min(n))).collect();
    RafPartition::new(components, ForestKind::Raf)
}

/// Lower bound from the MAST size and tree equality; upper bound from the
/// greedy forest and the triple partition, whichever is smaller.
pub fn mraf_bounds(t1: &PhyloTree, t2: &PhyloTree) -> Result<MrafBounds> {
    let n = t1.n();
    let m = mast(t1, t2)?.size;
    let distinct = !trees_equal(t1, t2)?;
    let lower = n.div_ceil(m).max(if distinct { 2 } else { 1 });
    let greedy = greedy_mast_raf(t1, t2)?;
    let triples = triples_partition(n);
    let witness_upper = if n >= 3 && triples.size() < greedy.size() { triples } else { greedy };
    Ok(MrafBounds { lower, upper: witness_upper.size(), witness_upper, mast_size: m })
}
