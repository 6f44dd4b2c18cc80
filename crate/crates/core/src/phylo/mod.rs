//! Unrooted binary phylogenetic trees: representation, Newick I/O,
//! restriction, quartets, isomorphism and caterpillar utilities.

pub mod caterpillar;
pub mod newick;
pub mod quartet;
pub mod tree;

pub use caterpillar::{
    caterpillar_from_sequence, caterpillar_order, identity_caterpillar, permutation_caterpillar,
    CaterpillarOrder,
};
pub use newick::{parse_newick, parse_pair, write_newick};
pub use quartet::{quartet_of, quartet_topology, Quartet, QuartetOracle, QuartetSplit};
pub use tree::{PhyloTree, Token, TreeBuilder, VertexId};

use crate::error::Result;
use crate::taxa::TaxonSet;

/// Label-preserving isomorphism of two trees over the same universe.
pub fn trees_equal(t1: &PhyloTree, t2: &PhyloTree) -> Result<bool> {
    t1.equals(t2)
}

/// Whether `T1|S = T2|S`. Sets of at most three taxa always agree.
pub fn is_homeomorphic(t1: &PhyloTree, t2: &PhyloTree, s: &TaxonSet) -> Result<bool> {
    t1.check_same_universe(t2)?;
    t1.check_taxa(s)?;
    if s.len() <= 3 {
        return Ok(true);
    }
    t1.restrict(s)?.equals(&t2.restrict(s)?)
}
