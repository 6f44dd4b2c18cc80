//! Relaxed agreement forests of unrooted binary phylogenetic trees.
//!
//! The crate covers tree handling (Newick, restriction, quartets), maximum
//! agreement subtrees, exact and approximate minimum relaxed agreement
//! forests, monotone partitions of permutations and their caterpillar
//! counterparts, reduction rules, and generators for structured instances.

pub mod approx;
pub mod budget;
pub mod caterpillar_dp;
pub mod error;
pub mod gadgets;
pub mod mast;
pub mod phylo;
pub mod pims;
pub mod raf;
pub mod random;
pub mod reduce;
pub mod taxa;

pub use budget::Budget;
pub use error::{Error, NewickError, Result};
pub use phylo::PhyloTree;
pub use taxa::{TaxonId, TaxonSet, Universe};
