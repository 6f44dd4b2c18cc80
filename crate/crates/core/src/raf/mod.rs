//! Relaxed agreement forests: the conflict hypergraph, validation, exact
//! solvers, exhaustive oracles and bounds.

pub mod bounds;
pub mod brute;
pub mod exact;
pub mod hypergraph;
pub mod partition;

pub use bounds::{mraf_bounds, triples_partition, MrafBounds};
pub use brute::{maf_bruteforce, mraf_bruteforce, MAF_BRUTEFORCE_MAX_N, MRAF_BRUTEFORCE_MAX_N};
pub use exact::{mraf_exact, ExactOutcome, Strategy, COVER_DP_MAX_N};
pub use hypergraph::{build_conflict_hypergraph, ConflictHypergraph};
pub use partition::{validate_af, validate_raf, ForestKind, PartitionJson, RafPartition};
