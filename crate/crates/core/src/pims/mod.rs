//! Partitioning permutations into monotone subsequences, and the link to
//! agreement forests of caterpillar pairs.

pub mod convert;
pub mod permutation;
pub mod solve;

pub use convert::{pims_to_mraf, raf_to_pims};
pub use permutation::{Direction, MonotoneClass, MonotonePartition, Permutation};
pub use solve::{erdos_szekeres_partition, lds, lis, pims_exact, PIMS_EXACT_MAX_N};
