//! Instance constructions: the permutation-to-forest hardness gadget and
//! small families with known optima.

pub mod families;
pub mod hardness;

pub use families::{nochain_caterpillar_family, unbounded_maf_instance, Family};
pub use hardness::{
    check_structural_lemmas, hardness_instance, pims_solution_to_raf_gadget, GadgetPieces, HardnessInstance, Side,
    StructuralReport,
};
