//! Concrete groups: the Klein bottle group, free groups and the subgroup
//! family used by the index and cover computations.

mod affine;
mod free;
mod kb;
pub mod presburger;
mod subgroup;

pub use affine::AffineAction;
pub use free::{abelianize, free_inv, free_mul, AbelianVector, FreeWord};
pub use kb::{kb_center_description, kb_centralizer_membership, kb_inv, kb_mul, kb_pow, KbElement};
pub use subgroup::{
    index_pair_check, index_pair_check_with, subgroup_intersect, CosetIndex, IndexPair, KbSubgroup,
};
