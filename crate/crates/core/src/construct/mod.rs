//! Builders for unitary groups and the subgroups used as factors.

mod builder;
mod classical;
mod g2;
mod import;
mod matgen;
mod orders;

pub use builder::{Assembled, Builder, RecipeKind, SubgroupRecipe, DEFAULT_DOMAIN_BUDGET};
pub use classical::{
    ext_generators, g2_generators, levi_generators, outer_element, radical_elements,
    radical_generators, sp2m_generators, su_generators, ExtKind, OuterKind,
};
pub use import::{import_generators, import_parsed, GeneratorFile};
pub use orders::{order_g2, order_sl, order_sp, order_su};
