//! Permutation groups acting on vector domains: stabilizer chains, semilinear maps,
//! and group handles.

mod backtrack;
mod chain;
mod domain;
mod handle;
mod perm;
mod semilinear;

pub use backtrack::DEFAULT_SEARCH_BUDGET;
pub use chain::{RandomElements, StabChain};
pub use domain::{Domain, DomainKind, DomainRef};
pub use handle::{BigCount, GroupHandle, DEFAULT_SEED, SUBSPACE_ORBIT_BUDGET};
pub use perm::Perm;
pub use semilinear::SemilinearMap;
