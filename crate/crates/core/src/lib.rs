//! Construction of finite unitary groups and exact certification of subgroup
//! factorizations G = HK by permutation-group methods.

pub mod cli;
pub mod construct;
pub mod error;
pub mod ff;
pub mod grp;
pub mod linalg;
pub mod unispace;
pub mod verify;

pub use error::{Error, Result};
