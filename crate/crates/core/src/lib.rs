//! Exact computations for equivariant symplectic representations of surface
//! covers: group rings with involution, their rational Wedderburn blocks,
//! skew-hermitian modules over ℤG, and the homology of finite G-covers.

pub mod algebra;
pub mod cover;
pub mod diagnostics;
pub mod error;
pub mod group;
pub mod hermitian;
pub mod homology;
pub mod linalg;
pub mod poly;
pub mod repr;
pub mod twist;

pub use error::{Error, Result};
pub use group::FiniteGroup;
