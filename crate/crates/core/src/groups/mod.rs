//! Finitely generated abelian grading groups and their morphisms.
//!
//! Groups are kept in canonical form `Z^r x Z/m_1 x ... x Z/m_s` with a
//! divisibility chain; kernels and fibers are computed through Smith normal
//! form over big integers.

mod group;
mod morphism;
mod smith;

pub use group::{ExtendedNat, FgAbelianGroup, GroupElement};
pub use morphism::{cohomological_dimension, GroupMorphism, Kernel};
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
