//! Graded algebras, modules and maps with finite total dimension.

mod algebra;
mod hom;
mod map;
mod module;
mod quiver;
mod space;
mod validate;

pub use algebra::{BasicStructure, GradedAlgebra};
pub use hom::{hom_space, HomSpace};
pub use map::{direct_sum, quotient, submodule, DirectSum, GradedMap};
pub use module::{ActionBlocks, GradedModule};
pub use quiver::{Arrow, PathCombination, QuiverPresentation, Representation};
pub use space::GradedVectorSpace;
pub use validate::{ValidationFailure, ValidationReport};
