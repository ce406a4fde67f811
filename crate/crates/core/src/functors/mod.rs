//! Change-of-grading functors along a group morphism `φ: G -> G'`:
//! `φ_!` (regrade), `φ^*` (pull back) and `φ_*` (coinduce), with the explicit
//! isomorphisms and adjunction data relating them.

mod adjunction;
mod lemma;
mod regrading;
mod resolution;

pub use adjunction::AdjunctionWitness;
pub use lemma::DecompositionCheck;
pub use regrading::{coinduction, pushforward, LazyGradedModule, Pullback, Regrading};
pub use resolution::{RankOneResolution, SlotReport};
