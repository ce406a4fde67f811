//! Exact computations with group-graded modules over finite-dimensional algebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`groups`]: finitely generated abelian grading groups, Smith normal form,
//!   kernels and fibers of morphisms, cohomological dimension.
//! - [`linalg`]: exact linear algebra over `Q` and `F_p`.
//! - [`fixtures`]: small quiver algebras used by the examples and tests.
//! - [`graded`]: graded algebras (raw or compiled from quivers with relations),
//!   graded modules and maps, shifts, duals, Hom spaces.
//! - [`functors`]: the change-of-grading functors `φ_!`, `φ^*`, `φ_*` along a
//!   group morphism, with explicit natural isomorphisms and adjunction data.
//! - [`homalg`]: minimal graded projective resolutions, Ext, projective and
//!   injective dimension verdicts, and verifiers for the regrading bounds.
//! - [`pid`]: closed-form injective dimensions over `k[t]` for the infinite-dimensional examples.
//! - [`harness`]: the TOML document format, random fixtures, campaigns and reports.

pub mod error;
pub mod fixtures;
pub mod functors;
pub mod graded;
pub mod groups;
pub mod harness;
pub mod homalg;
pub mod linalg;
pub mod pid;

pub use error::{Error, Result};
