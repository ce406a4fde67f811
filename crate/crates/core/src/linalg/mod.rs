//! Exact linear algebra over the rationals and prime fields.
//!
//! Everything downstream reduces to rank and kernel computations here. There is
//! no floating point anywhere; rationals use arbitrary-precision integers.

mod field;
mod matrix;

pub use field::{FieldSpec, Scalar};
pub use matrix::{Echelon, Matrix, SubspaceBasis};
