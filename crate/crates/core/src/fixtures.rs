//! Small quiver algebras used throughout the examples and tests.

use std::sync::Arc;

use crate::error::Result;
use crate::graded::{GradedAlgebra, QuiverPresentation};
use crate::groups::{FgAbelianGroup, GroupElement};
use crate::linalg::FieldSpec;

/// A compiled quiver algebra together with its presentation.
#[derive(Clone, Debug)]
pub struct QuiverAlgebra {
    pub quiver: QuiverPresentation,
    pub algebra: Arc<GradedAlgebra>,
}

const CAP: usize = 16;

fn finish(quiver: QuiverPresentation) -> Result<QuiverAlgebra> {
    let algebra = Arc::new(quiver.compile(CAP)?);
    Ok(QuiverAlgebra { quiver, algebra })
}

/// `k[x]/(x^2)` with `x` in degree `degree` of `group`.
pub fn dual_numbers_in(field: FieldSpec, group: FgAbelianGroup, degree: GroupElement) -> Result<QuiverAlgebra> {
    let mut q = QuiverPresentation::new(field, group, vec!["e".into()]);
    q.add_arrow("x", 0, 0, degree)?;
    q.add_relation(&[(field.one(), vec!["x", "x"])])?;
    finish(q)
}

/// `k[x]/(x^2)` graded by `Z` with `deg x = 1`.
pub fn dual_numbers(field: FieldSpec) -> Result<QuiverAlgebra> {
    dual_numbers_in(field, FgAbelianGroup::free(1), GroupElement::new(vec![1]))
}

/// The Kronecker quiver `1 ⇉ 2` with arrows `a`, `b` in degrees `(1,0)`, `(0,1)` of `Z^2`.
pub fn kronecker(field: FieldSpec) -> Result<QuiverAlgebra> {
    let mut q = QuiverPresentation::new(field, FgAbelianGroup::free(2), vec!["1".into(), "2".into()]);
    q.add_arrow("a", 0, 1, GroupElement::new(vec![1, 0]))?;
    q.add_arrow("b", 0, 1, GroupElement::new(vec![0, 1]))?;
    finish(q)
}

/// The commutative square `1 -> 2 -> 4`, `1 -> 3 -> 4` graded by `Z^2`.
pub fn commutative_square(field: FieldSpec) -> Result<QuiverAlgebra> {
    let vertices = ["1", "2", "3", "4"].map(String::from).to_vec();
    let mut q = QuiverPresentation::new(field, FgAbelianGroup::free(2), vertices);
    q.add_arrow("a", 0, 1, GroupElement::new(vec![1, 0]))?;
    q.add_arrow("b", 1, 3, GroupElement::new(vec![0, 1]))?;
    q.add_arrow("c", 0, 2, GroupElement::new(vec![0, 1]))?;
    q.add_arrow("d", 2, 3, GroupElement::new(vec![1, 0]))?;
    q.add_relation(&[(field.one(), vec!["a", "b"]), (field.from_i64(-1), vec!["c", "d"])])?;
    finish(q)
}

/// `k[x, y]/(x^2, y^2, xy - yx)` graded by `Z^2` with `deg x = (1,0)`, `deg y = (0,1)`.
pub fn exterior_pair(field: FieldSpec) -> Result<QuiverAlgebra> {
    let mut q = QuiverPresentation::new(field, FgAbelianGroup::free(2), vec!["e".into()]);
    q.add_arrow("x", 0, 0, GroupElement::new(vec![1, 0]))?;
    q.add_arrow("y", 0, 0, GroupElement::new(vec![0, 1]))?;
    q.add_relation(&[(field.one(), vec!["x", "x"])])?;
    q.add_relation(&[(field.one(), vec!["y", "y"])])?;
    q.add_relation(&[(field.one(), vec!["x", "y"]), (field.from_i64(-1), vec!["y", "x"])])?;
    finish(q)
}

/// The one-vertex quiver without arrows: the field itself, graded by `group`.
pub fn ground_field(field: FieldSpec, group: FgAbelianGroup) -> Result<QuiverAlgebra> {
    finish(QuiverPresentation::new(field, group, vec!["e".into()]))
}
