//! Compile a graded quiver with relations into a finite-dimensional algebra and
//! build a representation of it.

use std::sync::Arc;

use regrade::graded::{GradedModule, QuiverPresentation, Representation};
use regrade::groups::{FgAbelianGroup, GroupElement};
use regrade::linalg::{FieldSpec, Matrix};

fn main() -> regrade::Result<()> {
    let q = FieldSpec::Rationals;
    let vertices = ["1", "2", "3", "4"].map(String::from).to_vec();
    let mut quiver = QuiverPresentation::new(q, FgAbelianGroup::free(2), vertices);
    quiver.add_arrow("a", 0, 1, GroupElement::new(vec![1, 0]))?;
    quiver.add_arrow("b", 1, 3, GroupElement::new(vec![0, 1]))?;
    quiver.add_arrow("c", 0, 2, GroupElement::new(vec![0, 1]))?;
    quiver.add_arrow("d", 2, 3, GroupElement::new(vec![1, 0]))?;
    quiver.add_relation(&[(q.one(), vec!["a", "b"]), (q.from_i64(-1), vec!["c", "d"])])?;

    let algebra = Arc::new(quiver.compile(16)?);
    println!("dimension {}", algebra.dim());
    for i in 0..algebra.dim() {
        println!("  {:<4} degree {}", algebra.label(i), algebra.degree(i));
    }
    println!("{}", algebra.validate());

    // a thin representation: k at every vertex in the degree of the path from 1
    let g = |x, y| GroupElement::new(vec![x, y]);
    let mut rep = Representation::default();
    for (v, d) in [(0, g(0, 0)), (1, g(1, 0)), (2, g(0, 1)), (3, g(1, 1))] {
        rep.spaces.insert((v, d), 1);
    }
    let one = Matrix::from_i64(q, &[vec![1]]);
    rep.maps.insert((0, g(0, 0)), one.clone());
    rep.maps.insert((1, g(1, 0)), one.clone());
    rep.maps.insert((2, g(0, 0)), one.clone());
    rep.maps.insert((3, g(0, 1)), one);
    let m = rep.to_module(&quiver, algebra.clone())?;
    println!("representation: total dim {}, valid: {}", m.total_dim(), m.validate().is_ok());

    let p1 = GradedModule::projective(algebra, 0, &g(0, 0))?;
    println!("P_1 and the representation agree: {}", p1.same_structure(&m));
    Ok(())
}
