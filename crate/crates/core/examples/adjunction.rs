//! Unit, counit, triangle identities and Hom bijections for a finite-kernel regrading.

use std::sync::Arc;

use regrade::fixtures;
use regrade::functors::Regrading;
use regrade::graded::GradedModule;
use regrade::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use regrade::linalg::FieldSpec;

fn main() -> regrade::Result<()> {
    let z4 = FgAbelianGroup::cyclic(4)?;
    let a = fixtures::dual_numbers_in(FieldSpec::Rationals, z4.clone(), GroupElement::new(vec![1]))?.algebra;
    let phi = GroupMorphism::new(z4, FgAbelianGroup::cyclic(2)?, vec![vec![1]])?;
    let r = Regrading::new(a.clone(), phi)?;

    let m = Arc::new(GradedModule::regular(a.clone())?);
    let n = Arc::new(GradedModule::simple(r.target_algebra().clone(), 0, &GroupElement::new(vec![0]))?);
    let w = r.adjunction_witness(&m, &n)?;
    println!("Hom dimensions [phi_!M->N, M->phi*N, phi*N->M, N->phi_*M]: {:?}", w.hom_dims);
    println!("left triangle {}, right triangle {}", w.left_triangle, w.right_triangle);
    println!("bijections invertible: {} {}", w.left_invertible(), w.right_invertible());
    assert!(w.holds());
    Ok(())
}
