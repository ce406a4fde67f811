//! The pulled-back pushforward splits into shifted copies of the module.

use regrade::fixtures;
use regrade::functors::Regrading;
use regrade::graded::GradedModule;
use regrade::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use regrade::linalg::FieldSpec;

fn main() -> regrade::Result<()> {
    let q = FieldSpec::Rationals;
    let z4 = FgAbelianGroup::cyclic(4)?;
    let a = fixtures::dual_numbers_in(q, z4.clone(), GroupElement::new(vec![1]))?.algebra;
    let r = Regrading::new(a.clone(), GroupMorphism::new(z4, FgAbelianGroup::cyclic(2)?, vec![vec![1]])?)?;
    let m = GradedModule::regular(a)?;
    let sum = r.decomposition_iso(&m, None)?;
    let product = r.product_decomposition_check(&m)?;
    println!("finite kernel: sum form holds {}, product form holds {}", sum.holds(), product.holds());

    let dual = fixtures::dual_numbers(q)?.algebra;
    let z = FgAbelianGroup::free(1);
    let collapse = GroupMorphism::new(z, FgAbelianGroup::trivial(), vec![])?;
    let r = Regrading::new(dual.clone(), collapse)?;
    let m = GradedModule::regular(dual)?;
    let c = r.decomposition_iso(&m, Some(4))?;
    println!("kernel Z, window 4: {} degrees checked, holds {}", c.degrees_checked.len(), c.holds());
    match r.decomposition_iso(&m, Some(0)) {
        Err(e) => println!("window 0: {e}"),
        Ok(c) => println!("window 0: holds {}", c.holds()),
    }
    Ok(())
}
