//! The two-term resolution of a module by regraded copies when the kernel is Z.

use regrade::fixtures;
use regrade::functors::Regrading;
use regrade::graded::GradedModule;
use regrade::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use regrade::linalg::FieldSpec;

fn main() -> regrade::Result<()> {
    let kronecker = fixtures::kronecker(FieldSpec::Rationals)?.algebra;
    let sum = GroupMorphism::new(FgAbelianGroup::free(2), FgAbelianGroup::free(1), vec![vec![1, 1]])?;
    let r = Regrading::new(kronecker, sum)?;
    let target = r.target_algebra().clone();
    for v in 0..2 {
        let n = GradedModule::projective(target.clone(), v, &GroupElement::new(vec![0]))?;
        let res = r.rank1_regrade_resolution(&n, 4)?;
        println!(
            "P_{} over Z: kernel generator {}, {} degrees, interior slots {:?}, exact {}",
            v + 1,
            res.kernel_generator,
            res.degrees.len(),
            res.interior,
            res.exact()
        );
    }
    Ok(())
}
