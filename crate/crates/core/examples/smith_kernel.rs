//! Smith normal form, kernels of group morphisms and their cohomological dimension.

use regrade::groups::{cohomological_dimension, smith_normal_form, FgAbelianGroup, GroupMorphism, IntMatrix};

fn main() -> regrade::Result<()> {
    let m = IntMatrix::from_i64(2, 3, &[vec![2, 4, 4], vec![-6, 6, 12]]);
    let snf = smith_normal_form(&m);
    println!("invariant factors: {:?}", snf.invariants.iter().map(ToString::to_string).collect::<Vec<_>>());
    assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diagonal);

    let z2 = FgAbelianGroup::free(2);
    let z = FgAbelianGroup::free(1);
    let sum = GroupMorphism::new(z2.clone(), z, vec![vec![1, 1]])?;
    let kernel = sum.kernel();
    println!("ker(Z^2 -> Z, sum) = {} generated by {}", kernel.group, kernel.inclusion.apply(&kernel.group.generator(0)));

    let z4 = FgAbelianGroup::cyclic(4)?;
    let z2t = FgAbelianGroup::cyclic(2)?;
    let reduce = GroupMorphism::new(z4, z2t, vec![vec![1]])?;
    println!("ker(Z/4 -> Z/2) = {}", reduce.kernel().group);

    for (name, group) in [("0", FgAbelianGroup::trivial()), ("Z", FgAbelianGroup::free(1)), ("Z^2", z2)] {
        println!("cd({name}) = {}", cohomological_dimension(&group, 0));
    }
    let c2 = FgAbelianGroup::cyclic(2)?;
    println!("cd(Z/2) over F_2 = {}, over F_3 = {}", cohomological_dimension(&c2, 2), cohomological_dimension(&c2, 3));
    Ok(())
}
