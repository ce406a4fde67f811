//! Push a module forward along a group morphism and pull it back again.

use std::sync::Arc;

use regrade::fixtures;
use regrade::functors::{Pullback, Regrading};
use regrade::graded::GradedModule;
use regrade::groups::{FgAbelianGroup, GroupElement, GroupMorphism};
use regrade::linalg::FieldSpec;

fn dims(m: &GradedModule) -> String {
    let parts: Vec<String> = m.dims().iter().map(|(g, d)| format!("{g}: {d}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn main() -> regrade::Result<()> {
    let q = FieldSpec::Rationals;
    let kronecker = fixtures::kronecker(q)?.algebra;
    let sum = GroupMorphism::new(FgAbelianGroup::free(2), FgAbelianGroup::free(1), vec![vec![1, 1]])?;
    let r = Regrading::new(kronecker.clone(), sum)?;

    let p = GradedModule::projective(kronecker, 0, &GroupElement::new(vec![0, 0]))?;
    println!("P_1 over Z^2: {}", dims(&p));
    let pushed = Arc::new(r.pushforward(&p)?);
    println!("pushed to Z:  {}", dims(&pushed));

    match r.pullback(&pushed)? {
        Pullback::Materialized(m) => println!("pullback has finite support: {}", dims(&m)),
        Pullback::Lazy(lazy) => {
            println!("kernel {} is infinite, pulling back lazily:", r.kernel().group);
            for x in -2..=2 {
                let g = GroupElement::new(vec![x, -x]);
                println!("  dim at {g} = {}", lazy.component_dim(&g));
            }
        }
    }

    let reduce = GroupMorphism::new(FgAbelianGroup::cyclic(4)?, FgAbelianGroup::cyclic(2)?, vec![vec![1]])?;
    let a = fixtures::dual_numbers_in(q, FgAbelianGroup::cyclic(4)?, GroupElement::new(vec![1]))?.algebra;
    let r = Regrading::new(a.clone(), reduce)?;
    let regular = GradedModule::regular(a)?;
    let round = r.pullback_module(&r.pushforward(&regular)?)?;
    println!("Z/4 -> Z/2 round trip of k[x]/(x^2): {}", dims(&round));
    Ok(())
}
