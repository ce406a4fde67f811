//! Minimal graded projective resolutions and Ext dimensions.

use std::sync::Arc;

use regrade::fixtures;
use regrade::graded::GradedModule;
use regrade::groups::GroupElement;
use regrade::homalg::{ext_dims, graded_injective_dimension, minimal_resolution, projective_dimension};
use regrade::linalg::FieldSpec;

fn main() -> regrade::Result<()> {
    let square = fixtures::commutative_square(FieldSpec::Rationals)?.algebra;
    let zero = GroupElement::new(vec![0, 0]);
    let s1 = Arc::new(GradedModule::simple(square.clone(), 0, &zero)?);
    let res = minimal_resolution(&s1, 8)?;
    for i in 0..res.terms().len() {
        let terms: Vec<String> = res
            .summands(i)
            .iter()
            .map(|(v, s)| format!("P{}({s})", square.vertex_label(*v).unwrap_or("?")))
            .collect();
        println!("P_{i} = {}", terms.join(" + "));
    }
    println!("pd S1 = {}", projective_dimension(&s1, 8)?);
    println!("id S1 = {}", graded_injective_dimension(&s1, 8)?);

    for (v, name) in [(1, "S2"), (3, "S4")] {
        for shift in [vec![-1, 0], vec![-1, -1]] {
            let s = Arc::new(GradedModule::simple(square.clone(), v, &GroupElement::new(shift.clone()))?);
            println!("dim Ext^i(S1, {name}({shift:?})) = {:?}", ext_dims(&res, &s)?);
        }
    }

    let dual = fixtures::dual_numbers(FieldSpec::Rationals)?.algebra;
    let top = Arc::new(GradedModule::simple(dual, 0, &GroupElement::new(vec![0]))?);
    println!("over k[x]/(x^2), pd k = {}", projective_dimension(&top, 6)?);
    Ok(())
}
