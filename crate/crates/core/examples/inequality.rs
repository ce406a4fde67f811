//! Injective dimension before and after regrading, on random modules.

use std::sync::Arc;

use regrade::fixtures;
use regrade::functors::Regrading;
use regrade::groups::{FgAbelianGroup, GroupMorphism};
use regrade::harness::random_module;
use regrade::linalg::FieldSpec;

fn main() -> regrade::Result<()> {
    let square = fixtures::commutative_square(FieldSpec::Rationals)?.algebra;
    let z2 = FgAbelianGroup::free(2);
    let morphisms = [
        ("identity", GroupMorphism::identity(&z2)),
        ("sum", GroupMorphism::new(z2.clone(), FgAbelianGroup::free(1), vec![vec![1, 1]])?),
        ("collapse", GroupMorphism::new(z2, FgAbelianGroup::trivial(), vec![])?),
    ];
    for (name, phi) in morphisms {
        let r = Regrading::new(square.clone(), phi)?;
        for seed in 0..4 {
            let m = Arc::new(random_module(&square, seed, 6, 1)?);
            let rep = r.verify_inequality(&m, 8)?;
            println!(
                "{name:<8} seed {seed}: dim {:>2}  d_G = {}  d_G' = {}  n = {}  lower {}  upper {}  equal {}",
                m.total_dim(),
                rep.d_g,
                rep.d_g_prime,
                rep.n,
                rep.lower,
                rep.upper,
                rep.equality
            );
        }
    }
    Ok(())
}
