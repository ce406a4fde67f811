//! Injective dimensions over k[t] and the sharpness of both bounds for Z -> 0.

use regrade::pid::{verify_sharpness, Atom, PidGradedModule};

fn main() -> regrade::Result<()> {
    let report = verify_sharpness();
    println!("n = cd(Z) = {}", report.n);
    for c in &report.cases {
        println!(
            "{:<24} graded {}  ungraded {}  left equality {}  right equality {}",
            c.module, c.graded, c.ungraded, c.left_equality, c.right_equality
        );
    }
    let m = PidGradedModule::new(vec![(Atom::T(3), 0), (Atom::F, -2)])?;
    let (g, u) = m.injective_dimensions();
    println!("{m}: graded {g}, ungraded {u}");
    assert!(report.passed());
    Ok(())
}
