// The orbit-separating map of a product group, with its invariance,
// separation and oracle-consistency checks.

use coxinv::reflection_groups::{AffineWeylGroup, CoxeterGroup, Factor, FiniteCoxeterGroup};
use coxinv::root_systems::TypeLabel;
use coxinv::separator::{
    build_separating_map, check_invariance, check_oracle_consistency, check_separation, INVARIANCE_TOL, SEPARATION_TOL,
};

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    // Affine A1 on ℝ², finite G2 on ℝ², one fixed coordinate.
    let group = CoxeterGroup::product(
        vec![
            Factor::Affine(AffineWeylGroup::of_type(TypeLabel::A, 1)?),
            Factor::Finite(FiniteCoxeterGroup::of_type(TypeLabel::G, 2)?),
        ],
        1,
    );
    let f = build_separating_map(&group)?;
    println!("ambient dim {}, output dim {}, blocks {}", f.dim(), f.output_dim, f.blocks.len());
    for (i, b) in f.blocks.iter().enumerate() {
        println!("  block {i}: {} at offset {}, outputs {:?}", b.system.factor, b.offset, f.block_range(i));
    }

    let inv = check_invariance(&f, &group, 300, INVARIANCE_TOL, 7);
    let sep = check_separation(&f, &group, 300, SEPARATION_TOL, 7);
    let con = check_oracle_consistency(&f, &group, 100, SEPARATION_TOL, 7);
    println!(
        "invariance {:.2e} ({}), separation min {:.3e} ({}), disagreements {}",
        inv.max_deviation, inv.pass, sep.separation_min, sep.pass, con.disagreements
    );
    assert!(inv.pass && sep.pass && con.pass);

    // Dropping a monomial from a G2 invariant breaks it: the control must fail.
    let broken = f.corrupted(1, 0);
    let bad = check_invariance(&broken, &group, 300, INVARIANCE_TOL, 7);
    println!("corrupted map invariance {:.2e} (pass = {})", bad.max_deviation, bad.pass);
    assert!(!bad.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
