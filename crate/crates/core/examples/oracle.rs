// Brute-force orbits as ground truth, and an audit of a separating map
// against them.

use coxinv::oracle::{bounded_affine_orbit, finite_orbit, oracle_separation_audit};
use coxinv::reflection_groups::{AffineWeylGroup, CoxeterGroup, FiniteCoxeterGroup};
use coxinv::root_systems::TypeLabel;
use coxinv::separator::build_separating_map;
use coxinv::{linalg, Num};

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    let a3 = CoxeterGroup::finite(FiniteCoxeterGroup::of_type(TypeLabel::A, 3)?);
    for p in [[1, 0, 0, 0], [1, 1, 0, 0], [3, 2, 1, 0]] {
        println!("A3 orbit of {p:?}: {} points", finite_orbit(&a3, &linalg::from_ints(&p))?.len());
    }

    let a2 = AffineWeylGroup::of_type(TypeLabel::A, 2)?;
    let x = vec![Num::frac(1, 7), Num::frac(2, 11), Num::frac(-1, 5)];
    for r in 1..=3 {
        println!(
            "affine A2 orbit within lattice radius {r}: {} points",
            bounded_affine_orbit(&a2, &x, r)?.points.len()
        );
    }

    let group = CoxeterGroup::affine(a2);
    let f = build_separating_map(&group)?;
    let audit = oracle_separation_audit(&f, &group, 20, 3, 11)?;
    println!(
        "audit over {} orbit points: constancy {:.2e}, distinctness {:.3e}, pass = {}",
        audit.orbit_points, audit.constancy_deviation, audit.distinctness_min, audit.pass
    );
    assert!(audit.pass);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
