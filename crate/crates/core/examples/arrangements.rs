// Reflection arrangements: chamber counts for finite groups and the periodic
// arrangement of an affine group, with invariance under the group.

use coxinv::arrangements::{alcove_coordinates, arrangement_of};
use coxinv::reflection_groups::{AffineWeylGroup, CoxeterGroup, FiniteCoxeterGroup};
use coxinv::root_systems::TypeLabel;
use coxinv::Num;

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    for (label, rank) in [(TypeLabel::A, 3), (TypeLabel::B, 3), (TypeLabel::I2(5), 2)] {
        let g = FiniteCoxeterGroup::of_type(label, rank)?;
        let order = g.classified_order();
        let arr = arrangement_of(&CoxeterGroup::finite(g))?;
        let chambers = arr.count_chambers(0)?;
        assert_eq!(chambers as u128, order);
        println!("{label}{rank}: {} hyperplanes, {chambers} chambers", arr.len());
    }

    let b2 = AffineWeylGroup::of_type(TypeLabel::B, 2)?;
    let group = CoxeterGroup::affine(b2.clone());
    let arr = arrangement_of(&group)?;
    for r in [1.0, 10.0] {
        let members = arr.members_in_ball(r).len();
        let invariant = group.generators().iter().all(|g| arr.is_invariant(g, r));
        println!("affine B2: {members} hyperplanes meet the ball of radius {r}, invariant = {invariant}");
    }
    let x = vec![Num::frac(31, 10), Num::frac(-7, 4)];
    println!("chamber of {x:?}: {:?}", arr.chamber_of(&x));
    let (_, coords) = alcove_coordinates(&b2, &x)?;
    println!("alcove translation coordinates {coords:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
