// Finite and affine reflection groups: enumeration, folding into the
// dominant chamber or fundamental alcove, and the word that does it.

use coxinv::linalg;
use coxinv::reflection_groups::{AffineWeylGroup, FiniteCoxeterGroup};
use coxinv::root_systems::TypeLabel;
use coxinv::Num;

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    for m in 3..=6 {
        let g = FiniteCoxeterGroup::of_type(TypeLabel::I2(m), 2)?;
        println!("I2({m}) has {} elements", g.enumerate()?.len());
    }

    let b3 = FiniteCoxeterGroup::of_type(TypeLabel::B, 3)?;
    let x = linalg::from_ints(&[-3, 1, -2]);
    let (folded, word) = b3.fold_to_chamber(&x);
    assert!(b3.in_dominant_chamber(&folded));
    assert_eq!(b3.word_isometry(&word).apply(&x), folded);
    println!("B3 folds {x:?} to {folded:?} with word {word:?}");

    let a2 = AffineWeylGroup::of_type(TypeLabel::A, 2)?;
    let y = vec![Num::frac(17, 5), Num::frac(-3, 7), Num::frac(-104, 35)];
    let (alcove_point, steps) = a2.fold_to_alcove(&y);
    assert!(a2.in_alcove(&alcove_point));
    assert_eq!(a2.word_isometry(&steps).apply(&y), alcove_point);
    println!("affine A2 folds in {} steps to {:?}", steps.len(), linalg::to_f64(&alcove_point));

    // Every affine element factors uniquely as (finite part, coroot translation).
    let g = a2.element(&a2.finite_part.enumerate()?[3], &[2, -1]);
    let (w, coords) = a2.factor(&g)?;
    assert_eq!(coords, vec![2, -1]);
    assert!(w.approx_eq(&a2.finite_part.enumerate()?[3], 1e-12));
    println!("factorization recovers translation {coords:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
