// Invariant differential forms written in the coordinates of a separating
// map, checked against group elements and against a non-symmetry.

use coxinv::forms::{build_form, jacobian_form, pullback_deviation, FormTerm};
use coxinv::invariants::Polynomial;
use coxinv::linalg::Matrix;
use coxinv::reflection_groups::{CoxeterGroup, FiniteCoxeterGroup, Isometry};
use coxinv::root_systems::TypeLabel;
use coxinv::separator::build_separating_map;
use coxinv::Num;

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    let g = CoxeterGroup::finite(FiniteCoxeterGroup::of_type(TypeLabel::B, 2)?);
    let f = build_separating_map(&g)?;
    let n = f.output_dim;

    // F₁·dF₂, and F₂² · dF₁ ∧ dF₂.
    let one = build_form(&f, 1, vec![FormTerm { indices: vec![1], coefficient: Polynomial::var(n, 0) }])?;
    let two = build_form(&f, 2, vec![FormTerm { indices: vec![0, 1], coefficient: Polynomial::var(n, 1).pow(2) }])?;
    let top = jacobian_form(&f)?;

    let elements = g.enumerate()?;
    for (name, w) in [("degree 1", &one), ("degree 2", &two), ("jacobian", &top)] {
        let worst = elements.iter().map(|e| pullback_deviation(w, e, 30, 5)).fold(0.0, f64::max);
        println!("{name}: max pullback deviation over the group {worst:.2e}");
        assert!(worst < 1e-10);
    }

    let (s, c) = 10f64.to_radians().sin_cos();
    let rot =
        Isometry::linear(Matrix::from_rows(&[vec![Num::Float(c), Num::Float(-s)], vec![Num::Float(s), Num::Float(c)]]));
    let control = pullback_deviation(&top, &rot, 30, 5);
    println!("rotation by 10 degrees: deviation {control:.3e}");
    assert!(control > 1e-3);
    println!("descriptor {}", serde_json::to_string(&top.descriptor())?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
