// Polynomial invariants of finite groups: the Reynolds projection and a
// Chevalley basis with its Jacobian certificate.

use coxinv::invariants::{chevalley_generators, reynolds, Polynomial};
use coxinv::reflection_groups::FiniteCoxeterGroup;
use coxinv::root_systems::{classical_degrees, TypeLabel};

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    let b2 = FiniteCoxeterGroup::of_type(TypeLabel::B, 2)?;
    // x⁴ averages to (x⁴ + y⁴)/2 under the signed permutations.
    let x4 = Polynomial::var(2, 0).pow(4);
    let avg = reynolds(&x4, &b2)?;
    println!("R(x^4) = {}", serde_json::to_string(&avg)?);
    assert_eq!(reynolds(&avg, &b2)?, avg);

    for (label, rank) in
        [(TypeLabel::A, 3), (TypeLabel::B, 3), (TypeLabel::D, 4), (TypeLabel::G, 2), (TypeLabel::I2(5), 2)]
    {
        let g = FiniteCoxeterGroup::of_type(label, rank)?;
        let sys = chevalley_generators(&g)?;
        assert_eq!(sys.degrees(), classical_degrees(label, rank));
        let p = &sys.designated_point;
        println!(
            "{}: degrees {:?}, Jacobian volume {:.3e} at the designated point",
            sys.factor,
            sys.degrees(),
            sys.jacobian_volume(p)
        );
        // Invariance on one group element, checked numerically.
        let s = &g.generators()[0];
        let moved = s.apply_f64(p);
        let gap = sys.eval(p).iter().zip(sys.eval(&moved)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
