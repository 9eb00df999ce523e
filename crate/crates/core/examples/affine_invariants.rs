// Exponential invariants of affine Weyl groups: orbit averages of characters,
// the weight involution, and the real generator system built from them.

use coxinv::invariants::{averaging_operator, real_generators, weight_involution, GeneratorTag};
use coxinv::reflection_groups::AffineWeylGroup;
use coxinv::root_systems::{fundamental_weights, TypeLabel};

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    for (label, rank) in [(TypeLabel::A, 1), (TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2), (TypeLabel::A, 3)]
    {
        let g = AffineWeylGroup::of_type(label, rank)?;
        let weights = fundamental_weights(g.root_system())?;
        let sizes: Vec<usize> =
            weights.iter().map(|w| averaging_operator(w, &g).map(|t| t.len())).collect::<Result<_, _>>()?;
        println!("affine {label}{rank}: Fourier terms per weight {sizes:?}, involution {:?}", weight_involution(&g)?);

        let sys = real_generators(&g)?;
        let roles: Vec<String> = sys
            .degrees_or_weights
            .iter()
            .map(|t| match t {
                GeneratorTag::Fixed { weight } => format!("x{weight}"),
                GeneratorTag::RealPart { weight } => format!("Re x{weight}"),
                GeneratorTag::ImagPart { weight } => format!("Im x{weight}"),
                GeneratorTag::Degree { degree } => format!("deg {degree}"),
            })
            .collect();
        let p = &sys.designated_point;
        assert_eq!(sys.rank_at(p), rank);
        assert!(sys.generators.iter().all(|f| f.is_real()));
        println!("  generators {roles:?}, values {:?}", sys.eval(p));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
