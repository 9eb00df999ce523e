// The transnormal structure of a separating map: orbit-constant Gram matrix,
// bracket closure, and the closed form for affine A1.

use coxinv::linalg;
use coxinv::reflection_groups::{AffineWeylGroup, CoxeterGroup, FiniteCoxeterGroup};
use coxinv::root_systems::{fundamental_weights, TypeLabel};
use coxinv::separator::build_separating_map;
use coxinv::transnormal::{check_transnormal, gram_matrix, regular_rank};

type Outcome = Result<(), Box<dyn std::error::Error>>;

pub fn run_example() -> Outcome {
    let groups = [
        CoxeterGroup::finite(FiniteCoxeterGroup::of_type(TypeLabel::B, 2)?),
        CoxeterGroup::affine(AffineWeylGroup::of_type(TypeLabel::A, 2)?),
    ];
    for g in &groups {
        let f = build_separating_map(g)?;
        let r = check_transnormal(&f, g, 100, 1e-8, 1e-8, 3);
        println!(
            "{}: gram deviation {:.2e}, bracket residual {:.2e}, gradient error {:.2e}, pass = {}",
            f.blocks[0].system.factor, r.gram.gram_deviation, r.bracket.max_residual, r.gradient_error, r.pass
        );
        assert!(r.pass);
        println!(
            "  rank at origin {}, at designated point {}",
            regular_rank(&f, &vec![0.0; g.dim()]),
            regular_rank(&f, &g.designated_point())
        );
    }

    // Affine A1: ‖∇f‖² = 4π²‖γ‖²(1 − f²) for f = cos 2π⟨x, γ⟩.
    let a1 = AffineWeylGroup::of_type(TypeLabel::A, 1)?;
    let gamma2 = linalg::norm2(&fundamental_weights(a1.root_system())?[0].coords).to_f64();
    let f = build_separating_map(&CoxeterGroup::affine(a1))?;
    let i = f.block_range(0).start;
    for x in [[0.1, -0.1], [0.37, 0.05], [-1.2, 0.4]] {
        let y = f.eval(&x)[i];
        let b = gram_matrix(&f, &x)[i][i];
        let closed = 4.0 * std::f64::consts::PI.powi(2) * gamma2 * (1.0 - y * y);
        println!("  x = {x:?}: b = {b:.12}, closed form = {closed:.12}");
        assert!((b - closed).abs() < 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
