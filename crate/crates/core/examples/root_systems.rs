// Root data for the crystallographic types: simple roots, Cartan matrix,
// fundamental weights and the two lattices.

use coxinv::root_systems::{build_root_system, fundamental_weights, lattices, weight_coroot_invariants, TypeLabel};
use coxinv::{linalg, Num};

type Outcome = Result<(), Box<dyn std::error::Error>>;

fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn run_example() -> Outcome {
    for (label, rank) in [(TypeLabel::A, 2), (TypeLabel::B, 3), (TypeLabel::G, 2)] {
        let rs = build_root_system(label, rank)?;
        rs.validate()?;
        println!("{label}{rank}: {} positive roots, |W| = {}", rs.positive_roots.len(), rs.classified_order());
        for row in rs.cartan_integer().unwrap_or_default() {
            println!("  cartan {row:?}");
        }
        println!("  highest root {}", fmt_vec(&rs.highest_root()));

        let weights = fundamental_weights(&rs)?;
        for (i, w) in weights.iter().enumerate() {
            println!("  weight {i}: {}", fmt_vec(&w.coords));
        }
        // ⟨γᵢ, α̌ⱼ⟩ = δᵢⱼ.
        for (i, w) in weights.iter().enumerate() {
            for (j, c) in rs.simple_coroots().iter().enumerate() {
                assert_eq!(linalg::dot(&w.coords, c), Num::int((i == j) as i64));
            }
        }
        // Γ ⊂ Γ* only when the coroots pair integrally with each other.
        let (coroot, weight) = lattices(&rs)?;
        println!(
            "  lattice ranks {} and {}, invariants of Γ*/Γ: {:?}",
            coroot.rank(),
            weight.rank(),
            weight_coroot_invariants(&rs)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Outcome {
    run_example()
}
