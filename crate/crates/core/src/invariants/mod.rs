//! Generator systems of invariant functions: polynomial generators for finite
//! Coxeter groups and real trigonometric generators for affine Weyl groups.

pub mod polynomial;
pub mod trig;

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, numerical_rank, Vector};
use crate::num::{Num, NumKey};
use crate::reflection_groups::{decompose, AffineWeylGroup, Factor, FiniteCoxeterGroup, Isometry};
use crate::root_systems::{classical_degrees, coroot_dual_basis, WeightVector};
use crate::sampling::{rational_point, rng_for};

pub use polynomial::Polynomial;
pub use trig::TrigInvariant;

/// Relative singular-value threshold for the Jacobian rank certificate.
const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Invariant {
    Polynomial(Polynomial),
    Trig(TrigInvariant),
}

impl Invariant {
    /// Real value. Trig invariants contribute their real part.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Invariant::Polynomial(p) => p.eval(x),
            Invariant::Trig(t) => t.eval_complex(x).re,
        }
    }

    /// Imaginary part of the value; identically 0 for polynomials.
    pub fn eval_imag(&self, x: &[f64]) -> f64 {
        match self {
            Invariant::Polynomial(_) => 0.0,
            Invariant::Trig(t) => t.eval_complex(x).im,
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Invariant::Polynomial(p) => p.gradient(x),
            Invariant::Trig(t) => t.gradient_complex(x).iter().map(|c| c.re).collect(),
        }
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match self {
            Invariant::Polynomial(p) => p.hessian(x),
            Invariant::Trig(t) => t.hessian_complex(x).iter().map(|r| r.iter().map(|c| c.re).collect()).collect(),
        }
    }

    pub fn laplacian(&self, x: &[f64]) -> f64 {
        self.hessian(x).iter().enumerate().map(|(i, r)| r[i]).sum()
    }

    pub fn is_real(&self) -> bool {
        match self {
            Invariant::Polynomial(_) => true,
            Invariant::Trig(t) => t.realness_flag,
        }
    }
}

/// What each generator is: a homogeneous degree, or the fundamental weight
/// whose orbit average it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum GeneratorTag {
    Degree {
        degree: u32,
    },
    /// xᵢ itself, for ϱ(i) = i.
    Fixed {
        weight: usize,
    },
    /// ℜ xᵢ for the first index of a swapped pair.
    RealPart {
        weight: usize,
    },
    /// ℑ xᵢ for the second index of a swapped pair.
    ImagPart {
        weight: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSystem {
    pub factor: String,
    /// Ambient dimension of the factor's coordinates.
    pub dim: usize,
    pub generators: Vec<Invariant>,
    pub degrees_or_weights: Vec<GeneratorTag>,
    pub designated_point: Vec<f64>,
    /// ϱ (0-based) for affine systems.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub involution: Option<Vec<usize>>,
}

impl GeneratorSystem {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.generators.iter().map(|f| f.eval(x)).collect()
    }

    /// Rows are gradients.
    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.generators.iter().map(|f| f.gradient(x)).collect()
    }

    /// √det(J Jᵀ): the absolute Jacobian determinant on the span of the factor.
    pub fn jacobian_volume(&self, x: &[f64]) -> f64 {
        let j = rows_to_matrix(&self.jacobian(x), self.dim);
        (&j * j.transpose()).determinant().max(0.0).sqrt()
    }

    pub fn rank_at(&self, x: &[f64]) -> usize {
        numerical_rank(&rows_to_matrix(&self.jacobian(x), self.dim), 1e-9)
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.degrees_or_weights
            .iter()
            .filter_map(|t| match t {
                GeneratorTag::Degree { degree } => Some(*degree),
                _ => None,
            })
            .collect()
    }
}

fn rows_to_matrix(rows: &[Vec<f64>], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Orbit of `v` under the linear parts of `generators`, in discovery order.
pub fn vector_orbit(generators: &[Isometry], v: &[Num]) -> Vec<Vector> {
    let mut seen: HashSet<Vec<NumKey>> = HashSet::from([linalg::key(v)]);
    let mut out = vec![v.to_vec()];
    let mut i = 0;
    while i < out.len() {
        for g in generators {
            let u = g.linear.mul_vec(&out[i]);
            if seen.insert(linalg::key(&u)) {
                out.push(u);
            }
        }
        i += 1;
    }
    out
}

/// |W|⁻¹ Σ_w p∘w.
pub fn reynolds(p: &Polynomial, group: &FiniteCoxeterGroup) -> Result<Polynomial> {
    if p.nvars() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), got: p.nvars() });
    }
    let elements = group.enumerate()?;
    let inv = Num::ONE / Num::int(elements.len() as i64);
    let sum = elements.iter().fold(Polynomial::zero(p.nvars()), |acc, w| acc.add(&p.compose_linear(&w.linear)));
    Ok(sum.scale(inv))
}

/// Reynolds image of ⟨x, v⟩ᵈ: the average of ⟨x, u⟩ᵈ over the orbit of v.
fn orbit_power(orbit: &[Vector], d: u32) -> Polynomial {
    let inv = Num::ONE / Num::int(orbit.len() as i64);
    orbit
        .iter()
        .fold(Polynomial::zero(orbit[0].len()), |acc, u| acc.add(&Polynomial::linear_form_power(u, d)))
        .scale(inv)
}

/// Rank-many algebraically independent homogeneous invariants, found by a
/// degree search over Reynolds images of power sums with a Jacobian-rank
/// certificate at the designated regular point.
pub fn chevalley_generators(group: &FiniteCoxeterGroup) -> Result<GeneratorSystem> {
    let rs = &group.root_system;
    let label = Factor::Finite(group.clone()).label();
    let n = group.dim();
    let m = group.rank();
    if decompose(group.generators(), n)?.factors.len() != 1 {
        return Err(Error::NotIrreducible(label));
    }
    let bound = 2 * classical_degrees(rs.type_label, m).into_iter().max().unwrap_or(15);
    let proj = linalg::projector(&rs.simple_roots, n);
    let frame: Vec<Vector> = (0..n).map(|j| proj.col(j)).filter(|b| !linalg::is_zero(b)).collect();
    let mut seeds: Vec<Vec<Vec<Vector>>> = vec![frame.iter().map(|b| vector_orbit(group.generators(), b)).collect()];
    for g in coroot_dual_basis(rs)? {
        seeds.push(vec![vector_orbit(group.generators(), &g)]);
    }
    let generic = proj.mul_vec(&rational_point(&mut rng_for(0xC0FFEE, 0), n, 3, 7));
    let generic = if rs.is_exact() { generic } else { linalg::from_f64(&linalg::to_f64(&generic)) };
    seeds.push(vec![vector_orbit(group.generators(), &generic)]);

    let point = group.designated_point();
    let mut generators: Vec<Invariant> = Vec::new();
    let mut tags = Vec::new();
    let mut grads: Vec<Vec<f64>> = Vec::new();
    'degrees: for d in 2..=bound {
        for orbits in &seeds {
            let q = orbits.iter().fold(Polynomial::zero(n), |acc, o| acc.add(&orbit_power(o, d)));
            if q.is_zero() {
                continue;
            }
            let g = q.gradient(&point);
            // Float cancellation leaves residue far below the seed's own size.
            let scale: f64 =
                orbits.iter().map(|o| linalg::norm2(&o[0]).to_f64().powf(d as f64 / 2.0)).sum::<f64>() * d as f64;
            let norm = linalg::norm_f64(&g);
            if norm <= 1e-9 * scale {
                continue;
            }
            let mut trial = grads.clone();
            trial.push(g.iter().map(|v| v / norm).collect());
            if numerical_rank(&rows_to_matrix(&trial, n), RANK_TOL) == trial.len() {
                grads = trial;
                generators.push(Invariant::Polynomial(q));
                tags.push(GeneratorTag::Degree { degree: d });
                if generators.len() == m {
                    break 'degrees;
                }
            }
        }
    }
    if generators.len() < m {
        return Err(Error::IndependenceFailure { bound, found: generators.len(), needed: m });
    }
    Ok(GeneratorSystem {
        factor: label,
        dim: n,
        generators,
        degrees_or_weights: tags,
        designated_point: point,
        involution: None,
    })
}

/// S(e^{2πiγ}) = |W̄|⁻¹ Σ_w e^{2πi(w·γ)}, as an average over the W̄-orbit of γ.
pub fn averaging_operator(gamma: &WeightVector, group: &AffineWeylGroup) -> Result<TrigInvariant> {
    let lattice = &group.weight_lattice;
    lattice.integer_coordinates(&gamma.coords).ok_or(Error::WeightNotInLattice)?;
    let orbit = vector_orbit(group.finite_part.generators(), &gamma.coords);
    let c = Complex64::new(1.0 / orbit.len() as f64, 0.0);
    let terms = orbit
        .iter()
        .map(|u| Ok((lattice.integer_coordinates(u).ok_or(Error::WeightNotInLattice)?, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrigInvariant::new(weight_basis_f64(group), terms))
}

fn weight_basis_f64(group: &AffineWeylGroup) -> Vec<Vec<f64>> {
    group.fundamental_weights.iter().map(|w| linalg::to_f64(&w.coords)).collect()
}

/// ϱ with −γᵢ ∈ W̄·γ_{ϱ(i)}, 0-based.
pub fn weight_involution(group: &AffineWeylGroup) -> Result<Vec<usize>> {
    let weights = &group.fundamental_weights;
    let rho = weights
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let (folded, _) = group.finite_part.fold_to_chamber(&linalg::neg(&g.coords));
            weights.iter().position(|h| h.coords == folded).ok_or(Error::InvolutionNotFound(i))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = (0..rho.len()).find(|&i| rho[rho[i]] != i) {
        return Err(Error::InvolutionNotFound(i));
    }
    Ok(rho)
}

/// Real generators y: xᵢ for the ϱ-fixed indices, then ℜ xₐ and ℑ x_b over
/// the swapped pairs a < b = ϱ(a).
pub fn real_generators(group: &AffineWeylGroup) -> Result<GeneratorSystem> {
    let rho = weight_involution(group)?;
    let xs = group.fundamental_weights.iter().map(|g| averaging_operator(g, group)).collect::<Result<Vec<_>>>()?;
    let fixed: Vec<usize> = (0..rho.len()).filter(|&i| rho[i] == i).collect();
    let pairs: Vec<(usize, usize)> = (0..rho.len()).filter(|&i| rho[i] > i).map(|i| (i, rho[i])).collect();
    let mut generators = Vec::new();
    let mut tags = Vec::new();
    for &i in &fixed {
        generators.push(Invariant::Trig(xs[i].real_part()));
        tags.push(GeneratorTag::Fixed { weight: i });
    }
    for &(a, _) in &pairs {
        generators.push(Invariant::Trig(xs[a].real_part()));
        tags.push(GeneratorTag::RealPart { weight: a });
    }
    for &(_, b) in &pairs {
        generators.push(Invariant::Trig(xs[b].imag_part()));
        tags.push(GeneratorTag::ImagPart { weight: b });
    }
    let system = GeneratorSystem {
        factor: Factor::Affine(group.clone()).label(),
        dim: group.dim(),
        generators,
        degrees_or_weights: tags,
        designated_point: group.designated_point(),
        involution: Some(rho),
    };
    let found = system.rank_at(&system.designated_point);
    if found < group.rank() {
        return Err(Error::IndependenceFailure { bound: 0, found, needed: group.rank() });
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::from_ints;
    use crate::root_systems::TypeLabel;
    use crate::sampling::cube_point;
    use std::f64::consts::TAU;

    fn finite(t: TypeLabel, r: usize) -> FiniteCoxeterGroup {
        FiniteCoxeterGroup::of_type(t, r).unwrap()
    }

    fn affine(t: TypeLabel, r: usize) -> AffineWeylGroup {
        AffineWeylGroup::of_type(t, r).unwrap()
    }

    fn max_generator_deviation(sys: &GeneratorSystem, gens: &[Isometry], n: u64, r: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for s in 0..n {
            let x = cube_point(&mut rng_for(11, s), sys.dim, r);
            for g in gens {
                let gx = g.apply_f64(&x);
                for f in &sys.generators {
                    let fx = f.eval(&x);
                    worst = worst.max((f.eval(&gx) - fx).abs() / (1.0 + fx.abs()));
                }
            }
        }
        worst
    }

    #[test]
    fn reynolds_examples() {
        let a2 = finite(TypeLabel::A, 2);
        let r2 = (0..3).fold(Polynomial::zero(3), |acc, i| acc.add(&Polynomial::var(3, i).pow(2)));
        assert_eq!(reynolds(&r2, &a2).unwrap(), r2);

        let a1 = finite(TypeLabel::A, 1);
        assert!(reynolds(&Polynomial::var(2, 0).sub(&Polynomial::var(2, 1)), &a1).unwrap().is_zero());

        let g1 = &coroot_dual_basis(&a2.root_system).unwrap()[0];
        let cube = reynolds(&Polynomial::linear_form_power(g1, 3), &a2).unwrap();
        assert!(!cube.is_zero() && cube.degree() == 3);
        for s in 0..100 {
            let x = cube_point(&mut rng_for(3, s), 3, 2.0);
            for w in a2.enumerate().unwrap() {
                assert!((cube.eval(&w.apply_f64(&x)) - cube.eval(&x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reynolds_is_a_projection() {
        let b2 = finite(TypeLabel::B, 2);
        let p = Polynomial::linear_form_power(&from_ints(&[1, 2]), 4).add(&Polynomial::var(2, 0).pow(3));
        let once = reynolds(&p, &b2).unwrap();
        assert_eq!(reynolds(&once, &b2).unwrap(), once);
    }

    #[test]
    fn reynolds_in_a_dihedral_plane() {
        let i3 = finite(TypeLabel::I2(3), 2);
        let r2 = Polynomial::var(2, 0).pow(2).add(&Polynomial::var(2, 1).pow(2));
        let out = reynolds(&r2, &i3).unwrap();
        for (e, c) in out.terms() {
            let want = if e.iter().sum::<u32>() == 2 && e.contains(&2) { 1.0 } else { 0.0 };
            assert!((c.to_f64() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn a1_generator_is_the_square_of_the_root() {
        let sys = chevalley_generators(&finite(TypeLabel::A, 1)).unwrap();
        assert_eq!(sys.degrees(), vec![2]);
        let Invariant::Polynomial(p) = &sys.generators[0] else { panic!() };
        let root_sq = Polynomial::linear_form_power(&from_ints(&[1, -1]), 2);
        let ratio = p.terms().next().map(|(e, c)| {
            let (_, d) = root_sq.terms().find(|(f, _)| *f == e).unwrap();
            *c / *d
        });
        assert_eq!(p, &root_sq.scale(ratio.unwrap()));
    }

    #[test]
    fn classical_degrees_are_found() {
        for (t, r, want) in [
            (TypeLabel::A, 2, vec![2, 3]),
            (TypeLabel::B, 2, vec![2, 4]),
            (TypeLabel::G, 2, vec![2, 6]),
            (TypeLabel::A, 3, vec![2, 3, 4]),
            (TypeLabel::B, 3, vec![2, 4, 6]),
            (TypeLabel::D, 4, vec![2, 4, 4, 6]),
            (TypeLabel::I2(5), 2, vec![2, 5]),
        ] {
            let g = finite(t, r);
            let sys = chevalley_generators(&g).unwrap();
            assert_eq!(sys.degrees(), want, "{t}{r}");
            assert!(sys.jacobian_volume(&sys.designated_point) > 1e-8, "{t}{r}");
            assert!(max_generator_deviation(&sys, g.generators(), 50, 2.0) < 1e-10, "{t}{r}");
        }
    }

    #[test]
    fn a2_generators_agree_on_orbits() {
        let g = finite(TypeLabel::A, 2);
        let sys = chevalley_generators(&g).unwrap();
        let x = [0.3, -1.1, 0.45];
        let fx = sys.eval(&x);
        for w in g.enumerate().unwrap() {
            for (a, b) in sys.eval(&w.apply_f64(&x)).iter().zip(&fx) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reducible_input_is_rejected() {
        let err = chevalley_generators(&finite(TypeLabel::I2(2), 2)).unwrap_err();
        assert!(matches!(err, Error::NotIrreducible(_)));
    }

    #[test]
    fn averaging_examples() {
        let a1 = affine(TypeLabel::A, 1);
        let zero = WeightVector { coords: linalg::zeros(2) };
        let one = averaging_operator(&zero, &a1).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one.eval_complex(&[0.3, 0.9]).re - 1.0).abs() < 1e-15);

        let cos = averaging_operator(&a1.fundamental_weights[0], &a1).unwrap();
        assert_eq!(cos.len(), 2);
        assert!(cos.realness_flag);
        for &t in &[0.0, 0.2, 0.35] {
            // x = t·γ₁ has ⟨x, γ₁⟩ = t/2 since ‖γ₁‖² = ½.
            let x = [t / 2.0, -t / 2.0];
            assert!((cos.eval_complex(&x).re - (TAU * t / 2.0).cos()).abs() < 1e-14);
        }

        let a2 = affine(TypeLabel::A, 2);
        let x1 = averaging_operator(&a2.fundamental_weights[0], &a2).unwrap();
        assert_eq!(x1.len(), 3);
        assert!(!x1.realness_flag);

        let half = WeightVector { coords: linalg::scale(&a1.fundamental_weights[0].coords, Num::frac(1, 2)) };
        assert_eq!(averaging_operator(&half, &a1).unwrap_err(), Error::WeightNotInLattice);
    }

    #[test]
    fn fourier_term_count_is_orbit_size() {
        let g2 = affine(TypeLabel::G, 2);
        for w in &g2.fundamental_weights {
            let t = averaging_operator(w, &g2).unwrap();
            assert_eq!(t.len(), vector_orbit(g2.finite_part.generators(), &w.coords).len());
            assert_eq!(t.len(), 6);
        }
    }

    #[test]
    fn involutions() {
        assert_eq!(weight_involution(&affine(TypeLabel::A, 1)).unwrap(), vec![0]);
        assert_eq!(weight_involution(&affine(TypeLabel::A, 2)).unwrap(), vec![1, 0]);
        assert_eq!(weight_involution(&affine(TypeLabel::A, 3)).unwrap(), vec![2, 1, 0]);
        assert_eq!(weight_involution(&affine(TypeLabel::B, 2)).unwrap(), vec![0, 1]);
        assert_eq!(weight_involution(&affine(TypeLabel::D, 5)).unwrap(), vec![0, 1, 2, 4, 3]);
    }

    #[test]
    fn real_generator_examples() {
        let a1 = affine(TypeLabel::A, 1);
        let sys = real_generators(&a1).unwrap();
        assert_eq!(sys.len(), 1);
        let y = &sys.generators[0];
        let alpha_check = [1.0, -1.0];
        for s in 0..20 {
            let x = cube_point(&mut rng_for(5, s), 2, 3.0);
            let want = (TAU * (x[0] - x[1]) / 2.0).cos();
            assert!((y.eval(&x) - want).abs() < 1e-12);
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let shifted: Vec<f64> = x.iter().zip(&alpha_check).map(|(a, b)| a + b).collect();
            assert!((y.eval(&neg) - y.eval(&x)).abs() < 1e-12);
            assert!((y.eval(&shifted) - y.eval(&x)).abs() < 1e-12);
        }

        let a2 = affine(TypeLabel::A, 2);
        let sys = real_generators(&a2).unwrap();
        assert_eq!(
            sys.degrees_or_weights,
            vec![GeneratorTag::RealPart { weight: 0 }, GeneratorTag::ImagPart { weight: 1 }]
        );
        assert!(max_generator_deviation(&sys, a2.generators(), 200, 3.0) < 1e-10);

        let b2 = real_generators(&affine(TypeLabel::B, 2)).unwrap();
        assert_eq!(b2.degrees_or_weights, vec![GeneratorTag::Fixed { weight: 0 }, GeneratorTag::Fixed { weight: 1 }]);
    }

    #[test]
    fn affine_systems_are_real_invariant_and_independent() {
        for (t, r) in [(TypeLabel::A, 1), (TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2), (TypeLabel::C, 3)] {
            let g = affine(t, r);
            let sys = real_generators(&g).unwrap();
            assert_eq!(sys.len(), r);
            assert!(sys.generators.iter().all(Invariant::is_real));
            for s in 0..50 {
                let x = cube_point(&mut rng_for(8, s), g.dim(), 2.0);
                for f in &sys.generators {
                    assert!(f.eval_imag(&x).abs() < 1e-12);
                }
            }
            assert!(max_generator_deviation(&sys, g.generators(), 100, 2.0) < 1e-10, "{t}{r}");
            assert!(sys.jacobian_volume(&sys.designated_point) > 1e-8, "{t}{r}");
        }
    }

    #[test]
    fn json_is_tagged() {
        let sys = chevalley_generators(&finite(TypeLabel::A, 1)).unwrap();
        let s = serde_json::to_string(&sys).unwrap();
        assert!(s.contains(r#""kind":"polynomial""#) && s.contains(r#""role":"degree""#));
        assert_eq!(serde_json::from_str::<GeneratorSystem>(&s).unwrap(), sys);
    }
}
