//! Numerical checks of the transnormal-map conditions for a separating map:
//! gradient Gram matrices constant along orbits, brackets of gradient fields
//! closing on the span of the gradients, and constant Laplacians on orbits.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::linalg::numerical_rank;
use crate::reflection_groups::{CoxeterGroup, Isometry};
use crate::sampling::{cube_point, rng_for};
use crate::separator::SeparatingMap;

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-5;
/// Samples whose smallest singular value of dF is below this are skipped by
/// the bracket check.
pub const REGULARITY_GATE: f64 = 1e-4;
const SAMPLE_RADIUS: f64 = 1.0;

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let cols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// bᵢⱼ(x) = ⟨∇fᵢ(x), ∇fⱼ(x)⟩.
pub fn gram_matrix(f: &SeparatingMap, x: &[f64]) -> Vec<Vec<f64>> {
    let j = to_matrix(&f.jacobian(x));
    let g = &j * j.transpose();
    (0..g.nrows()).map(|r| g.row(r).iter().copied().collect()).collect()
}

/// Numerical rank of dF(x), singular values below 1e−9·σ_max dropped.
pub fn regular_rank(f: &SeparatingMap, x: &[f64]) -> usize {
    numerical_rank(&to_matrix(&f.jacobian(x)), 1e-9)
}

fn smallest_singular_value(f: &SeparatingMap, x: &[f64]) -> f64 {
    let j = to_matrix(&f.jacobian(x));
    j.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Central-difference gradient of output `i`.
pub fn fd_gradient(f: &SeparatingMap, i: usize, x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|k| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[k] += FD_STEP;
            m[k] -= FD_STEP;
            (f.eval(&p)[i] - f.eval(&m)[i]) / (2.0 * FD_STEP)
        })
        .collect()
}

/// Largest ‖∇fᵢ − ∇_fd fᵢ‖ / max(‖∇fᵢ‖, 1) over outputs at `x`.
pub fn gradient_error(f: &SeparatingMap, x: &[f64]) -> f64 {
    (0..f.output_dim)
        .map(|i| {
            let a = f.gradient(i, x);
            let d = fd_gradient(f, i, x);
            let diff = a.iter().zip(&d).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            let norm = a.iter().map(|p| p * p).sum::<f64>().sqrt();
            diff / norm.max(1.0)
        })
        .fold(0.0, f64::max)
}

/// [∇fᵢ, ∇fⱼ] = Hⱼ∇fᵢ − Hᵢ∇fⱼ.
pub fn bracket(f: &SeparatingMap, i: usize, j: usize, x: &[f64]) -> Vec<f64> {
    let gi = DVector::from_vec(f.gradient(i, x));
    let gj = DVector::from_vec(f.gradient(j, x));
    let hi = to_matrix(&f.hessian(i, x));
    let hj = to_matrix(&f.hessian(j, x));
    (hj * gi - hi * gj).iter().copied().collect()
}

/// Largest relative norm ‖v⊥‖ / (1 + ‖v‖) of the part of a bracket
/// orthogonal to span{∇f₁, …, ∇fₙ} at `x`.
pub fn bracket_residual(f: &SeparatingMap, x: &[f64]) -> f64 {
    let jt = to_matrix(&f.jacobian(x)).transpose();
    let svd = jt.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 1e-9 * smax).collect();
    let mut worst: f64 = 0.0;
    for i in 0..f.output_dim {
        for j in i + 1..f.output_dim {
            let v = DVector::from_vec(bracket(f, i, j, x));
            let mut r = v.clone();
            for &k in &keep {
                let c = u.column(k);
                r -= c * c.dot(&v);
            }
            worst = worst.max(r.norm() / (1.0 + v.norm()));
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitPair {
    /// Sample stream; replay with `rng_for(seed, stream)`.
    pub stream: u64,
    pub x: Vec<f64>,
    /// Generator indices applied to x, first to last.
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub sample_orbit_pairs: Vec<OrbitPair>,
    /// max |bᵢⱼ(x) − bᵢⱼ(y)| / (1 + max |bᵢⱼ(x)|).
    pub gram_deviation: f64,
    /// Rank of dF at each base sample.
    pub regularity: Vec<usize>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketReport {
    /// Per regular sample (stream, residual).
    pub residuals: Vec<(u64, f64)>,
    pub max_residual: f64,
    pub skipped_singular: usize,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LaplacianReport {
    /// max |Δfᵢ(x) − Δfᵢ(y)| / (1 + |Δfᵢ(x)|) over orbit pairs.
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransnormalReport {
    pub seed: u64,
    pub gram: GramReport,
    pub bracket: BracketReport,
    pub laplacian: LaplacianReport,
    /// Largest analytic vs finite-difference gradient error at the samples.
    pub gradient_error: f64,
    pub pass: bool,
}

fn apply_word(gens: &[Isometry], word: &[usize], x: &[f64]) -> Vec<f64> {
    word.iter().fold(x.to_vec(), |p, &k| gens[k].apply_f64(&p))
}

/// Certify the Gram condition on orbit pairs (x, g·x), bracket closure at
/// regular samples, and the Laplacian refinement.
pub fn check_transnormal(
    f: &SeparatingMap,
    group: &CoxeterGroup,
    n_pairs: usize,
    tol_gram: f64,
    tol_bracket: f64,
    seed: u64,
) -> TransnormalReport {
    let gens = group.generators();
    let n = group.dim();
    let mut pairs = Vec::with_capacity(n_pairs);
    let mut regularity = Vec::with_capacity(n_pairs);
    let mut gram_dev: f64 = 0.0;
    let mut lap_dev: f64 = 0.0;
    let mut residuals = Vec::new();
    let mut skipped = 0;
    let mut grad_err: f64 = 0.0;
    for s in 0..n_pairs as u64 {
        let mut rng = rng_for(seed, s);
        let x = cube_point(&mut rng, n, SAMPLE_RADIUS);
        let len = if gens.is_empty() { 0 } else { rng.gen_range(1..=6) };
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..gens.len())).collect();
        let y = apply_word(&gens, &word, &x);

        let (bx, by) = (gram_matrix(f, &x), gram_matrix(f, &y));
        let scale = bx.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        let dev = bx.iter().flatten().zip(by.iter().flatten()).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        gram_dev = gram_dev.max(dev / (1.0 + scale));

        for i in 0..f.output_dim {
            let (lx, ly) = (f.laplacian(i, &x), f.laplacian(i, &y));
            lap_dev = lap_dev.max((lx - ly).abs() / (1.0 + lx.abs()));
        }

        regularity.push(regular_rank(f, &x));
        if smallest_singular_value(f, &x) > REGULARITY_GATE {
            residuals.push((s, bracket_residual(f, &x)));
        } else {
            skipped += 1;
        }
        grad_err = grad_err.max(gradient_error(f, &x));
        pairs.push(OrbitPair { stream: s, x, word });
    }
    let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    let gram = GramReport {
        sample_orbit_pairs: pairs,
        gram_deviation: gram_dev,
        regularity,
        tol: tol_gram,
        pass: gram_dev < tol_gram,
    };
    let bracket = BracketReport {
        residuals,
        max_residual,
        skipped_singular: skipped,
        tol: tol_bracket,
        pass: max_residual < tol_bracket,
    };
    let laplacian = LaplacianReport { deviation: lap_dev, tol: tol_gram, pass: lap_dev < tol_gram };
    let pass = gram.pass && bracket.pass;
    TransnormalReport { seed, gram, bracket, laplacian, gradient_error: grad_err, pass }
}
