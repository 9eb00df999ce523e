//! The orbit-separating map F(x₀, x₁, …, xₛ) = (x₀, F̃₁(x₁), …, F̃ₛ(xₛ)) and
//! its invariance and separation checks.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{chevalley_generators, real_generators, GeneratorSystem, Invariant, TrigInvariant};
use crate::linalg;
use crate::reflection_groups::{
    decompose, CoxeterGroup, Factor, FiniteCoxeterGroup, Isometry, OrthogonalDecomposition,
};
use crate::root_systems::{RootSystem, TypeLabel};
use crate::sampling::{cube_point, rng_for};

/// Separation margin threshold.
pub const SEPARATION_TOL: f64 = 1e-6;
/// Invariance threshold, relative to 1 + |Fᵢ(x)|.
pub const INVARIANCE_TOL: f64 = 1e-10;
/// Minimum wall distance for interior samples.
pub const WALL_FLOOR: f64 = 1e-3;
/// Cube half-width for raw samples before folding.
pub const SAMPLE_RADIUS: f64 = 1.5;

#[derive(Clone, Debug, Serialize)]
pub struct FactorBlock {
    pub offset: usize,
    pub dim: usize,
    pub system: GeneratorSystem,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatingMap {
    pub decomposition: OrthogonalDecomposition,
    /// E₀ basis; the first outputs are ⟨x, e⟩ for e in this list.
    pub e0_basis: Vec<Vec<f64>>,
    pub blocks: Vec<FactorBlock>,
    pub output_dim: usize,
}

/// One output coordinate of a [`SeparatingMap`].
#[derive(Clone, Copy, Debug)]
enum Output<'a> {
    Linear(&'a [f64]),
    Block(&'a FactorBlock, &'a Invariant),
}

impl SeparatingMap {
    pub fn dim(&self) -> usize {
        self.decomposition.ambient_dim
    }

    fn outputs(&self) -> Vec<Output<'_>> {
        let mut out: Vec<Output> = self.e0_basis.iter().map(|e| Output::Linear(e)).collect();
        for b in &self.blocks {
            out.extend(b.system.generators.iter().map(|f| Output::Block(b, f)));
        }
        out
    }

    /// Output index range of block `i`.
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.e0_basis.len() + self.blocks[..i].iter().map(|b| b.system.len()).sum::<usize>();
        start..start + self.blocks[i].system.len()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.outputs()
            .iter()
            .map(|o| match o {
                Output::Linear(e) => linalg::dot_f64(x, e),
                Output::Block(b, f) => f.eval(&x[b.offset..b.offset + b.dim]),
            })
            .collect()
    }

    /// Gradient of output `i` in ambient coordinates.
    pub fn gradient(&self, i: usize, x: &[f64]) -> Vec<f64> {
        self.gradient_of(self.outputs()[i], x)
    }

    fn gradient_of(&self, o: Output, x: &[f64]) -> Vec<f64> {
        match o {
            Output::Linear(e) => e.to_vec(),
            Output::Block(b, f) => {
                let mut g = vec![0.0; self.dim()];
                g[b.offset..b.offset + b.dim].copy_from_slice(&f.gradient(&x[b.offset..b.offset + b.dim]));
                g
            }
        }
    }

    /// Rows are output gradients.
    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.outputs().into_iter().map(|o| self.gradient_of(o, x)).collect()
    }

    /// Hessian of output `i` in ambient coordinates.
    pub fn hessian(&self, i: usize, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut h = vec![vec![0.0; n]; n];
        if let Output::Block(b, f) = self.outputs()[i] {
            for (r, row) in f.hessian(&x[b.offset..b.offset + b.dim]).into_iter().enumerate() {
                h[b.offset + r][b.offset..b.offset + b.dim].copy_from_slice(&row);
            }
        }
        h
    }

    pub fn laplacian(&self, i: usize, x: &[f64]) -> f64 {
        match self.outputs()[i] {
            Output::Linear(_) => 0.0,
            Output::Block(b, f) => f.laplacian(&x[b.offset..b.offset + b.dim]),
        }
    }

    /// Copy with generator `generator` of block `block` perturbed: one Fourier
    /// term or one monomial dropped. Used as a negative control.
    pub fn corrupted(&self, block: usize, generator: usize) -> SeparatingMap {
        let mut out = self.clone();
        let f = &mut out.blocks[block].system.generators[generator];
        *f = match f {
            Invariant::Trig(t) => {
                let w = t.fourier_terms.keys().next().cloned().unwrap_or_default();
                Invariant::Trig(TrigInvariant::without_term(t, &w))
            }
            Invariant::Polynomial(p) => {
                let mut p = p.clone();
                let first = p.terms().next().map(|(e, _)| e.clone());
                if let Some(e) = first {
                    p.remove_term(&e);
                }
                Invariant::Polynomial(p)
            }
        };
        out
    }
}

/// Decompose, then build Chevalley generators per finite factor and real
/// trigonometric generators per affine factor, with the identity on E₀.
pub fn build_separating_map(group: &CoxeterGroup) -> Result<SeparatingMap> {
    let n = group.dim();
    let decomposition = decompose(&group.linear_generators(), n)?;
    let e0_basis = decomposition.e0.iter().map(|e| linalg::to_f64(e)).collect();
    let mut blocks = Vec::new();
    for c in group.components() {
        let systems = match &c.factor {
            Factor::Finite(g) => finite_systems(g)?,
            Factor::Affine(g) => vec![real_generators(g)?],
        };
        blocks.extend(systems.into_iter().map(|system| FactorBlock { offset: c.offset, dim: c.factor.dim(), system }));
    }
    let output_dim = decomposition.e0.len() + blocks.iter().map(|b: &FactorBlock| b.system.len()).sum::<usize>();
    Ok(SeparatingMap { decomposition, e0_basis, blocks, output_dim })
}

/// Chevalley generators of a finite factor. A reducible factor (only I2(2)
/// among the typed groups) is split into rank-one pieces sharing its block.
fn finite_systems(g: &FiniteCoxeterGroup) -> Result<Vec<GeneratorSystem>> {
    let parts = decompose(g.generators(), g.dim())?.factors;
    if parts.len() == 1 {
        return Ok(vec![chevalley_generators(g)?]);
    }
    parts
        .into_iter()
        .map(|p| {
            if p.roots.len() != 1 {
                return Err(Error::NotIrreducible(Factor::Finite(g.clone()).label()));
            }
            let rs = RootSystem::from_simple_roots(TypeLabel::A, g.dim(), p.roots)?;
            chevalley_generators(&FiniteCoxeterGroup::new(rs))
        })
        .collect()
}

/// Product of `len` uniformly chosen group generators.
pub fn random_word<R: Rng>(generators: &[Isometry], dim: usize, rng: &mut R, len: usize) -> Isometry {
    (0..len).fold(Isometry::identity(dim), |acc, _| {
        if generators.is_empty() {
            acc
        } else {
            generators[rng.gen_range(0..generators.len())].compose(&acc)
        }
    })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Largest |Fᵢ(a) − Fᵢ(b)| / (1 + |Fᵢ(b)|).
fn relative_deviation(fa: &[f64], fb: &[f64]) -> f64 {
    fa.iter().zip(fb).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Max over seeded samples and group generators of the relative deviation
/// between F(g·x) and F(x).
pub fn check_invariance(
    f: &SeparatingMap,
    group: &CoxeterGroup,
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> InvarianceReport {
    let gens = group.generators();
    let mut worst: f64 = 0.0;
    for s in 0..n_samples {
        let x = cube_point(&mut rng_for(seed, s as u64), group.dim(), SAMPLE_RADIUS);
        let fx = f.eval(&x);
        for g in &gens {
            worst = worst.max(relative_deviation(&f.eval(&g.apply_f64(&x)), &fx));
        }
    }
    InvarianceReport { samples: n_samples, max_deviation: worst, tol, pass: worst < tol }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub pairs: usize,
    /// Smallest ‖F(x) − F(y)‖ over distinct interior pairs.
    pub separation_min: f64,
    /// Largest relative deviation between F(x) and F(g·x) on matched pairs.
    pub matched_max: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Distinct interior pairs (at least `WALL_FLOOR` apart) must be separated by
/// more than `tol`; matched-orbit pairs (x, g·x), confirmed by folding, must
/// agree within `INVARIANCE_TOL`.
pub fn check_separation(
    f: &SeparatingMap,
    group: &CoxeterGroup,
    n_pairs: usize,
    tol: f64,
    seed: u64,
) -> SeparationReport {
    let gens = group.generators();
    let mut sep_min = f64::INFINITY;
    let mut matched_max: f64 = 0.0;
    let mut matched_ok = true;
    for s in 0..n_pairs {
        let mut rng = rng_for(seed, s as u64);
        let x = group.sample_domain_point(&mut rng, SAMPLE_RADIUS, WALL_FLOOR);
        let y = loop {
            let y = group.sample_domain_point(&mut rng, SAMPLE_RADIUS, WALL_FLOOR);
            if distance(&x, &y) > WALL_FLOOR {
                break y;
            }
        };
        let fx = f.eval(&x);
        sep_min = sep_min.min(distance(&fx, &f.eval(&y)));
        let len = rng.gen_range(1..=8);
        let gx = random_word(&gens, group.dim(), &mut rng, len).apply_f64(&x);
        matched_ok &= group.orbit_equal_f64(&x, &gx, 1e-9);
        matched_max = matched_max.max(relative_deviation(&f.eval(&gx), &fx));
    }
    let pass = sep_min > tol && matched_ok && matched_max < INVARIANCE_TOL;
    SeparationReport { pairs: n_pairs, separation_min: sep_min, matched_max, tol, pass }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub pairs: usize,
    pub disagreements: usize,
    pub pass: bool,
}

/// orbit_equal(x, y) ⟺ ‖F(x) − F(y)‖ < tol over seeded pairs, half of them
/// on a common orbit by construction.
pub fn check_oracle_consistency(
    f: &SeparatingMap,
    group: &CoxeterGroup,
    n_pairs: usize,
    tol: f64,
    seed: u64,
) -> ConsistencyReport {
    let gens = group.generators();
    let mut disagreements = 0;
    for s in 0..n_pairs {
        let mut rng = rng_for(seed, s as u64);
        let x = cube_point(&mut rng, group.dim(), SAMPLE_RADIUS);
        let base = if s % 2 == 0 { x.clone() } else { cube_point(&mut rng, group.dim(), SAMPLE_RADIUS) };
        let len = rng.gen_range(0..=8);
        let y = random_word(&gens, group.dim(), &mut rng, len).apply_f64(&base);
        let same_orbit = group.orbit_equal_f64(&x, &y, 1e-9);
        let same_value = distance(&f.eval(&x), &f.eval(&y)) < tol;
        if same_orbit != same_value {
            disagreements += 1;
        }
    }
    ConsistencyReport { pairs: n_pairs, disagreements, pass: disagreements == 0 }
}
