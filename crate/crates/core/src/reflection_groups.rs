//! Finite Coxeter groups and affine Weyl groups as groups of isometries.
//!
//! A [`CoxeterGroup`] is a direct product of irreducible factors placed on
//! disjoint coordinate blocks of ℝⁿ, plus any number of trivially acted-on
//! coordinates. Each factor is either a [`FiniteCoxeterGroup`] (chamber is a
//! simplicial cone) or an [`AffineWeylGroup`] W̄ ⋉ Γ (chamber is a simplex).

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::num::{Num, NumKey};
use crate::root_systems::{
    build_root_system, coroot_dual_basis, coroot_of, fundamental_weights, lattices, Lattice, RootSystem, TypeLabel,
    WeightVector,
};

/// Finite enumeration refuses groups larger than this (E₆ scale).
pub const ENUMERATION_CAP: u128 = 51_840;

/// x ↦ linear·x + translation, with `linear` orthogonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub linear: Matrix,
    pub translation: Vector,
}

impl Isometry {
    pub fn identity(dim: usize) -> Isometry {
        Isometry { linear: Matrix::identity(dim), translation: linalg::zeros(dim) }
    }

    pub fn linear(linear: Matrix) -> Isometry {
        let d = linear.rows();
        Isometry { linear, translation: linalg::zeros(d) }
    }

    pub fn translation(t: Vector) -> Isometry {
        Isometry { linear: Matrix::identity(t.len()), translation: t }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[Num]) -> Vector {
        linalg::add(&self.linear.mul_vec(x), &self.translation)
    }

    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.linear.mul_vec_f64(x).into_iter().zip(&self.translation).map(|(a, t)| a + t.to_f64()).collect()
    }

    /// Action on tangent vectors (the linear part).
    pub fn apply_vector_f64(&self, v: &[f64]) -> Vec<f64> {
        self.linear.mul_vec_f64(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { linear: self.linear.mul(&other.linear), translation: self.apply(&other.translation) }
    }

    pub fn inverse(&self) -> Isometry {
        let lt = self.linear.transpose();
        let t = linalg::neg(&lt.mul_vec(&self.translation));
        Isometry { linear: lt, translation: t }
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let n = self.dim();
        self.linear.transpose().mul(&self.linear).approx_eq(&Matrix::identity(n), tol)
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&Isometry::identity(self.dim()), 1e-9)
    }

    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.linear.approx_eq(&other.linear, tol) && linalg::approx_eq(&self.translation, &other.translation, tol)
    }

    pub fn key(&self) -> Vec<NumKey> {
        let mut k = self.linear.key();
        k.extend(linalg::key(&self.translation));
        k
    }

    /// Place `self` (acting on ℝᵈ) on coordinates `offset..offset+d` of ℝⁿ.
    pub fn embed(&self, offset: usize, n: usize) -> Isometry {
        let d = self.dim();
        let mut g = Isometry::identity(n);
        for i in 0..d {
            for j in 0..d {
                g.linear[(offset + i, offset + j)] = self.linear[(i, j)];
            }
            g.translation[offset + i] = self.translation[i];
        }
        g
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Affine reflection x ↦ x − (⟨x, α⟩ − c)·α̌ in the hyperplane {⟨x, α⟩ = c}.
pub fn reflection_in(root: &[Num], offset: Num) -> Result<Isometry> {
    let coroot = coroot_of(root)?;
    let n = root.len();
    let mut linear = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            linear[(i, j)] -= coroot[i] * root[j];
        }
    }
    Ok(Isometry { linear, translation: linalg::scale(&coroot, offset) })
}

fn wall_tol(x: &[Num]) -> Num {
    if x.iter().all(Num::is_exact) {
        Num::ZERO
    } else {
        Num::Float(1e-12 * (1.0 + linalg::norm2(x).to_f64().sqrt()))
    }
}

#[derive(Debug)]
pub struct FiniteCoxeterGroup {
    pub root_system: RootSystem,
    generators: Vec<Isometry>,
    elements: OnceLock<Vec<Isometry>>,
}

impl Clone for FiniteCoxeterGroup {
    fn clone(&self) -> Self {
        FiniteCoxeterGroup::new(self.root_system.clone())
    }
}

impl FiniteCoxeterGroup {
    pub fn new(root_system: RootSystem) -> FiniteCoxeterGroup {
        let generators = root_system.simple_roots.iter().map(|a| reflection_in(a, Num::ZERO).unwrap()).collect();
        FiniteCoxeterGroup { root_system, generators, elements: OnceLock::new() }
    }

    pub fn of_type(label: TypeLabel, rank: usize) -> Result<FiniteCoxeterGroup> {
        Ok(FiniteCoxeterGroup::new(build_root_system(label, rank)?))
    }

    pub fn dim(&self) -> usize {
        self.root_system.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank
    }

    /// Simple reflections.
    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn classified_order(&self) -> u128 {
        self.root_system.classified_order()
    }

    /// All group elements, by breadth-first closure of the simple reflections.
    /// Built once and cached.
    pub fn enumerate(&self) -> Result<&[Isometry]> {
        let order = self.classified_order();
        if order > ENUMERATION_CAP {
            return Err(Error::EnumerationTooLarge(order));
        }
        Ok(self.elements.get_or_init(|| close_under(&self.generators, self.dim())))
    }

    pub fn word_isometry(&self, word: &[usize]) -> Isometry {
        word.iter().fold(Isometry::identity(self.dim()), |acc, &i| self.generators[i].compose(&acc))
    }

    pub fn in_dominant_chamber(&self, x: &[Num]) -> bool {
        let tol = wall_tol(x);
        self.root_system.simple_roots.iter().all(|a| linalg::dot(x, a) >= -tol)
    }

    /// Fold into the closed dominant chamber by reflecting across the
    /// lowest-index violated simple wall until none is violated. Applying the
    /// returned word's reflections in order maps `x` to the result.
    pub fn fold_to_chamber(&self, x: &[Num]) -> (Vector, Vec<usize>) {
        let mut p = x.to_vec();
        let mut word = Vec::new();
        let tol = wall_tol(x);
        while let Some(i) = self.root_system.simple_roots.iter().position(|a| linalg::dot(&p, a) < -tol) {
            p = self.generators[i].apply(&p);
            word.push(i);
        }
        (p, word)
    }

    pub fn fold_f64(&self, x: &[f64]) -> Vec<f64> {
        linalg::to_f64(&self.fold_to_chamber(&linalg::from_f64(x)).0)
    }

    pub fn orbit_equal(&self, x: &[Num], y: &[Num], tol: f64) -> bool {
        linalg::approx_eq(&self.fold_to_chamber(x).0, &self.fold_to_chamber(y).0, tol)
    }

    /// Regular point ρ/‖ρ‖ with ρ = Σ γᵢ (dual basis to the simple coroots).
    pub fn designated_point(&self) -> Vec<f64> {
        let rho = coroot_dual_basis(&self.root_system)
            .expect("valid root system")
            .iter()
            .fold(linalg::zeros(self.dim()), |acc, g| linalg::add(&acc, g));
        let r = linalg::to_f64(&rho);
        let n = linalg::norm_f64(&r);
        r.iter().map(|v| v / n).collect()
    }

    /// Smallest distance from `x` to a wall of the dominant chamber (signed:
    /// negative outside).
    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        self.root_system
            .simple_roots
            .iter()
            .map(|a| {
                let a = linalg::to_f64(a);
                linalg::dot_f64(x, &a) / linalg::norm_f64(&a)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn close_under(generators: &[Isometry], dim: usize) -> Vec<Isometry> {
    // Float generators need a float identity so that keys match s∘s.
    let id = match generators.first() {
        Some(s) if !s.linear.is_exact() => s.compose(s),
        _ => Isometry::identity(dim),
    };
    let mut seen: HashSet<Vec<NumKey>> = HashSet::from([id.key()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(h.key()) {
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    out
}

/// One step of an affine folding word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldStep {
    /// Generator index: `0..rank` simple reflections, `rank` the affine
    /// reflection in {⟨x, α_h⟩ = 1}.
    Reflection(usize),
    /// Translation by a coroot-lattice vector (coordinates over the simple coroots).
    Translation(Vec<i64>),
}

/// W̄ ⋉ Γ with Γ the coroot lattice.
#[derive(Debug, Clone)]
pub struct AffineWeylGroup {
    pub finite_part: FiniteCoxeterGroup,
    pub translation_lattice: Lattice,
    pub weight_lattice: Lattice,
    pub fundamental_weights: Vec<WeightVector>,
    pub highest_root: Vector,
    generators: Vec<Isometry>,
}

impl AffineWeylGroup {
    pub fn new(root_system: RootSystem) -> Result<AffineWeylGroup> {
        root_system.require_crystallographic()?;
        if root_system.type_label == TypeLabel::I2(2) {
            return Err(Error::NotIrreducible("I2(2)".into()));
        }
        let (coroot, weight) = lattices(&root_system)?;
        let fundamental_weights = fundamental_weights(&root_system)?;
        let highest_root = root_system.highest_root();
        let finite_part = FiniteCoxeterGroup::new(root_system);
        let mut generators = finite_part.generators().to_vec();
        generators.push(reflection_in(&highest_root, Num::ONE)?);
        Ok(AffineWeylGroup {
            finite_part,
            translation_lattice: coroot,
            weight_lattice: weight,
            fundamental_weights,
            highest_root,
            generators,
        })
    }

    pub fn of_type(label: TypeLabel, rank: usize) -> Result<AffineWeylGroup> {
        AffineWeylGroup::new(build_root_system(label, rank)?)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.finite_part.root_system
    }

    pub fn dim(&self) -> usize {
        self.finite_part.dim()
    }

    pub fn rank(&self) -> usize {
        self.finite_part.rank()
    }

    /// Simple reflections followed by the affine reflection.
    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn translation(&self, coords: &[i64]) -> Isometry {
        Isometry::translation(self.translation_lattice.point(coords))
    }

    /// x ↦ w̄·x + γ.
    pub fn element(&self, finite: &Isometry, coords: &[i64]) -> Isometry {
        Isometry { linear: finite.linear.clone(), translation: self.translation_lattice.point(coords) }
    }

    /// Split `g` into (w̄, γ) with w̄ ∈ W̄ and γ ∈ Γ (integer coroot coordinates).
    pub fn factor(&self, g: &Isometry) -> Result<(Isometry, Vec<i64>)> {
        let coords =
            self.translation_lattice.integer_coordinates(&g.translation).ok_or(Error::TranslationNotInLattice)?;
        let w = Isometry::linear(g.linear.clone());
        if let Ok(elements) = self.finite_part.enumerate() {
            if !elements.iter().any(|e| e.approx_eq(&w, 1e-9)) {
                return Err(Error::NotInFiniteGroup);
            }
        }
        Ok((w, coords))
    }

    pub fn word_isometry(&self, word: &[FoldStep]) -> Isometry {
        word.iter().fold(Isometry::identity(self.dim()), |acc, step| {
            let g = match step {
                FoldStep::Reflection(i) => self.generators[*i].clone(),
                FoldStep::Translation(c) => self.translation(c),
            };
            g.compose(&acc)
        })
    }

    pub fn in_alcove(&self, x: &[Num]) -> bool {
        let tol = wall_tol(x);
        self.finite_part.in_dominant_chamber(x) && linalg::dot(x, &self.highest_root) <= Num::ONE + tol
    }

    /// Fold into the closed fundamental alcove {⟨x, αᵢ⟩ ≥ 0, ⟨x, α_h⟩ ≤ 1}:
    /// subtract the nearest coroot-lattice point (rounding the pairings with
    /// the fundamental weights), then reflect across the lowest-index violated
    /// wall until none is violated.
    pub fn fold_to_alcove(&self, x: &[Num]) -> (Vector, Vec<FoldStep>) {
        let mut word = Vec::new();
        let shift: Vec<i64> = self.fundamental_weights.iter().map(|g| -linalg::dot(x, &g.coords).round()).collect();
        let mut p = x.to_vec();
        if shift.iter().any(|&c| c != 0) {
            p = linalg::add(&p, &self.translation_lattice.point(&shift));
            word.push(FoldStep::Translation(shift));
        }
        let tol = wall_tol(x);
        let simple = &self.root_system().simple_roots;
        loop {
            if let Some(i) = simple.iter().position(|a| linalg::dot(&p, a) < -tol) {
                p = self.generators[i].apply(&p);
                word.push(FoldStep::Reflection(i));
            } else if linalg::dot(&p, &self.highest_root) > Num::ONE + tol {
                let k = simple.len();
                p = self.generators[k].apply(&p);
                word.push(FoldStep::Reflection(k));
            } else {
                return (p, word);
            }
        }
    }

    pub fn fold_f64(&self, x: &[f64]) -> Vec<f64> {
        linalg::to_f64(&self.fold_to_alcove(&linalg::from_f64(x)).0)
    }

    pub fn orbit_equal(&self, x: &[Num], y: &[Num], tol: f64) -> bool {
        linalg::approx_eq(&self.fold_to_alcove(x).0, &self.fold_to_alcove(y).0, tol)
    }

    /// ρ / (2⟨ρ, α_h⟩): on the ray of ρ, halfway to the affine wall.
    pub fn designated_point(&self) -> Vec<f64> {
        let rho =
            self.fundamental_weights.iter().fold(linalg::zeros(self.dim()), |acc, g| linalg::add(&acc, &g.coords));
        let s = Num::ONE / (Num::int(2) * linalg::dot(&rho, &self.highest_root));
        linalg::to_f64(&linalg::scale(&rho, s))
    }

    /// Signed distance to the nearest alcove wall.
    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        let h = linalg::to_f64(&self.highest_root);
        let affine = (1.0 - linalg::dot_f64(x, &h)) / linalg::norm_f64(&h);
        self.finite_part.wall_distance(x).min(affine)
    }
}

/// Irreducible factor of a [`CoxeterGroup`].
#[derive(Debug, Clone)]
pub enum Factor {
    Finite(FiniteCoxeterGroup),
    Affine(AffineWeylGroup),
}

impl Factor {
    pub fn dim(&self) -> usize {
        match self {
            Factor::Finite(g) => g.dim(),
            Factor::Affine(g) => g.dim(),
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        match self {
            Factor::Finite(g) => &g.root_system,
            Factor::Affine(g) => g.root_system(),
        }
    }

    pub fn generators(&self) -> &[Isometry] {
        match self {
            Factor::Finite(g) => g.generators(),
            Factor::Affine(g) => g.generators(),
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, Factor::Affine(_))
    }

    pub fn fold_f64(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Factor::Finite(g) => g.fold_f64(x),
            Factor::Affine(g) => g.fold_f64(x),
        }
    }

    pub fn fold(&self, x: &[Num]) -> Vector {
        match self {
            Factor::Finite(g) => g.fold_to_chamber(x).0,
            Factor::Affine(g) => g.fold_to_alcove(x).0,
        }
    }

    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        match self {
            Factor::Finite(g) => g.wall_distance(x),
            Factor::Affine(g) => g.wall_distance(x),
        }
    }

    pub fn designated_point(&self) -> Vec<f64> {
        match self {
            Factor::Finite(g) => g.designated_point(),
            Factor::Affine(g) => g.designated_point(),
        }
    }

    pub fn label(&self) -> String {
        let rs = self.root_system();
        let base = match rs.type_label {
            TypeLabel::I2(m) => format!("I2({m})"),
            t => format!("{}{}", t, rs.rank),
        };
        if self.is_affine() {
            format!("~{base}")
        } else {
            base
        }
    }

    /// A random element: uniform over W̄ times a lattice vector with
    /// coordinates in [−2, 2] for affine factors.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Result<Isometry> {
        match self {
            Factor::Finite(g) => {
                let els = g.enumerate()?;
                Ok(els[rng.gen_range(0..els.len())].clone())
            }
            Factor::Affine(g) => {
                let els = g.finite_part.enumerate()?;
                let w = &els[rng.gen_range(0..els.len())];
                let coords: Vec<i64> = (0..g.rank()).map(|_| rng.gen_range(-2..=2)).collect();
                Ok(g.element(w, &coords))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Component {
    /// First ambient coordinate of this factor's block.
    pub offset: usize,
    pub factor: Factor,
}

/// Direct product of irreducible factors on disjoint coordinate blocks,
/// acting trivially on the remaining coordinates.
#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    ambient_dim: usize,
    components: Vec<Component>,
}

impl CoxeterGroup {
    pub fn trivial(dim: usize) -> CoxeterGroup {
        CoxeterGroup { ambient_dim: dim, components: Vec::new() }
    }

    /// Factors laid out one after another, then `trivial_dims` fixed coordinates.
    pub fn product(factors: Vec<Factor>, trivial_dims: usize) -> CoxeterGroup {
        let mut offset = 0;
        let components = factors
            .into_iter()
            .map(|factor| {
                let c = Component { offset, factor };
                offset += c.factor.dim();
                c
            })
            .collect();
        CoxeterGroup { ambient_dim: offset + trivial_dims, components }
    }

    pub fn finite(g: FiniteCoxeterGroup) -> CoxeterGroup {
        CoxeterGroup::product(vec![Factor::Finite(g)], 0)
    }

    pub fn affine(g: AffineWeylGroup) -> CoxeterGroup {
        CoxeterGroup::product(vec![Factor::Affine(g)], 0)
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| !c.factor.is_affine())
    }

    pub fn block<'a>(&self, c: &Component, x: &'a [f64]) -> &'a [f64] {
        &x[c.offset..c.offset + c.factor.dim()]
    }

    /// All generators, embedded in the ambient space, in component order.
    pub fn generators(&self) -> Vec<Isometry> {
        self.components
            .iter()
            .flat_map(|c| c.factor.generators().iter().map(|g| g.embed(c.offset, self.ambient_dim)))
            .collect()
    }

    /// Linear reflections generating the finite parts (input for [`decompose`]).
    pub fn linear_generators(&self) -> Vec<Isometry> {
        self.components
            .iter()
            .flat_map(|c| {
                let gens = match &c.factor {
                    Factor::Finite(g) => g.generators(),
                    Factor::Affine(g) => g.finite_part.generators(),
                };
                gens.iter().map(|g| g.embed(c.offset, self.ambient_dim))
            })
            .collect()
    }

    pub fn order(&self) -> Option<u128> {
        self.components
            .iter()
            .map(|c| match &c.factor {
                Factor::Finite(g) => Some(g.classified_order()),
                Factor::Affine(_) => None,
            })
            .product()
    }

    /// Every element of a finite product group.
    pub fn enumerate(&self) -> Result<Vec<Isometry>> {
        if !self.is_finite() {
            return Err(Error::NotFinite);
        }
        let order = self.order().unwrap_or(1);
        if order > ENUMERATION_CAP {
            return Err(Error::EnumerationTooLarge(order));
        }
        let mut out = vec![Isometry::identity(self.ambient_dim)];
        for c in &self.components {
            let Factor::Finite(g) = &c.factor else { unreachable!() };
            let els: Vec<Isometry> = g.enumerate()?.iter().map(|e| e.embed(c.offset, self.ambient_dim)).collect();
            out = out.iter().flat_map(|a| els.iter().map(move |b| b.compose(a))).collect();
        }
        Ok(out)
    }

    pub fn fold(&self, x: &[Num]) -> Vector {
        let mut out = x.to_vec();
        for c in &self.components {
            let d = c.factor.dim();
            let f = c.factor.fold(&x[c.offset..c.offset + d]);
            out[c.offset..c.offset + d].clone_from_slice(&f);
        }
        out
    }

    pub fn fold_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        for c in &self.components {
            let f = c.factor.fold_f64(self.block(c, x));
            out[c.offset..c.offset + f.len()].copy_from_slice(&f);
        }
        out
    }

    /// True iff x and y fold to the same representative (within `tol`; exact
    /// for rational inputs on crystallographic factors).
    pub fn orbit_equal(&self, x: &[Num], y: &[Num], tol: f64) -> bool {
        linalg::approx_eq(&self.fold(x), &self.fold(y), tol)
    }

    pub fn orbit_equal_f64(&self, x: &[f64], y: &[f64], tol: f64) -> bool {
        let (a, b) = (self.fold_f64(x), self.fold_f64(y));
        a.iter().zip(&b).all(|(p, q)| (p - q).abs() <= tol)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Result<Isometry> {
        let mut g = Isometry::identity(self.ambient_dim);
        for c in &self.components {
            g = c.factor.random_element(rng)?.embed(c.offset, self.ambient_dim).compose(&g);
        }
        Ok(g)
    }

    /// Smallest signed wall distance over all factors (∞ for the trivial group).
    pub fn wall_distance(&self, x: &[f64]) -> f64 {
        self.components.iter().map(|c| c.factor.wall_distance(self.block(c, x))).fold(f64::INFINITY, f64::min)
    }

    /// Random point of the open fundamental domain at least `floor` from every
    /// wall: draw in the cube [−r, r]ⁿ, fold, reject near-wall results.
    pub fn sample_domain_point<R: Rng>(&self, rng: &mut R, r: f64, floor: f64) -> Vec<f64> {
        loop {
            let x = crate::sampling::cube_point(rng, self.ambient_dim, r);
            let y = self.fold_f64(&x);
            if self.wall_distance(&y) > floor {
                return y;
            }
        }
    }

    /// Per-factor designated points, zero on the trivial coordinates.
    pub fn designated_point(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.ambient_dim];
        for c in &self.components {
            let d = c.factor.designated_point();
            p[c.offset..c.offset + d.len()].copy_from_slice(&d);
        }
        p
    }
}

/// One irreducible block of an [`OrthogonalDecomposition`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFactor {
    /// Basis of Eᵢ (independent roots of the component).
    pub basis: Vec<Vector>,
    /// Indices of the input generators belonging to this factor.
    pub generator_indices: Vec<usize>,
    /// Reflection root of each of those generators.
    pub roots: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalDecomposition {
    pub ambient_dim: usize,
    /// Basis of the common fixed space E₀.
    pub e0: Vec<Vector>,
    pub factors: Vec<DecompositionFactor>,
}

impl OrthogonalDecomposition {
    /// Largest violation of: Eᵢ pairwise orthogonal, dimensions summing to n,
    /// generators fixing E₀ pointwise and preserving every Eᵢ. Zero in exact mode.
    pub fn residual(&self, generators: &[Isometry]) -> f64 {
        let n = self.ambient_dim;
        let mut worst: f64 = 0.0;
        let dims: usize = self.e0.len() + self.factors.iter().map(|f| f.basis.len()).sum::<usize>();
        if dims != n {
            return f64::INFINITY;
        }
        let mut spaces: Vec<&Vec<Vector>> = vec![&self.e0];
        spaces.extend(self.factors.iter().map(|f| &f.basis));
        for (i, a) in spaces.iter().enumerate() {
            for b in spaces.iter().skip(i + 1) {
                for u in a.iter() {
                    for v in b.iter() {
                        worst = worst.max(linalg::dot(u, v).to_f64().abs());
                    }
                }
            }
        }
        for g in generators {
            for v in &self.e0 {
                let d = linalg::sub(&g.apply(v), v);
                worst = worst.max(d.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max));
            }
            for f in &self.factors {
                let p = linalg::projector(&f.basis, n);
                for v in &f.basis {
                    let gv = g.apply(v);
                    let out = linalg::sub(&gv, &p.mul_vec(&gv));
                    worst = worst.max(out.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max));
                }
            }
        }
        worst
    }
}

/// Root of a linear reflection, or an error if `g` is not one.
pub fn reflection_root(g: &Isometry, index: usize) -> Result<Vector> {
    let n = g.dim();
    let err = Error::NotReflections(index);
    if !linalg::is_zero(&g.translation) || !g.is_orthogonal(1e-12) {
        return Err(err);
    }
    if !g.compose(g).linear.approx_eq(&Matrix::identity(n), 1e-12) {
        return Err(err);
    }
    let m = Matrix::identity(n).sub(&g.linear);
    if m.rank() != 1 {
        return Err(err);
    }
    (0..n).map(|j| m.col(j)).find(|c| !linalg::is_zero(c)).ok_or(err)
}

/// Split ℝⁿ into the common fixed space E₀ and the spans of the connected
/// components of the Coxeter graph (edges between non-orthogonal roots).
pub fn decompose(generators: &[Isometry], ambient_dim: usize) -> Result<OrthogonalDecomposition> {
    let roots: Vec<Vector> =
        generators.iter().enumerate().map(|(i, g)| reflection_root(g, i)).collect::<Result<_>>()?;
    let k = roots.len();
    let mut component = vec![usize::MAX; k];
    let mut n_comp = 0;
    for start in 0..k {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = n_comp;
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if component[j] == usize::MAX && !linalg::dot(&roots[i], &roots[j]).is_zero() {
                    component[j] = n_comp;
                    stack.push(j);
                }
            }
        }
        n_comp += 1;
    }
    let factors = (0..n_comp)
        .map(|c| {
            let idx: Vec<usize> = (0..k).filter(|&i| component[i] == c).collect();
            let rs: Vec<Vector> = idx.iter().map(|&i| roots[i].clone()).collect();
            DecompositionFactor { basis: linalg::independent_subset(&rs), generator_indices: idx, roots: rs }
        })
        .collect();
    let e0 = if roots.is_empty() {
        (0..ambient_dim).map(|i| linalg::unit(ambient_dim, i)).collect()
    } else {
        Matrix::from_rows(&roots).nullspace()
    };
    Ok(OrthogonalDecomposition { ambient_dim, e0, factors })
}

/// Index of the enumerated element equal to `g`, keyed for fast lookup.
pub fn element_index(elements: &[Isometry]) -> HashMap<Vec<NumKey>, usize> {
    elements.iter().enumerate().map(|(i, e)| (e.key(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rational_point, rng_for};

    fn ints(v: &[i64]) -> Vector {
        linalg::from_ints(v)
    }

    #[test]
    fn reflection_examples() {
        let s = reflection_in(&ints(&[1, -1]), Num::ZERO).unwrap();
        assert_eq!(s.apply(&ints(&[1, 0])), ints(&[0, 1]));
        assert!(s.compose(&s).is_identity());
        let a = reflection_in(&ints(&[1, 2]), Num::int(3)).unwrap();
        let on = ints(&[1, 1]);
        assert_eq!(a.apply(&on), on);
        assert_eq!(a.compose(&a), Isometry::identity(2));
        assert_eq!(reflection_in(&ints(&[0, 0]), Num::ZERO), Err(Error::ZeroVector));
    }

    #[test]
    fn enumeration_orders() {
        for (t, r, n) in [(TypeLabel::A, 1, 2), (TypeLabel::A, 2, 6), (TypeLabel::B, 3, 48), (TypeLabel::G, 2, 12)] {
            let g = FiniteCoxeterGroup::of_type(t, r).unwrap();
            let els = g.enumerate().unwrap();
            assert_eq!(els.len(), n);
            assert_eq!(element_index(els).len(), n);
        }
        for m in 2..=8 {
            let g = FiniteCoxeterGroup::of_type(TypeLabel::I2(m), 2).unwrap();
            assert_eq!(g.enumerate().unwrap().len(), 2 * m as usize, "I2({m})");
        }
    }

    #[test]
    fn enumeration_cap() {
        let g = FiniteCoxeterGroup::of_type(TypeLabel::E, 7).unwrap();
        assert_eq!(g.enumerate().unwrap_err(), Error::EnumerationTooLarge(2_903_040));
    }

    #[test]
    fn elements_permute_roots() {
        let g = FiniteCoxeterGroup::of_type(TypeLabel::B, 2).unwrap();
        let roots = g.root_system.all_roots();
        for e in g.enumerate().unwrap() {
            for r in &roots {
                assert!(roots.contains(&e.apply(r)));
            }
        }
    }

    #[test]
    fn affine_group_is_not_enumerable() {
        let g = CoxeterGroup::affine(AffineWeylGroup::of_type(TypeLabel::A, 1).unwrap());
        assert_eq!(g.enumerate().unwrap_err(), Error::NotFinite);
    }

    #[test]
    fn decompose_a2_in_r3() {
        let g = FiniteCoxeterGroup::of_type(TypeLabel::A, 2).unwrap();
        let d = decompose(g.generators(), 3).unwrap();
        assert_eq!(d.e0, vec![ints(&[1, 1, 1])]);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].basis.len(), 2);
        assert_eq!(d.residual(g.generators()), 0.0);
    }

    #[test]
    fn decompose_two_a1_in_r4() {
        let gens = vec![
            reflection_in(&ints(&[1, -1, 0, 0]), Num::ZERO).unwrap(),
            reflection_in(&ints(&[0, 0, 1, -1]), Num::ZERO).unwrap(),
        ];
        let d = decompose(&gens, 4).unwrap();
        assert_eq!(d.factors.len(), 2);
        assert_eq!(d.e0.len(), 2);
        assert_eq!(d.residual(&gens), 0.0);
    }

    #[test]
    fn decompose_trivial_and_bad_input() {
        let d = decompose(&[], 3).unwrap();
        assert_eq!(d.e0.len(), 3);
        assert!(d.factors.is_empty());
        let rot = Isometry::linear(Matrix::from_rows(&[ints(&[0, -1]), ints(&[1, 0])]));
        assert_eq!(decompose(&[rot], 2).unwrap_err(), Error::NotReflections(0));
        let affine = reflection_in(&ints(&[1, 0]), Num::ONE).unwrap();
        assert!(decompose(&[affine], 2).is_err());
    }

    #[test]
    fn fold_a1_example() {
        let g = FiniteCoxeterGroup::of_type(TypeLabel::A, 1).unwrap();
        let (p, w) = g.fold_to_chamber(&ints(&[0, 1]));
        assert_eq!(p, ints(&[1, 0]));
        assert_eq!(w, vec![0]);
        let (p, w) = g.fold_to_chamber(&ints(&[3, 1]));
        assert_eq!(p, ints(&[3, 1]));
        assert!(w.is_empty());
    }

    /// Oracle: scan the enumerated orbit for the member in the closed dominant chamber.
    fn dominant_by_scan(g: &FiniteCoxeterGroup, x: &[Num]) -> Vector {
        g.enumerate().unwrap().iter().map(|e| e.apply(x)).find(|y| g.in_dominant_chamber(y)).unwrap()
    }

    #[test]
    fn fold_matches_orbit_scan_and_word() {
        for (t, r) in [(TypeLabel::B, 2), (TypeLabel::A, 3), (TypeLabel::G, 2), (TypeLabel::F, 4)] {
            let g = FiniteCoxeterGroup::of_type(t, r).unwrap();
            let npos = g.root_system.positive_roots.len();
            for s in 0..40 {
                let x = rational_point(&mut rng_for(11, s), g.dim(), 3, 7);
                let (p, w) = g.fold_to_chamber(&x);
                assert_eq!(p, dominant_by_scan(&g, &x));
                assert_eq!(g.word_isometry(&w).apply(&x), p);
                assert!(w.len() <= npos);
                assert_eq!(g.fold_to_chamber(&p).0, p);
            }
        }
    }

    #[test]
    fn fold_alcove_a1_example() {
        let g = AffineWeylGroup::of_type(TypeLabel::A, 1).unwrap();
        let gamma = &g.fundamental_weights[0].coords;
        // weight coordinate t: x = t·γ₁, so ⟨x, α⟩ = t
        let x = linalg::scale(gamma, Num::frac(23, 10));
        let (p, w) = g.fold_to_alcove(&x);
        assert_eq!(p, linalg::scale(gamma, Num::frac(3, 10)));
        assert_eq!(g.word_isometry(&w).apply(&x), p);
        let inside = linalg::scale(gamma, Num::frac(1, 2));
        assert_eq!(g.fold_to_alcove(&inside), (inside.clone(), vec![]));
    }

    #[test]
    fn semidirect_round_trip_and_normality() {
        let g = AffineWeylGroup::of_type(TypeLabel::B, 2).unwrap();
        let els = g.finite_part.enumerate().unwrap().to_vec();
        for (i, w) in els.iter().enumerate() {
            let c = vec![i as i64 % 3 - 1, 2 - i as i64 % 5];
            let e = g.element(w, &c);
            assert_eq!(g.factor(&e).unwrap(), (w.clone(), c.clone()));
            let conj = w.compose(&g.translation(&c)).compose(&w.inverse());
            let moved = w.apply(&g.translation_lattice.point(&c));
            assert_eq!(conj, Isometry::translation(moved));
        }
        let bad = Isometry::translation(vec![Num::frac(1, 3), Num::ZERO]);
        assert_eq!(g.factor(&bad).unwrap_err(), Error::TranslationNotInLattice);
    }

    #[test]
    fn orbit_consistency_exact() {
        for (t, r, affine) in [(TypeLabel::A, 2, true), (TypeLabel::G, 2, true), (TypeLabel::B, 3, false)] {
            let group = if affine {
                CoxeterGroup::affine(AffineWeylGroup::of_type(t, r).unwrap())
            } else {
                CoxeterGroup::finite(FiniteCoxeterGroup::of_type(t, r).unwrap())
            };
            for s in 0..200 {
                let mut rng = rng_for(5, s);
                let x = rational_point(&mut rng, group.dim(), 2, 5);
                let g = group.random_element(&mut rng).unwrap();
                assert_eq!(group.fold(&g.apply(&x)), group.fold(&x));
                let f = group.fold(&x);
                assert_eq!(group.fold(&f), f);
            }
        }
    }

    #[test]
    fn orbit_equal_examples() {
        let g = CoxeterGroup::finite(FiniteCoxeterGroup::of_type(TypeLabel::A, 2).unwrap());
        let x = ints(&[3, 1, 0]);
        for e in g.enumerate().unwrap() {
            assert!(g.orbit_equal(&x, &e.apply(&x), 0.0));
        }
        assert!(!g.orbit_equal(&ints(&[3, 1, 0]), &ints(&[4, 1, 0]), 0.0));
        let a = AffineWeylGroup::of_type(TypeLabel::A, 2).unwrap();
        let y = linalg::add(&x, &a.translation_lattice.point(&[2, -1]));
        assert!(CoxeterGroup::affine(a).orbit_equal(&x, &y, 0.0));
    }

    #[test]
    fn designated_points_are_interior() {
        for (t, r) in [(TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2), (TypeLabel::C, 3)] {
            let a = AffineWeylGroup::of_type(t, r).unwrap();
            assert!(a.wall_distance(&a.designated_point()) > 1e-3);
            let f = FiniteCoxeterGroup::of_type(t, r).unwrap();
            assert!(f.wall_distance(&f.designated_point()) > 1e-3);
        }
    }

    #[test]
    fn isometry_json_round_trip() {
        let g = reflection_in(&ints(&[1, -1]), Num::ONE).unwrap();
        let s = g.to_json();
        assert_eq!(s, r#"{"linear":[[[0,1],[1,1]],[[1,1],[0,1]]],"translation":[[1,1],[-1,1]]}"#);
        let back: Isometry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
