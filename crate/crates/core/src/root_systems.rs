//! Root data for the irreducible types A–G and the dihedral family I₂(m).
//!
//! The crystallographic types use the conventional integer-coordinate
//! embeddings (Aₙ inside ℝⁿ⁺¹, Bₙ/Cₙ/Dₙ/F₄ in ℝⁿ, E₆–E₈ in ℝ⁸, G₂ in the A₂
//! plane of ℝ³) so that roots, coroots and weights are exact rationals.
//! I₂(m) uses floating simple roots in the plane at angle π − π/m; for
//! m ∈ {2, 3, 4, 6} the root lengths are chosen so that the system is
//! crystallographic (ratio 1, 1, 2, 3 of squared lengths).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::num::{Num, NumKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    /// Dihedral group of order 2m.
    I2(u32),
}

impl TypeLabel {
    pub fn letter(&self) -> &'static str {
        match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::F => "F",
            TypeLabel::G => "G",
            TypeLabel::I2(_) => "I2",
        }
    }

    pub fn dihedral_m(&self) -> Option<u32> {
        match self {
            TypeLabel::I2(m) => Some(*m),
            _ => None,
        }
    }

    /// Parse a letter plus optional dihedral parameter.
    pub fn parse(letter: &str, m: Option<u32>) -> Result<TypeLabel> {
        Ok(match letter {
            "A" => TypeLabel::A,
            "B" => TypeLabel::B,
            "C" => TypeLabel::C,
            "D" => TypeLabel::D,
            "E" => TypeLabel::E,
            "F" => TypeLabel::F,
            "G" => TypeLabel::G,
            "I" | "I2" => TypeLabel::I2(m.ok_or_else(|| Error::InvalidSpec("dihedral type needs \"m\"".into()))?),
            other => {
                return Err(Error::InvalidClassification { label: other.into(), rank: 0 });
            }
        })
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::I2(m) => write!(f, "I2({m})"),
            other => f.write_str(other.letter()),
        }
    }
}

impl FromStr for TypeLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<TypeLabel> {
        if let Some(rest) = s.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m = rest.parse().map_err(|_| Error::InvalidSpec(format!("bad dihedral label {s}")))?;
            return Ok(TypeLabel::I2(m));
        }
        TypeLabel::parse(s, None)
    }
}

/// A root together with its squared length and coroot.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub vector: Vector,
    pub squared_length: Num,
    pub coroot: Vector,
}

impl Root {
    pub fn new(vector: Vector) -> Result<Root> {
        let coroot = coroot_of(&vector)?;
        let squared_length = linalg::norm2(&vector);
        Ok(Root { vector, squared_length, coroot })
    }
}

/// α̌ = 2α/‖α‖² for the standard Euclidean inner product.
pub fn coroot_of(root: &[Num]) -> Result<Vector> {
    let n2 = linalg::norm2(root);
    if n2.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(linalg::scale(root, Num::int(2) / n2))
}

/// s_α(v) = v − ⟨v, α̌⟩ α.
pub fn reflect(v: &[Num], root: &[Num]) -> Vector {
    let c = Num::int(2) * linalg::dot(v, root) / linalg::norm2(root);
    linalg::sub(v, &linalg::scale(root, c))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub type_label: TypeLabel,
    pub rank: usize,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Vector>,
    pub positive_roots: Vec<Vector>,
    /// `cartan_matrix[i][j] = ⟨α̌ᵢ, αⱼ⟩`.
    pub cartan_matrix: Vec<Vec<Num>>,
}

fn e(n: usize, i: usize) -> Vector {
    linalg::unit(n, i)
}

fn diff(n: usize, i: usize, j: usize) -> Vector {
    linalg::sub(&e(n, i), &e(n, j))
}

fn ints(v: &[i64]) -> Vector {
    linalg::from_ints(v)
}

fn halves(v: &[i64]) -> Vector {
    v.iter().map(|&x| Num::frac(x, 2)).collect()
}

fn invalid(label: TypeLabel, rank: usize) -> Error {
    Error::InvalidClassification { label: label.to_string(), rank }
}

fn simple_roots_for(label: TypeLabel, rank: usize) -> Result<(usize, Vec<Vector>)> {
    let n = rank;
    Ok(match label {
        TypeLabel::A if n >= 1 => (n + 1, (0..n).map(|i| diff(n + 1, i, i + 1)).collect()),
        TypeLabel::B if n >= 2 => {
            let mut s: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(e(n, n - 1));
            (n, s)
        }
        TypeLabel::C if n >= 3 => {
            let mut s: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(linalg::scale(&e(n, n - 1), Num::int(2)));
            (n, s)
        }
        TypeLabel::D if n >= 4 => {
            let mut s: Vec<Vector> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
            s.push(linalg::add(&e(n, n - 2), &e(n, n - 1)));
            (n, s)
        }
        TypeLabel::E if (6..=8).contains(&n) => {
            // Standard E₈ coordinates in ℝ⁸; E₇ and E₆ are the leading sub-diagrams.
            let mut s = vec![halves(&[1, -1, -1, -1, -1, -1, -1, 1]), ints(&[1, 1, 0, 0, 0, 0, 0, 0])];
            for i in 0..6 {
                s.push(diff(8, i + 1, i));
            }
            s.truncate(n);
            (8, s)
        }
        TypeLabel::F if n == 4 => {
            (4, vec![ints(&[0, 1, -1, 0]), ints(&[0, 0, 1, -1]), ints(&[0, 0, 0, 1]), halves(&[1, -1, -1, -1])])
        }
        TypeLabel::G if n == 2 => (3, vec![ints(&[1, -1, 0]), ints(&[-2, 1, 1])]),
        TypeLabel::I2(m) if n == 2 && m >= 2 => {
            let theta = std::f64::consts::PI - std::f64::consts::PI / m as f64;
            let len = match m {
                4 => 2f64.sqrt(),
                6 => 3f64.sqrt(),
                _ => 1.0,
            };
            (
                2,
                vec![
                    vec![Num::Float(1.0), Num::Float(0.0)],
                    vec![Num::Float(len * theta.cos()), Num::Float(len * theta.sin())],
                ],
            )
        }
        _ => return Err(invalid(label, rank)),
    })
}

/// Classified order of the Weyl/Coxeter group of an irreducible type.
pub fn classified_order(label: TypeLabel, rank: usize) -> u128 {
    let fact = |n: usize| (1..=n as u128).product::<u128>();
    match label {
        TypeLabel::A => fact(rank + 1),
        TypeLabel::B | TypeLabel::C => (1u128 << rank) * fact(rank),
        TypeLabel::D => (1u128 << (rank - 1)) * fact(rank),
        TypeLabel::E => match rank {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        TypeLabel::F => 1152,
        TypeLabel::G => 12,
        TypeLabel::I2(m) => 2 * m as u128,
    }
}

/// Classical degrees of the basic invariants, when the type is recognized.
pub fn classical_degrees(label: TypeLabel, rank: usize) -> Vec<u32> {
    let n = rank as u32;
    match label {
        TypeLabel::A => (2..=n + 1).collect(),
        TypeLabel::B | TypeLabel::C => (1..=n).map(|k| 2 * k).collect(),
        TypeLabel::D => {
            let mut d: Vec<u32> = (1..n).map(|k| 2 * k).collect();
            d.push(n);
            d.sort_unstable();
            d
        }
        TypeLabel::E => match rank {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
        },
        TypeLabel::F => vec![2, 6, 8, 12],
        TypeLabel::G => vec![2, 6],
        TypeLabel::I2(m) => vec![2, m],
    }
}

pub fn build_root_system(type_label: TypeLabel, rank: usize) -> Result<RootSystem> {
    let (ambient_dim, simple_roots) = simple_roots_for(type_label, rank)?;
    RootSystem::from_simple_roots(type_label, ambient_dim, simple_roots)
}

impl RootSystem {
    /// Close the simple roots under their reflections and classify positives.
    pub fn from_simple_roots(
        type_label: TypeLabel,
        ambient_dim: usize,
        simple_roots: Vec<Vector>,
    ) -> Result<RootSystem> {
        let rank = simple_roots.len();
        if simple_roots.iter().any(|r| linalg::is_zero(r)) {
            return Err(Error::ZeroVector);
        }
        let gram = Matrix::from_rows(
            &simple_roots.iter().map(|a| simple_roots.iter().map(|b| linalg::dot(a, b)).collect()).collect::<Vec<_>>(),
        );
        let gram_inv = gram.inverse().ok_or(Error::SingularGram)?;

        let mut roots: Vec<Vector> = Vec::new();
        let mut seen: HashSet<Vec<NumKey>> = HashSet::new();
        let exact = simple_roots.iter().flatten().all(Num::is_exact);
        let mut insert = |v: Vector, roots: &mut Vec<Vector>| -> bool {
            if exact {
                if seen.insert(linalg::key(&v)) {
                    roots.push(v);
                    return true;
                }
                false
            } else if roots.iter().any(|r| linalg::approx_eq(r, &v, 1e-9)) {
                false
            } else {
                roots.push(v);
                true
            }
        };
        let mut frontier = Vec::new();
        for s in &simple_roots {
            for v in [s.clone(), linalg::neg(s)] {
                if insert(v.clone(), &mut roots) {
                    frontier.push(v);
                }
            }
        }
        while let Some(v) = frontier.pop() {
            for s in &simple_roots {
                let w = reflect(&v, s);
                if insert(w.clone(), &mut roots) {
                    frontier.push(w);
                }
            }
        }

        let coeffs = |v: &Vector| -> Vector {
            let pair: Vector = simple_roots.iter().map(|a| linalg::dot(a, v)).collect();
            gram_inv.mul_vec(&pair)
        };
        let mut positive: Vec<(Num, usize, Vector)> = roots
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let c = coeffs(&r);
                let positive = c.iter().all(|x| x.to_f64() > -1e-9);
                positive.then(|| (c.iter().fold(Num::ZERO, |a, b| a + *b), i, r))
            })
            .collect();
        positive.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut positive_roots: Vec<Vector> = simple_roots.clone();
        for (_, _, r) in positive {
            if !positive_roots.iter().any(|s| linalg::approx_eq(s, &r, 1e-9)) {
                positive_roots.push(r);
            }
        }

        let coroots: Vec<Vector> = simple_roots.iter().map(|a| coroot_of(a)).collect::<Result<_>>()?;
        let cartan_matrix = coroots.iter().map(|c| simple_roots.iter().map(|a| linalg::dot(c, a)).collect()).collect();
        Ok(RootSystem { type_label, rank, ambient_dim, simple_roots, positive_roots, cartan_matrix })
    }

    pub fn simple_coroots(&self) -> Vec<Vector> {
        self.simple_roots.iter().map(|a| coroot_of(a).unwrap()).collect()
    }

    /// Positive roots as [`Root`] records.
    pub fn roots(&self) -> Vec<Root> {
        self.positive_roots.iter().map(|r| Root::new(r.clone()).unwrap()).collect()
    }

    /// Positive and negative roots.
    pub fn all_roots(&self) -> Vec<Vector> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(|r| linalg::neg(r)));
        all
    }

    pub fn is_exact(&self) -> bool {
        self.simple_roots.iter().flatten().all(Num::is_exact)
    }

    /// Integer Cartan matrix, if every entry is an integer.
    pub fn cartan_integer(&self) -> Option<Vec<Vec<i64>>> {
        self.cartan_matrix.iter().map(|row| row.iter().map(Num::as_integer).collect()).collect()
    }

    pub fn is_crystallographic(&self) -> bool {
        self.cartan_integer().is_some()
    }

    pub fn require_crystallographic(&self) -> Result<()> {
        if self.is_crystallographic() {
            Ok(())
        } else {
            Err(Error::NotCrystallographic(self.type_label.to_string()))
        }
    }

    /// Coefficients of `v` in the simple-root basis (v must lie in their span).
    pub fn simple_coordinates(&self, v: &[Num]) -> Vector {
        let gram = Matrix::from_rows(
            &self
                .simple_roots
                .iter()
                .map(|a| self.simple_roots.iter().map(|b| linalg::dot(a, b)).collect())
                .collect::<Vec<_>>(),
        );
        let pair: Vector = self.simple_roots.iter().map(|a| linalg::dot(a, v)).collect();
        gram.inverse().expect("simple roots independent").mul_vec(&pair)
    }

    pub fn height(&self, root: &[Num]) -> Num {
        self.simple_coordinates(root).into_iter().fold(Num::ZERO, |a, b| a + b)
    }

    /// The positive root of maximal height.
    pub fn highest_root(&self) -> Vector {
        self.positive_roots
            .iter()
            .max_by(|a, b| self.height(a).partial_cmp(&self.height(b)).unwrap())
            .cloned()
            .expect("nonempty root system")
    }

    pub fn classified_order(&self) -> u128 {
        classified_order(self.type_label, self.rank)
    }

    /// Check the structural invariants: Cartan diagonal and signs, closure,
    /// integrality of positive roots over the simple roots (crystallographic).
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidSpec(format!("root system {}: {what}", self.type_label)));
        if self.simple_roots.len() != self.rank || self.cartan_matrix.len() != self.rank {
            return bad("rank mismatch");
        }
        if self.simple_roots.iter().chain(&self.positive_roots).any(|r| r.len() != self.ambient_dim) {
            return bad("ambient dimension mismatch");
        }
        for (i, row) in self.cartan_matrix.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if i == j && !c.approx_eq(&Num::int(2), 1e-12) {
                    return bad("cartan diagonal");
                }
                if i != j && c.to_f64() > 1e-12 {
                    return bad("positive off-diagonal cartan entry");
                }
            }
        }
        let all = self.all_roots();
        let contains = |v: &Vector| all.iter().any(|r| linalg::approx_eq(r, v, 1e-9));
        for a in &all {
            for b in &all {
                if !contains(&reflect(b, a)) {
                    return bad("not closed under reflections");
                }
            }
        }
        if self.is_crystallographic() {
            for r in &self.positive_roots {
                let c = self.simple_coordinates(r);
                if c.iter().any(|x| x.as_integer().is_none_or(|k| k < 0)) {
                    return bad("positive root not a nonnegative integer combination");
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RootSystemJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<RootSystem> {
        let j: RootSystemJson = serde_json::from_str(s)?;
        let rs = RootSystem::try_from(j)?;
        rs.validate()?;
        Ok(rs)
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RootSystemJson {
    #[serde(rename = "type")]
    type_label: String,
    rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    ambient_dim: usize,
    simple_roots: Vec<Vector>,
    positive_roots: Vec<Vector>,
    cartan_matrix: Vec<Vec<Num>>,
}

impl From<&RootSystem> for RootSystemJson {
    fn from(rs: &RootSystem) -> Self {
        RootSystemJson {
            type_label: rs.type_label.letter().to_string(),
            rank: rs.rank,
            m: rs.type_label.dihedral_m(),
            ambient_dim: rs.ambient_dim,
            simple_roots: rs.simple_roots.clone(),
            positive_roots: rs.positive_roots.clone(),
            cartan_matrix: rs.cartan_matrix.clone(),
        }
    }
}

impl TryFrom<RootSystemJson> for RootSystem {
    type Error = Error;
    fn try_from(j: RootSystemJson) -> Result<RootSystem> {
        Ok(RootSystem {
            type_label: TypeLabel::parse(&j.type_label, j.m)?,
            rank: j.rank,
            ambient_dim: j.ambient_dim,
            simple_roots: j.simple_roots,
            positive_roots: j.positive_roots,
            cartan_matrix: j.cartan_matrix,
        })
    }
}

impl Serialize for RootSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootSystemJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RootSystemJson::deserialize(d)?;
        RootSystem::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Element of the weight space, identified with a vector via the inner product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub coords: Vector,
}

/// Fundamental weights γᵢ inside span(simple roots), with ⟨γᵢ, α̌ⱼ⟩ = δᵢⱼ.
pub fn fundamental_weights(rs: &RootSystem) -> Result<Vec<WeightVector>> {
    rs.require_crystallographic()?;
    Ok(coroot_dual_basis(rs)?.into_iter().map(|coords| WeightVector { coords }).collect())
}

/// Basis of span(simple roots) dual to the simple coroots. Defined for every
/// type, including the non-crystallographic dihedral ones.
pub fn coroot_dual_basis(rs: &RootSystem) -> Result<Vec<Vector>> {
    let coroots = rs.simple_coroots();
    // pairing[k][j] = ⟨αₖ, α̌ⱼ⟩; γᵢ = Σₖ M[i][k] αₖ with M = pairing⁻¹.
    let pairing = Matrix::from_rows(
        &rs.simple_roots.iter().map(|a| coroots.iter().map(|c| linalg::dot(a, c)).collect()).collect::<Vec<_>>(),
    );
    let m = pairing.inverse().ok_or(Error::SingularGram)?;
    Ok((0..rs.rank)
        .map(|i| {
            let mut g = linalg::zeros(rs.ambient_dim);
            for (k, a) in rs.simple_roots.iter().enumerate() {
                g = linalg::add(&g, &linalg::scale(a, m[(i, k)]));
            }
            g
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Γ, spanned by the simple coroots.
    Coroot,
    /// Γ*, spanned by the fundamental weights.
    Weight,
}

/// Full-rank lattice inside the span of a root system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeJson")]
pub struct Lattice {
    pub basis: Vec<Vector>,
    pub kind: LatticeKind,
    /// Dual basis inside the same span: ⟨basisᵢ, dualⱼ⟩ = δᵢⱼ.
    #[serde(skip)]
    dual: Vec<Vector>,
}

#[derive(Deserialize)]
struct LatticeJson {
    basis: Vec<Vector>,
    kind: LatticeKind,
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Lattice> {
        Lattice::new(j.basis, j.kind)
    }
}

impl Lattice {
    pub fn new(basis: Vec<Vector>, kind: LatticeKind) -> Result<Lattice> {
        let gram = Matrix::from_rows(
            &basis.iter().map(|a| basis.iter().map(|b| linalg::dot(a, b)).collect()).collect::<Vec<_>>(),
        );
        let inv = gram.inverse().ok_or(Error::SingularGram)?;
        let dim = basis.first().map_or(0, Vec::len);
        let dual = (0..basis.len())
            .map(|j| {
                let mut d = linalg::zeros(dim);
                for (k, b) in basis.iter().enumerate() {
                    d = linalg::add(&d, &linalg::scale(b, inv[(k, j)]));
                }
                d
            })
            .collect();
        Ok(Lattice { basis, kind, dual })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates over the basis (not necessarily integral); `None` if `v`
    /// has a component outside the span.
    pub fn coordinates(&self, v: &[Num]) -> Option<Vector> {
        let c: Vector = self.dual.iter().map(|d| linalg::dot(v, d)).collect();
        let back = self.combine(&c);
        linalg::approx_eq(&back, v, 1e-9).then_some(c)
    }

    /// Integer coordinates if `v` is a lattice vector.
    pub fn integer_coordinates(&self, v: &[Num]) -> Option<Vec<i64>> {
        self.coordinates(v)?.iter().map(Num::as_integer).collect()
    }

    pub fn contains(&self, v: &[Num]) -> bool {
        self.integer_coordinates(v).is_some()
    }

    pub fn combine(&self, coords: &[Num]) -> Vector {
        let dim = self.basis.first().map_or(0, Vec::len);
        self.basis.iter().zip(coords).fold(linalg::zeros(dim), |acc, (b, c)| linalg::add(&acc, &linalg::scale(b, *c)))
    }

    pub fn point(&self, coords: &[i64]) -> Vector {
        self.combine(&linalg::from_ints(coords))
    }
}

/// (Γ, Γ*) = (coroot lattice, weight lattice).
pub fn lattices(rs: &RootSystem) -> Result<(Lattice, Lattice)> {
    let weights = fundamental_weights(rs)?;
    let coroot = Lattice::new(rs.simple_coroots(), LatticeKind::Coroot)?;
    let weight = Lattice::new(weights.into_iter().map(|w| w.coords).collect(), LatticeKind::Weight)?;
    Ok((coroot, weight))
}

/// Invariant factors of Γ*/Γ, when Γ ⊂ Γ* (i.e. the coroots pair integrally
/// with each other). Their product is the index [Γ* : Γ].
pub fn weight_coroot_invariants(rs: &RootSystem) -> Result<Option<Vec<i64>>> {
    let (coroot, weight) = lattices(rs)?;
    let rows: Option<Vec<Vec<i64>>> = coroot.basis.iter().map(|c| weight.integer_coordinates(c)).collect();
    Ok(rows.map(smith_invariants))
}

/// Diagonal of the Smith normal form of a small integer matrix.
#[allow(clippy::needless_range_loop)]
pub fn smith_invariants(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Pick the smallest nonzero entry in the remaining block as pivot.
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return {
                    diag.extend(std::iter::repeat_n(0, rows.min(cols) - t));
                    diag
                };
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                for j in t..cols {
                    m[i][j] -= q * m[t][j];
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                for i in t..rows {
                    m[i][j] -= q * m[i][t];
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any entry not divisible by p into row t.
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % p != 0);
            if let Some((i, _)) = bad {
                for j in t..cols {
                    m[t][j] += m[i][j];
                }
                continue;
            }
            diag.push(p.abs());
            break;
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force closure oracle: reflect a seed set under each other until stable.
    fn closure_count(simple: &[Vector]) -> usize {
        let mut set: Vec<Vector> = simple.iter().flat_map(|s| [s.clone(), linalg::neg(s)]).collect();
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let r = reflect(b, a);
                    if !set.iter().any(|x| linalg::approx_eq(x, &r, 1e-9)) {
                        set.push(r);
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.len();
            }
        }
    }

    #[test]
    fn a1_data() {
        let rs = build_root_system(TypeLabel::A, 1).unwrap();
        assert_eq!(rs.simple_roots, vec![ints(&[1, -1])]);
        assert_eq!(rs.positive_roots.len(), 1);
        assert_eq!(rs.cartan_integer().unwrap(), vec![vec![2]]);
    }

    #[test]
    fn a2_closure_and_cartan() {
        let rs = build_root_system(TypeLabel::A, 2).unwrap();
        assert_eq!(closure_count(&rs.simple_roots), 6);
        assert_eq!(rs.positive_roots.len(), 3);
        assert_eq!(rs.cartan_integer().unwrap(), vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn g2_two_lengths_ratio_three() {
        let rs = build_root_system(TypeLabel::G, 2).unwrap();
        assert_eq!(closure_count(&rs.simple_roots), 12);
        assert_eq!(rs.positive_roots.len(), 6);
        let mut lengths: Vec<Num> = rs.roots().iter().map(|r| r.squared_length).collect();
        lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lengths.dedup();
        assert_eq!(lengths, vec![Num::int(2), Num::int(6)]);
    }

    #[test]
    fn g2_long_coroot_is_short_proportional() {
        let rs = build_root_system(TypeLabel::G, 2).unwrap();
        let long = rs.roots().into_iter().find(|r| r.squared_length == Num::int(6)).unwrap();
        // α̌ = α/3 has squared length 2/3: proportional to α with norm of a short coroot scaled by 1/3.
        assert_eq!(long.coroot, linalg::scale(&long.vector, Num::frac(1, 3)));
        assert_eq!(linalg::norm2(&long.coroot), Num::frac(2, 3));
        let short = rs.roots().into_iter().find(|r| r.squared_length == Num::int(2)).unwrap();
        assert_eq!(linalg::norm2(&short.coroot), Num::int(2));
    }

    #[test]
    fn coroot_examples() {
        assert_eq!(coroot_of(&ints(&[1, -1])).unwrap(), ints(&[1, -1]));
        assert_eq!(coroot_of(&ints(&[2, 0])).unwrap(), ints(&[1, 0]));
        assert_eq!(coroot_of(&ints(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn classification_errors() {
        assert!(matches!(build_root_system(TypeLabel::D, 3), Err(Error::InvalidClassification { .. })));
        assert!(build_root_system(TypeLabel::G, 3).is_err());
        assert!(build_root_system(TypeLabel::E, 9).is_err());
        assert!(build_root_system(TypeLabel::A, 0).is_err());
    }

    #[test]
    fn positive_root_counts() {
        let cases = [
            (TypeLabel::B, 3, 9),
            (TypeLabel::C, 3, 9),
            (TypeLabel::D, 4, 12),
            (TypeLabel::F, 4, 24),
            (TypeLabel::E, 6, 36),
            (TypeLabel::E, 7, 63),
            (TypeLabel::E, 8, 120),
            (TypeLabel::I2(5), 2, 5),
        ];
        for (t, r, n) in cases {
            let rs = build_root_system(t, r).unwrap();
            assert_eq!(rs.positive_roots.len(), n, "{t}{r}");
            rs.validate().unwrap();
        }
    }

    #[test]
    fn weights_a1() {
        let rs = build_root_system(TypeLabel::A, 1).unwrap();
        let w = fundamental_weights(&rs).unwrap();
        assert_eq!(w[0].coords, vec![Num::frac(1, 2), Num::frac(-1, 2)]);
    }

    #[test]
    fn weights_are_dual_to_coroots() {
        for (t, r) in [(TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2), (TypeLabel::F, 4), (TypeLabel::E, 6)] {
            let rs = build_root_system(t, r).unwrap();
            let w = fundamental_weights(&rs).unwrap();
            for (i, g) in w.iter().enumerate() {
                for (j, c) in rs.simple_coroots().iter().enumerate() {
                    let p = linalg::dot(&g.coords, c);
                    assert_eq!(p, if i == j { Num::ONE } else { Num::ZERO });
                    assert!(p.is_exact());
                }
            }
        }
    }

    #[test]
    fn b2_second_weight_pairings() {
        let rs = build_root_system(TypeLabel::B, 2).unwrap();
        let w = fundamental_weights(&rs).unwrap();
        let c = rs.simple_coroots();
        assert_eq!(linalg::dot(&w[1].coords, &c[0]), Num::ZERO);
        assert_eq!(linalg::dot(&w[1].coords, &c[1]), Num::ONE);
    }

    #[test]
    fn non_crystallographic_rejects_weights() {
        let rs = build_root_system(TypeLabel::I2(5), 2).unwrap();
        assert!(matches!(fundamental_weights(&rs), Err(Error::NotCrystallographic(_))));
        let rs = build_root_system(TypeLabel::I2(6), 2).unwrap();
        assert!(fundamental_weights(&rs).is_ok());
    }

    #[test]
    fn a2_index_by_smith_form() {
        let rs = build_root_system(TypeLabel::A, 2).unwrap();
        let inv = weight_coroot_invariants(&rs).unwrap().unwrap();
        assert_eq!(inv, vec![1, 3]);
        assert_eq!(inv.iter().product::<i64>(), 3);
        let (g, gs) = lattices(&rs).unwrap();
        for a in &gs.basis {
            for b in &g.basis {
                assert!(linalg::dot(a, b).as_integer().is_some());
            }
        }
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariants(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_invariants(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for (t, r) in [(TypeLabel::A, 2), (TypeLabel::G, 2), (TypeLabel::I2(5), 2)] {
            let rs = build_root_system(t, r).unwrap();
            let s = rs.to_json();
            let back = RootSystem::from_json(&s).unwrap();
            assert_eq!(back.to_json(), s);
        }
        let s = build_root_system(TypeLabel::A, 2).unwrap().to_json();
        assert!(s.starts_with(r#"{"type":"A","rank":2,"ambient_dim":3,"simple_roots":[[[1,1],[-1,1],[0,1]]"#));
    }

    #[test]
    fn corrupted_json_is_rejected() {
        let s = build_root_system(TypeLabel::A, 2).unwrap().to_json();
        let bad = s.replacen("[-1,1]", "[-2,1]", 1);
        assert!(RootSystem::from_json(&bad).is_err());
    }
}
