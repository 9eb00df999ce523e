//! Reflection hyperplane arrangements: finite (through the origin) or
//! periodic (each base hyperplane repeated at integer multiples of an
//! offset step). Periodic families are never materialized; membership and
//! probe queries use the step arithmetic directly.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::num::{Num, Q};
use crate::reflection_groups::{AffineWeylGroup, CoxeterGroup, Factor, Isometry};
use crate::root_systems::{Lattice, LatticeKind};
use crate::sampling::{rng_for, unit_vector};

/// {x : ⟨x, normal⟩ = offset}, canonicalized so that the normal is a
/// primitive integer vector (exact mode) or a unit vector (float mode) with
/// first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: Num,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: Num) -> Result<Hyperplane> {
        let (normal, scale) = canonical_normal(&normal)?;
        Ok(Hyperplane { normal, offset: offset * scale })
    }

    pub fn value(&self, x: &[Num]) -> Num {
        linalg::dot(x, &self.normal) - self.offset
    }

    pub fn value_f64(&self, x: &[f64]) -> f64 {
        linalg::dot_f64(x, &linalg::to_f64(&self.normal)) - self.offset.to_f64()
    }

    /// Image under an isometry g = (L, t): {⟨y, Ln⟩ = c + ⟨Ln, t⟩}.
    pub fn image(&self, g: &Isometry) -> Hyperplane {
        let n = g.linear.mul_vec(&self.normal);
        let c = self.offset + linalg::dot(&n, &g.translation);
        Hyperplane::new(n, c).expect("isometries preserve nonzero normals")
    }

    pub fn distance_to_origin(&self) -> f64 {
        self.offset.to_f64().abs() / linalg::norm2(&self.normal).to_f64().sqrt()
    }

    fn same_normal(&self, other: &Hyperplane) -> bool {
        linalg::approx_eq(&self.normal, &other.normal, 1e-9)
    }
}

/// Returns the canonical normal and the factor it was scaled by.
fn canonical_normal(normal: &[Num]) -> Result<(Vector, Num)> {
    let first = normal.iter().find(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    if normal.iter().all(Num::is_exact) {
        let qs: Vec<Q> = normal.iter().map(|x| x.as_exact().unwrap()).collect();
        let lcm = qs.iter().fold(1i128, |acc, q| acc.lcm(q.denom()));
        let gcd = qs.iter().fold(0i128, |acc, q| acc.gcd(&(q.numer() * (lcm / q.denom()))));
        let mut s = Q::new(lcm, gcd);
        if first.as_exact().unwrap().is_negative() {
            s = -s;
        }
        let s = Num::Exact(s);
        Ok((linalg::scale(normal, s), s))
    } else {
        let mut s = 1.0 / linalg::norm2(normal).to_f64().sqrt();
        if first.to_f64() < 0.0 {
            s = -s;
        }
        let normal = normal.iter().map(|x| Num::Float(x.to_f64() * s)).collect();
        Ok((normal, Num::Float(s)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrangementKind {
    Finite,
    Periodic,
}

/// Position of a point relative to one family of parallel hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChamberId {
    /// Finite arrangement: sign of ⟨x, n⟩ − c per hyperplane (0 on the wall).
    Signs(Vec<i8>),
    /// Periodic arrangement: per base family, the index k of the slab
    /// k·step ≤ ⟨x, n⟩ − c < (k+1)·step and whether x lies on its lower wall.
    Slabs(Vec<(i64, bool)>),
}

impl ChamberId {
    pub fn on_wall(&self) -> bool {
        match self {
            ChamberId::Signs(s) => s.contains(&0),
            ChamberId::Slabs(s) => s.iter().any(|(_, w)| *w),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub kind: ArrangementKind,
    #[serde(rename = "hyperplanes")]
    pub base_hyperplanes: Vec<Hyperplane>,
    /// Per base hyperplane: `Some(s)` if the family is {offset + k·s : k ∈ ℤ}.
    pub offset_steps: Vec<Option<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period_lattice: Option<Lattice>,
}

impl Arrangement {
    pub fn finite(hyperplanes: Vec<Hyperplane>) -> Arrangement {
        let n = hyperplanes.len();
        Arrangement {
            kind: ArrangementKind::Finite,
            base_hyperplanes: hyperplanes,
            offset_steps: vec![None; n],
            period_lattice: None,
        }
    }

    pub fn len(&self) -> usize {
        self.base_hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base_hyperplanes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.base_hyperplanes.first().map_or(0, |h| h.normal.len())
    }

    /// Append a hyperplane (finite, non-periodic member).
    pub fn push(&mut self, h: Hyperplane) {
        self.base_hyperplanes.push(h);
        self.offset_steps.push(None);
    }

    /// Exact membership of a canonical hyperplane in the (possibly infinite) family.
    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.base_hyperplanes.iter().zip(&self.offset_steps).any(|(b, step)| {
            if !b.same_normal(h) {
                return false;
            }
            match step {
                None => h.offset.approx_eq(&b.offset, 1e-9),
                Some(s) => ((h.offset - b.offset) / *s).as_integer().is_some(),
            }
        })
    }

    /// Every family member at Euclidean distance ≤ r from the origin.
    pub fn members_in_ball(&self, r: f64) -> Vec<Hyperplane> {
        let mut out = Vec::new();
        for (b, step) in self.base_hyperplanes.iter().zip(&self.offset_steps) {
            let norm = linalg::norm2(&b.normal).to_f64().sqrt();
            match step {
                None => {
                    if b.distance_to_origin() <= r {
                        out.push(b.clone());
                    }
                }
                Some(s) => {
                    let (sf, bf) = (s.to_f64(), b.offset.to_f64());
                    let lo = ((-r * norm - bf) / sf).ceil() as i64;
                    let hi = ((r * norm - bf) / sf).floor() as i64;
                    for k in lo..=hi {
                        out.push(Hyperplane { normal: b.normal.clone(), offset: b.offset + *s * Num::int(k) });
                    }
                }
            }
        }
        out
    }

    /// Whether g maps every family member meeting the probe ball back into the
    /// family. The probe radius only matters for periodic arrangements.
    pub fn is_invariant(&self, g: &Isometry, probe_radius: f64) -> bool {
        let probe: Vec<Hyperplane> = match self.kind {
            ArrangementKind::Finite => self.base_hyperplanes.clone(),
            ArrangementKind::Periodic => self.members_in_ball(probe_radius),
        };
        probe.iter().all(|h| self.contains(&h.image(g)))
    }

    pub fn chamber_of(&self, x: &[Num]) -> ChamberId {
        let exact = x.iter().all(Num::is_exact);
        let tol = 1e-9 * (1.0 + linalg::norm2(x).to_f64().sqrt());
        let sign = |v: Num| -> i8 {
            if exact {
                v.signum()
            } else if v.to_f64().abs() < tol {
                0
            } else {
                v.to_f64().signum() as i8
            }
        };
        let families = self.base_hyperplanes.iter().zip(&self.offset_steps);
        match self.kind {
            ArrangementKind::Finite => ChamberId::Signs(families.map(|(h, _)| sign(h.value(x))).collect()),
            ArrangementKind::Periodic => ChamberId::Slabs(
                families
                    .map(|(h, step)| {
                        let v = h.value(x);
                        match step {
                            None => {
                                let s = sign(v);
                                (s as i64, s == 0)
                            }
                            Some(s) if exact => {
                                let t = v / *s;
                                let k = t.floor();
                                (k, (t - Num::int(k)).is_zero())
                            }
                            Some(s) => {
                                let t = (v / *s).to_f64();
                                let r = t.round();
                                if (t - r).abs() * s.to_f64().abs() < tol {
                                    (r as i64, true)
                                } else {
                                    (t.floor() as i64, false)
                                }
                            }
                        }
                    })
                    .collect(),
            ),
        }
    }

    pub fn chamber_of_f64(&self, x: &[f64]) -> ChamberId {
        self.chamber_of(&linalg::from_f64(x))
    }

    /// Sample points for chamber counting: normalized sums of every subset of
    /// at most `rank` normals, each nudged by a fixed jitter, plus 10·|ℋ|²
    /// seeded random unit vectors.
    pub fn chamber_samples(&self, seed: u64) -> Vec<Vec<f64>> {
        let normals: Vec<Vec<f64>> = self.base_hyperplanes.iter().map(|h| linalg::to_f64(&h.normal)).collect();
        let dim = self.dim();
        let rank =
            linalg::independent_subset(&self.base_hyperplanes.iter().map(|h| h.normal.clone()).collect::<Vec<_>>())
                .len();
        let mut jitter_rng = rng_for(seed, u64::MAX);
        let mut out = Vec::new();
        let mut subset = Vec::new();
        subsets(normals.len(), rank, 0, &mut subset, &mut |idx| {
            let mut v = vec![0.0; dim];
            for &i in idx {
                for (a, b) in v.iter_mut().zip(&normals[i]) {
                    *a += b;
                }
            }
            let n = linalg::norm_f64(&v);
            if n > 1e-12 {
                let j = unit_vector(&mut jitter_rng, dim);
                out.push(v.iter().zip(&j).map(|(a, b)| a / n + 1e-3 * b).collect());
            }
        });
        let mut rng = rng_for(seed, 0);
        for _ in 0..10 * normals.len() * normals.len() {
            out.push(unit_vector(&mut rng, dim));
        }
        out
    }

    /// Number of distinct full-sign vectors realized by [`Self::chamber_samples`].
    pub fn count_chambers(&self, seed: u64) -> Result<usize> {
        if self.kind != ArrangementKind::Finite {
            return Err(Error::NotFinite);
        }
        let seen: BTreeSet<ChamberId> =
            self.chamber_samples(seed).iter().map(|p| self.chamber_of_f64(p)).filter(|c| !c.on_wall()).collect();
        Ok(seen.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

fn subsets(n: usize, max: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if !cur.is_empty() {
        f(cur);
    }
    if cur.len() == max {
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(n, max, i + 1, cur, f);
        cur.pop();
    }
}

/// One hyperplane per positive root through the origin for finite factors;
/// for affine factors the families {⟨x, α⟩ = k : k ∈ ℤ}.
pub fn arrangement_of(group: &CoxeterGroup) -> Result<Arrangement> {
    let n = group.dim();
    let mut hyperplanes = Vec::new();
    let mut steps = Vec::new();
    let mut lattice_basis = Vec::new();
    for c in group.components() {
        let rs = c.factor.root_system();
        if c.factor.is_affine() {
            rs.require_crystallographic()?;
        }
        for root in &rs.positive_roots {
            let mut normal = linalg::zeros(n);
            normal[c.offset..c.offset + root.len()].clone_from_slice(root);
            let (canon, scale) = canonical_normal(&normal)?;
            hyperplanes.push(Hyperplane { normal: canon, offset: Num::ZERO });
            steps.push(c.factor.is_affine().then(|| scale.abs()));
        }
        if let Factor::Affine(a) = &c.factor {
            for b in &a.translation_lattice.basis {
                let mut v = linalg::zeros(n);
                v[c.offset..c.offset + b.len()].clone_from_slice(b);
                lattice_basis.push(v);
            }
        }
    }
    let periodic = steps.iter().any(Option::is_some);
    Ok(Arrangement {
        kind: if periodic { ArrangementKind::Periodic } else { ArrangementKind::Finite },
        base_hyperplanes: hyperplanes,
        offset_steps: steps,
        period_lattice: if periodic { Some(Lattice::new(lattice_basis, LatticeKind::Coroot)?) } else { None },
    })
}

/// (w̄, γ) with x ↦ w̄·x + γ mapping the fundamental alcove onto the alcove
/// containing `x`: the inverse of the folding element, split by the
/// semidirect structure.
pub fn alcove_coordinates(group: &AffineWeylGroup, x: &[Num]) -> Result<(Isometry, Vec<i64>)> {
    let (_, word) = group.fold_to_alcove(x);
    group.factor(&group.word_isometry(&word).inverse())
}
