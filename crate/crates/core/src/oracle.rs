//! Brute-force ground truth: exhaustive finite orbits and bounded affine
//! orbits, plus an audit of a separating map against them.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::num::{Num, NumKey};
use crate::reflection_groups::{AffineWeylGroup, CoxeterGroup, Factor};
use crate::sampling::{rational_point, rng_for};
use crate::separator::{SeparatingMap, SEPARATION_TOL};

pub const MAX_RADIUS: usize = 6;
/// Constancy threshold for the audit, relative to 1 + |Fᵢ|.
pub const CONSTANCY_TOL: f64 = 1e-9;

fn dedup(points: impl IntoIterator<Item = Vector>) -> Vec<Vector> {
    let mut seen: HashSet<Vec<NumKey>> = HashSet::new();
    points.into_iter().filter(|p| seen.insert(linalg::key(p))).collect()
}

/// {g·x : g ∈ W}, in enumeration order without repeats.
pub fn finite_orbit(group: &CoxeterGroup, x: &[Num]) -> Result<Vec<Vector>> {
    Ok(dedup(group.enumerate()?.iter().map(|g| g.apply(x))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitPoint {
    /// Index into the enumerated finite part.
    pub finite_index: usize,
    /// Coordinates over the simple coroots.
    pub coords: Vec<i64>,
    pub image: Vector,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedOrbit {
    pub base_point: Vector,
    pub radius: usize,
    pub points: Vec<OrbitPoint>,
}

/// All coordinate vectors in [−r, r]ᵏ, lexicographic.
fn shell(k: usize, r: i64) -> Vec<Vec<i64>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|c| {
                (-r..=r).map(move |v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect()
    })
}

/// {w̄·x + γ : w̄ ∈ W̄, γ ∈ Γ with coroot coordinates in [−R, R]}, repeats dropped.
pub fn bounded_affine_orbit(group: &AffineWeylGroup, x: &[Num], radius: usize) -> Result<BoundedOrbit> {
    if !(1..=MAX_RADIUS).contains(&radius) {
        return Err(Error::RadiusOutOfRange(radius));
    }
    let els = group.finite_part.enumerate()?;
    let shells = shell(group.rank(), radius as i64);
    let mut seen: HashSet<Vec<NumKey>> = HashSet::new();
    let mut points = Vec::new();
    for (i, w) in els.iter().enumerate() {
        let wx = w.apply(x);
        for c in &shells {
            let image = linalg::add(&wx, &group.translation_lattice.point(c));
            if seen.insert(linalg::key(&image)) {
                points.push(OrbitPoint { finite_index: i, coords: c.clone(), image });
            }
        }
    }
    Ok(BoundedOrbit { base_point: x.to_vec(), radius, points })
}

/// Orbit of `x` under a product group: finite blocks exhaustively, affine
/// blocks to lattice radius `radius`.
pub fn product_orbit(group: &CoxeterGroup, x: &[Num], radius: usize) -> Result<Vec<Vector>> {
    let mut out = vec![x.to_vec()];
    for c in group.components() {
        let d = c.factor.dim();
        let block = &x[c.offset..c.offset + d];
        let images: Vec<Vector> = match &c.factor {
            Factor::Finite(g) => dedup(g.enumerate()?.iter().map(|e| e.apply(block))),
            Factor::Affine(g) => bounded_affine_orbit(g, block, radius)?.points.into_iter().map(|p| p.image).collect(),
        };
        out = out
            .iter()
            .flat_map(|p| {
                images.iter().map(move |b| {
                    let mut q = p.clone();
                    q[c.offset..c.offset + d].clone_from_slice(b);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub base_points: usize,
    pub radius: usize,
    pub orbit_points: usize,
    /// Largest relative deviation of F across a bounded orbit.
    pub constancy_deviation: f64,
    /// Smallest ‖F(a) − F(b)‖ over base points with distinct folded representatives.
    pub distinctness_min: f64,
    pub pass: bool,
}

/// For `n` seeded rational base points: F is constant on each bounded orbit,
/// and distinct folded representatives have distinct F-values.
pub fn oracle_separation_audit(
    f: &SeparatingMap,
    group: &CoxeterGroup,
    n: usize,
    radius: usize,
    seed: u64,
) -> Result<AuditReport> {
    let mut constancy: f64 = 0.0;
    let mut orbit_points = 0;
    let mut reps: Vec<(Vector, Vec<f64>)> = Vec::with_capacity(n);
    for s in 0..n as u64 {
        let x = rational_point(&mut rng_for(seed, s), group.dim(), 1, 1000);
        let fx = f.eval(&linalg::to_f64(&x));
        for y in product_orbit(group, &x, radius)? {
            let fy = f.eval(&linalg::to_f64(&y));
            let dev = fy.iter().zip(&fx).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max);
            constancy = constancy.max(dev);
            orbit_points += 1;
        }
        reps.push((group.fold(&x), fx));
    }
    let mut distinct = f64::INFINITY;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if !linalg::approx_eq(&reps[i].0, &reps[j].0, 1e-9) {
                let d = reps[i].1.iter().zip(&reps[j].1).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                distinct = distinct.min(d);
            }
        }
    }
    Ok(AuditReport {
        base_points: n,
        radius,
        orbit_points,
        constancy_deviation: constancy,
        distinctness_min: distinct,
        pass: constancy < CONSTANCY_TOL && distinct > SEPARATION_TOL,
    })
}
