//! Invariant differential forms Σ λ(F) dF_{i₁} ∧ … ∧ dF_{iₖ} built on a
//! separating map, and their pullback deviation under isometries.

use std::hash::Hasher;

use fnv::FnvHasher;
use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::Polynomial;
use crate::reflection_groups::Isometry;
use crate::sampling::{cube_point, rng_for};
use crate::separator::SeparatingMap;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormTerm {
    /// Strictly increasing output indices.
    pub indices: Vec<usize>,
    /// λ as a polynomial in the output coordinates of F.
    pub coefficient: Polynomial,
}

#[derive(Clone, Debug)]
pub struct InvariantForm {
    pub degree: usize,
    pub terms: Vec<FormTerm>,
    pub map: SeparatingMap,
}

/// Serializable descriptor; the map is referenced by the FNV-1a hash of its JSON.
#[derive(Clone, Debug, Serialize)]
pub struct FormDescriptor {
    pub degree: usize,
    pub terms: Vec<FormTerm>,
    pub map_hash: String,
}

pub fn build_form(map: &SeparatingMap, degree: usize, terms: Vec<FormTerm>) -> Result<InvariantForm> {
    for t in &terms {
        let ok = t.indices.len() == degree
            && t.indices.windows(2).all(|w| w[0] < w[1])
            && t.indices.iter().all(|&i| i < map.output_dim);
        if !ok {
            return Err(Error::BadIndexTuple(t.indices.clone()));
        }
        if t.coefficient.nvars() != map.output_dim {
            return Err(Error::DimensionMismatch { expected: map.output_dim, got: t.coefficient.nvars() });
        }
    }
    Ok(InvariantForm { degree, terms, map: map.clone() })
}

impl InvariantForm {
    /// ω(x; v₁, …, vₖ) = Σ λ(F(x))·det[⟨dF_{i_a}(x), v_b⟩].
    pub fn evaluate(&self, x: &[f64], vs: &[Vec<f64>]) -> f64 {
        assert_eq!(vs.len(), self.degree, "one vector per form degree");
        let fx = self.map.eval(x);
        let jac = self.map.jacobian(x);
        self.terms
            .iter()
            .map(|t| {
                let k = self.degree;
                let m = DMatrix::from_fn(k, k, |a, b| {
                    jac[t.indices[a]].iter().zip(&vs[b]).map(|(p, q)| p * q).sum::<f64>()
                });
                t.coefficient.eval(&fx) * m.determinant()
            })
            .sum()
    }

    pub fn descriptor(&self) -> FormDescriptor {
        let json = serde_json::to_string(&self.map).expect("map serializes");
        FormDescriptor {
            degree: self.degree,
            terms: self.terms.clone(),
            map_hash: format!("{:016x}", fnv1a(json.as_bytes())),
        }
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

/// The form dF₁ ∧ … ∧ dFₙ with coefficient 1.
pub fn jacobian_form(map: &SeparatingMap) -> Result<InvariantForm> {
    let n = map.output_dim;
    build_form(
        map,
        n,
        vec![FormTerm { indices: (0..n).collect(), coefficient: Polynomial::constant(n, crate::num::Num::ONE) }],
    )
}

/// max |ω(g·x; g·v₁, …, g·vₖ) − ω(x; v₁, …, vₖ)| over seeded points and frames.
pub fn pullback_deviation(form: &InvariantForm, g: &Isometry, samples: usize, seed: u64) -> f64 {
    let n = form.map.dim();
    let mut worst: f64 = 0.0;
    for s in 0..samples as u64 {
        let mut rng = rng_for(seed, s);
        let x = cube_point(&mut rng, n, 1.0);
        let vs: Vec<Vec<f64>> = (0..form.degree).map(|_| cube_point(&mut rng, n, 1.0)).collect();
        let gvs: Vec<Vec<f64>> = vs.iter().map(|v| g.apply_vector_f64(v)).collect();
        worst = worst.max((form.evaluate(&g.apply_f64(&x), &gvs) - form.evaluate(&x, &vs)).abs());
    }
    worst
}
