//! Finite Fourier sums x ↦ Σ c_γ e^{2πi⟨γ, x⟩} over weight-lattice points.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct TrigInvariant {
    /// Fundamental weights in ambient coordinates; weight keys are integer
    /// coordinates over this basis.
    pub weight_basis: Vec<Vec<f64>>,
    pub fourier_terms: BTreeMap<Vec<i64>, Complex64>,
    pub realness_flag: bool,
}

const REAL_TOL: f64 = 1e-14;

impl TrigInvariant {
    pub fn new(weight_basis: Vec<Vec<f64>>, terms: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> TrigInvariant {
        let mut fourier_terms = BTreeMap::new();
        for (w, c) in terms {
            assert_eq!(w.len(), weight_basis.len(), "weight coordinate length");
            *fourier_terms.entry(w).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        fourier_terms.retain(|_, c: &mut Complex64| c.norm() > 0.0);
        let mut t = TrigInvariant { weight_basis, fourier_terms, realness_flag: false };
        t.realness_flag = t.conjugate_symmetric();
        t
    }

    pub fn dim(&self) -> usize {
        self.weight_basis.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.fourier_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fourier_terms.is_empty()
    }

    /// c_{−γ} = conj(c_γ) for every stored γ.
    fn conjugate_symmetric(&self) -> bool {
        let scale = self.fourier_terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        self.fourier_terms.iter().all(|(w, c)| {
            let neg: Vec<i64> = w.iter().map(|k| -k).collect();
            let partner = self.fourier_terms.get(&neg).copied().unwrap_or_default();
            (partner - c.conj()).norm() <= REAL_TOL * scale
        })
    }

    /// γ in ambient coordinates.
    pub fn weight_vector(&self, w: &[i64]) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for (k, b) in w.iter().zip(&self.weight_basis) {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += *k as f64 * bi;
            }
        }
        v
    }

    fn phases<'a>(&'a self, x: &'a [f64]) -> impl Iterator<Item = (Vec<f64>, Complex64)> + 'a {
        self.fourier_terms.iter().map(move |(w, c)| {
            let g = self.weight_vector(w);
            let t: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
            (g, c * Complex64::from_polar(1.0, TAU * t))
        })
    }

    pub fn eval_complex(&self, x: &[f64]) -> Complex64 {
        self.phases(x).map(|(_, e)| e).sum()
    }

    pub fn gradient_complex(&self, x: &[f64]) -> Vec<Complex64> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.dim()];
        let i_tau = Complex64::new(0.0, TAU);
        for (gamma, e) in self.phases(x) {
            for (gi, a) in g.iter_mut().zip(&gamma) {
                *gi += i_tau * a * e;
            }
        }
        g
    }

    pub fn hessian_complex(&self, x: &[f64]) -> Vec<Vec<Complex64>> {
        let n = self.dim();
        let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for (gamma, e) in self.phases(x) {
            for i in 0..n {
                for j in 0..n {
                    h[i][j] -= TAU * TAU * gamma[i] * gamma[j] * e;
                }
            }
        }
        h
    }

    /// ℜ as a Fourier sum: c/2 at γ and conj(c)/2 at −γ.
    pub fn real_part(&self) -> TrigInvariant {
        self.combine(|c| c * 0.5, |c| c.conj() * 0.5)
    }

    /// ℑ as a Fourier sum: c/(2i) at γ and −conj(c)/(2i) at −γ.
    pub fn imag_part(&self) -> TrigInvariant {
        let two_i = Complex64::new(0.0, 2.0);
        self.combine(move |c| c / two_i, move |c| -c.conj() / two_i)
    }

    fn combine(&self, at: impl Fn(Complex64) -> Complex64, at_neg: impl Fn(Complex64) -> Complex64) -> TrigInvariant {
        let terms = self.fourier_terms.iter().flat_map(|(w, c)| {
            let neg: Vec<i64> = w.iter().map(|k| -k).collect();
            [(w.clone(), at(*c)), (neg, at_neg(*c))]
        });
        let mut t = TrigInvariant::new(self.weight_basis.clone(), terms.collect::<Vec<_>>());
        // Rounding in the merge can leave 1-ulp asymmetries; the construction is real.
        t.fourier_terms.retain(|_, c| c.norm() > 1e-300);
        t.realness_flag = true;
        t
    }

    /// Copy with the term at `w` removed (negative controls).
    pub fn without_term(&self, w: &[i64]) -> TrigInvariant {
        let mut t = self.clone();
        t.fourier_terms.remove(w);
        t.realness_flag = t.conjugate_symmetric();
        t
    }
}

#[derive(Serialize, Deserialize)]
struct FourierTermJson {
    weight: Vec<i64>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct TrigJson {
    weight_basis: Vec<Vec<f64>>,
    fourier: Vec<FourierTermJson>,
    real: bool,
}

impl Serialize for TrigInvariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TrigJson {
            weight_basis: self.weight_basis.clone(),
            fourier: self
                .fourier_terms
                .iter()
                .map(|(w, c)| FourierTermJson { weight: w.clone(), re: c.re, im: c.im })
                .collect(),
            real: self.realness_flag,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TrigInvariant {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TrigJson::deserialize(d)?;
        let n = j.weight_basis.len();
        if j.fourier.iter().any(|t| t.weight.len() != n) {
            return Err(serde::de::Error::custom("weight length differs from basis"));
        }
        let mut t =
            TrigInvariant::new(j.weight_basis, j.fourier.into_iter().map(|t| (t.weight, Complex64::new(t.re, t.im))));
        t.realness_flag = j.real && t.realness_flag;
        Ok(t)
    }
}
