//! Sparse multivariate polynomials with exact or float coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::num::Num;

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Num>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Polynomial {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Num) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Polynomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial::from_terms(nvars, [(e, Num::ONE)])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Num)>) -> Polynomial {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    /// x ↦ Σ cᵢ xᵢ.
    pub fn linear_form(coeffs: &[Num]) -> Polynomial {
        let n = coeffs.len();
        Polynomial::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, *c)
            }),
        )
    }

    /// ⟨x, u⟩ᵈ expanded by the multinomial theorem.
    pub fn linear_form_power(u: &[Num], d: u32) -> Polynomial {
        let n = u.len();
        let mut p = Polynomial::zero(n);
        let support: Vec<usize> = (0..n).filter(|&i| !u[i].is_zero()).collect();
        let fact: Vec<Num> = (0..=d)
            .scan(Num::ONE, |acc, k| {
                if k > 0 {
                    *acc *= Num::int(k as i64);
                }
                Some(*acc)
            })
            .collect();
        let mut exps = vec![0u32; support.len()];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            pos: usize,
            left: u32,
            exps: &mut Vec<u32>,
            support: &[usize],
            u: &[Num],
            fact: &[Num],
            d: u32,
            p: &mut Polynomial,
        ) {
            if pos + 1 == support.len() {
                exps[pos] = left;
                let mut coef = fact[d as usize];
                let mut e = vec![0u32; u.len()];
                for (k, &i) in support.iter().enumerate() {
                    coef = coef / fact[exps[k] as usize] * u[i].powi(exps[k]);
                    e[i] = exps[k];
                }
                p.add_term(e, coef);
                return;
            }
            for a in 0..=left {
                exps[pos] = a;
                rec(pos + 1, left - a, exps, support, u, fact, d, p);
            }
        }
        if support.is_empty() {
            return if d == 0 { Polynomial::constant(n, Num::ONE) } else { p };
        }
        rec(0, d, &mut exps, &support, u, &fact, d, &mut p);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Num)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: Num) {
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    /// Remove a term outright (used to build corrupted controls).
    pub fn remove_term(&mut self, e: &Exponent) -> Option<Num> {
        self.terms.remove(e)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn is_exact(&self) -> bool {
        self.terms.values().all(Num::is_exact)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), *c);
        }
        p
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(Num::int(-1)))
    }

    pub fn scale(&self, s: Num) -> Polynomial {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), *c * s)))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.add_term(e, *ca * *cb);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::constant(self.nvars, Num::ONE), |acc, _| acc.mul(self))
    }

    /// x ↦ p(M x).
    pub fn compose_linear(&self, m: &Matrix) -> Polynomial {
        assert_eq!(m.cols(), self.nvars);
        let rows: Vec<Polynomial> = (0..m.rows()).map(|i| Polynomial::linear_form(m.row(i))).collect();
        let mut cache: BTreeMap<(usize, u32), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero(m.cols());
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(m.cols(), *c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    let pw = cache.entry((i, k)).or_insert_with(|| rows[i].pow(k));
                    t = t.mul(pw);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut f = e.clone();
                f[i] -= 1;
                (f, *c * Num::int(e[i] as i64))
            }),
        )
    }

    pub fn eval_exact(&self, x: &[Num]) -> Num {
        self.terms.iter().fold(Num::ZERO, |acc, (e, c)| acc + e.iter().zip(x).fold(*c, |m, (&k, xi)| m * xi.powi(k)))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, c)| c.to_f64() * monomial(e, x, None)).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.nvars];
        for (e, c) in &self.terms {
            let c = c.to_f64();
            for (i, gi) in g.iter_mut().enumerate() {
                if e[i] > 0 {
                    *gi += c * e[i] as f64 * monomial(e, x, Some(&[i]));
                }
            }
        }
        g
    }

    pub fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.nvars;
        let mut h = vec![vec![0.0; n]; n];
        for (e, c) in &self.terms {
            let c = c.to_f64();
            for i in 0..n {
                for j in i..n {
                    let factor = if i == j { (e[i] as f64) * (e[i] as f64 - 1.0) } else { e[i] as f64 * e[j] as f64 };
                    if factor != 0.0 {
                        let v = c * factor * monomial(e, x, Some(&[i, j]));
                        h[i][j] += v;
                        if i != j {
                            h[j][i] += v;
                        }
                    }
                }
            }
        }
        h
    }
}

/// xᵉ, with the exponents at `lower` reduced by one each (repeats allowed).
fn monomial(e: &[u32], x: &[f64], lower: Option<&[usize]>) -> f64 {
    let mut m = 1.0;
    for (i, (&k, xi)) in e.iter().zip(x).enumerate() {
        let drop = lower.map_or(0, |l| l.iter().filter(|&&j| j == i).count() as u32);
        if k > drop {
            m *= xi.powi((k - drop) as i32);
        }
    }
    m
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Exponent,
    coef: Num,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialJson {
            vars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| TermJson { exp: e.clone(), coef: *c }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolynomialJson::deserialize(d)?;
        if j.terms.iter().any(|t| t.exp.len() != j.vars) {
            return Err(serde::de::Error::custom("exponent length differs from vars"));
        }
        Ok(Polynomial::from_terms(j.vars, j.terms.into_iter().map(|t| (t.exp, t.coef))))
    }
}
