//! Seeded randomness. Every sample draws from its own ChaCha stream, so
//! reports are identical no matter how the sweep is split up.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::Vector;
use crate::num::Num;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform point in the cube [−r, r]ᵈ.
pub fn cube_point<R: Rng>(rng: &mut R, dim: usize, r: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-r..=r)).collect()
}

/// Uniform point on the unit sphere (normalized Gaussian).
pub fn unit_vector<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = crate::linalg::norm_f64(&v);
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Rational point with coordinates k/den, |k| ≤ max·den.
pub fn rational_point<R: Rng>(rng: &mut R, dim: usize, max: i64, den: i64) -> Vector {
    (0..dim).map(|_| Num::frac(rng.gen_range(-max * den..=max * den), den)).collect()
}
