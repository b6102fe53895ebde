//! Random geometric inputs for Monte Carlo checks. All draws go through the
//! caller's RNG so results are reproducible per seed.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{norm, Point, Simplex};

pub fn uniform_point<R: Rng + ?Sized>(d: usize, rng: &mut R, lo: f64, hi: f64) -> Point {
    Point::new((0..d).map(|_| rng.random_range(lo..hi)).collect()).expect("finite draw")
}

/// Uniform direction on the unit sphere of `R^d`.
pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let len = norm(&v);
        if len > 1e-12 {
            return v.into_iter().map(|x| x / len).collect();
        }
    }
}

/// Simplex with vertices uniform in `[-1, 1]^d`, redrawn until
/// `|det| > min_ratio * diameter^d`.
pub fn conditioned_simplex<R: Rng + ?Sized>(d: usize, rng: &mut R, min_ratio: f64) -> Simplex {
    loop {
        let vertices = (0..=d).map(|_| uniform_point(d, rng, -1.0, 1.0)).collect();
        if let Ok(s) = Simplex::with_conditioning(vertices, min_ratio) {
            return s;
        }
    }
}

/// Positive affine weights summing to one, each at least `floor`.
pub fn interior_weights<R: Rng + ?Sized>(k: usize, rng: &mut R, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random_range(f64::EPSILON..1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    let spare = 1.0 - floor * k as f64;
    raw.into_iter().map(|w| floor + spare * w / total).collect()
}
