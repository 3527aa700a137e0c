//! Monte-Carlo measure oracle, independent of the ψ-based closed forms.

use crate::density::{Density, Domain};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Estimates μ(B_R ∩ domain) by sampling the bounding box uniformly and
/// averaging the density over the ball.
pub fn half_ball_measure_mc(d: &Density, radius: f64, samples: u64, seed: u64) -> McEstimate {
    let n = d.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last_lo = if d.domain == Domain::HalfSpace { 0.0 } else { -radius };
    let box_vol = (2.0 * radius).powi(n as i32 - 1) * (radius - last_lo);
    let r2 = radius * radius;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0f64; n];
    for _ in 0..samples {
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = if i + 1 == n {
                rng.gen_range(last_lo..radius)
            } else {
                rng.gen_range(-radius..radius)
            };
        }
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let w = if norm2 < r2 { d.weight(&x) } else { 0.0 };
        sum += w;
        sum_sq += w * w;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    McEstimate {
        value: box_vol * mean,
        std_error: box_vol * (var / samples as f64).sqrt(),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unweighted_half_disk() {
        let d = Density::half_space(0.0, 0.0, 2).unwrap();
        let est = half_ball_measure_mc(&d, 1.0, 2_000_000, 42);
        assert!((est.value - PI / 2.0).abs() < 3.0 * est.std_error);
    }

    #[test]
    fn weighted_half_ball_matches_psi() {
        let d = Density::half_space(1.5, 0.5, 3).unwrap();
        let exact = d.half_ball_measure(1.2).unwrap();
        let est = half_ball_measure_mc(&d, 1.2, 2_000_000, 7);
        assert!((est.value - exact).abs() < 3.0 * est.std_error);
    }
}
