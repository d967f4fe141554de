//! Seed-deterministic, chunked Monte Carlo sampling.
//!
//! Points are drawn from the flat proposal over the reconstruction space
//! (uniform on the segment or the unit disk). The base seed deterministically
//! derives one sub-seed per fixed-size chunk, so the resulting sample is
//! identical for any chunk schedule — sequential or parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pom::{Point, Pom};

/// Number of draws per chunk.
pub const CHUNK_SIZE: usize = 8192;

/// SplitMix64 step; used to derive independent per-chunk seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn chunk_seed(base: u64, chunk_index: u64) -> u64 {
    splitmix64(base ^ chunk_index.wrapping_mul(0xa076_1d64_78bd_642f))
}

fn draw_point(pom: &Pom, rng: &mut ChaCha8Rng) -> Point {
    match pom.dimension() {
        1 => Point::one(2.0 * rng.random::<f64>() - 1.0),
        _ => {
            // uniform on the unit disk: radius sqrt(U), angle 2 pi V
            let r = rng.random::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            Point::two(r * phi.cos(), r * phi.sin())
        }
    }
}

/// A weighted sample from the flat proposal.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// Draws discarded because the weight function returned a non-finite
    /// value (possible only at isolated singular points of a density).
    pub rejected_nonfinite: u64,
}

/// Draws `count` proposal points with importance weights `weight_fn(pt)`.
///
/// Non-finite weights are rejected and redrawn from the same chunk stream,
/// keeping determinism. Chunks are evaluated in parallel.
pub fn sample_weighted<F>(pom: &Pom, count: usize, seed: u64, weight_fn: F) -> Result<SampleSet>
where
    F: Fn(&Point) -> f64 + Sync,
{
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be >= 1".into()));
    }
    let n_chunks = count.div_ceil(CHUNK_SIZE);
    let chunks: Vec<Result<(Vec<Point>, Vec<f64>, u64)>> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let this_len = CHUNK_SIZE.min(count - ci * CHUNK_SIZE);
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, ci as u64));
            let mut pts = Vec::with_capacity(this_len);
            let mut ws = Vec::with_capacity(this_len);
            let mut rejected = 0u64;
            for _ in 0..this_len {
                let mut attempts = 0;
                loop {
                    let pt = draw_point(pom, &mut rng);
                    let w = weight_fn(&pt);
                    if w.is_finite() && w >= 0.0 {
                        pts.push(pt);
                        ws.push(w);
                        break;
                    }
                    rejected += 1;
                    attempts += 1;
                    if attempts > 10_000 {
                        return Err(Error::IntegrationFailure(
                            "weight function is non-finite on a set of positive measure".into(),
                        ));
                    }
                }
            }
            Ok((pts, ws, rejected))
        })
        .collect();

    let mut points = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let mut rejected_nonfinite = 0;
    for chunk in chunks {
        let (p, w, r) = chunk?;
        points.extend(p);
        weights.extend(w);
        rejected_nonfinite += r;
    }
    Ok(SampleSet { points, weights, rejected_nonfinite })
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Self-normalized weighted mean of `f` with its standard error
    /// (delta-method estimate for the ratio).
    pub fn weighted_mean<F: Fn(&Point) -> f64>(&self, f: F) -> (f64, f64) {
        let wsum: f64 = self.weights.iter().sum();
        if wsum <= 0.0 {
            return (f64::NAN, f64::NAN);
        }
        let mut num = 0.0;
        let mut vals = Vec::with_capacity(self.len());
        for (pt, &w) in self.points.iter().zip(&self.weights) {
            let v = f(pt);
            num += w * v;
            vals.push(v);
        }
        let mean = num / wsum;
        let mut var = 0.0;
        for (&v, &w) in vals.iter().zip(&self.weights) {
            let e = w * (v - mean);
            var += e * e;
        }
        (mean, var.sqrt() / wsum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let pom = Pom::crosshair4();
        let a = sample_weighted(&pom, 20_000, 7, |_| 1.0).unwrap();
        let b = sample_weighted(&pom, 20_000, 7, |_| 1.0).unwrap();
        assert_eq!(a.points.len(), b.points.len());
        for (p, q) in a.points.iter().zip(&b.points) {
            assert_eq!(p.coords(), q.coords());
        }
    }

    #[test]
    fn seeds_differ() {
        let pom = Pom::coin();
        let a = sample_weighted(&pom, 100, 1, |_| 1.0).unwrap();
        let b = sample_weighted(&pom, 100, 2, |_| 1.0).unwrap();
        assert_ne!(a.points[0].coords(), b.points[0].coords());
    }

    #[test]
    fn uniform_disk_mean_indicator() {
        let pom = Pom::trine3();
        let s = sample_weighted(&pom, 100_000, 42, |_| 1.0).unwrap();
        let (mean, stderr) = s.weighted_mean(|pt| if pt.coords()[0] > 0.0 { 1.0 } else { 0.0 });
        assert!((mean - 0.5).abs() < 3.0 * stderr, "mean {mean} stderr {stderr}");
        assert!(stderr < 0.002);
    }

    #[test]
    fn nonfinite_weights_are_redrawn() {
        let pom = Pom::coin();
        // singular but integrable at u = 0.; finite everywhere else
        let s = sample_weighted(&pom, 5_000, 3, |pt| {
            let u = pt.coords()[0];
            if u.abs() < 1e-12 { f64::INFINITY } else { 1.0 }
        })
        .unwrap();
        assert_eq!(s.len(), 5_000);
        assert!(s.weights.iter().all(|w| w.is_finite()));
    }
}
