use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embed::PointCloud;
use crate::error::Result;
use crate::graph::{shortest_paths, LengthGraph};
use crate::scalar::Real;

/// Repetitions per scale are `⌈c·ln n⌉`.
pub const BOURGAIN_REPETITIONS: f64 = 4.0;

/// Random subsets, scale by scale: sizes `2^i` for `i = 1..⌈log₂ n⌉`
/// (clamped to `n − 1`: the full vertex set gives a constant coordinate),
/// `⌈c·ln n⌉` draws each.
pub fn bourgain_subsets(n: usize, c: f64, seed: u64) -> Vec<Vec<usize>> {
    if n < 2 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scales = (n as f64).log2().ceil() as u32;
    let reps = ((c * (n as f64).ln()).ceil() as usize).max(1);
    let mut out = Vec::with_capacity(scales as usize * reps);
    for i in 1..=scales {
        let size = (1usize << i).min(n - 1);
        for _ in 0..reps {
            let mut s = sample(&mut rng, n, size).into_vec();
            s.sort_unstable();
            out.push(s);
        }
    }
    out
}

/// Coordinates `d(x, S)/D` over the `D` subsets from [`bourgain_subsets`].
/// Every coordinate is 1-Lipschitz, so the `ℓ1` map is non-expansive.
pub fn bourgain_embed<F: Real>(g: &LengthGraph<F>, c: f64, seed: u64) -> Result<PointCloud<F>> {
    let n = g.num_vertices();
    let subsets = bourgain_subsets(n, c, seed);
    if subsets.is_empty() {
        return PointCloud::new(1, vec![vec![F::zero()]; n]);
    }
    let d = subsets.len();
    let inv = F::one() / F::of_usize(d);
    let mut points = vec![Vec::with_capacity(d); n];
    for s in &subsets {
        let dist = shortest_paths(g, s);
        for (p, v) in points.iter_mut().zip(dist) {
            p.push(v * inv);
        }
    }
    PointCloud::new(d, points)
}
