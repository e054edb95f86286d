use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Affine map `x ↦ (x − translation)·factor` applied by [`PointCloud::normalize`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleRecord {
    pub translation: Vec<f64>,
    pub factor: f64,
}

/// `n` points in `ℝ^k`, measured in the `ℓ1` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<F> {
    dim: usize,
    points: Vec<Vec<F>>,
    scale: Option<ScaleRecord>,
}

impl<F: Real> PointCloud<F> {
    pub fn new(dim: usize, points: Vec<Vec<F>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            crate::error::check_dim("point cloud", dim, p.len())?;
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Config(format!("point {i} has a non-finite coordinate")));
            }
        }
        Ok(PointCloud {
            dim,
            points,
            scale: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[F] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<F>] {
        &self.points
    }

    pub fn scale(&self) -> Option<&ScaleRecord> {
        self.scale.as_ref()
    }

    pub fn distance(&self, i: usize, j: usize) -> F {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (*a - *b).abs())
            .sum()
    }

    /// Smallest positive pairwise distance, if any pair is apart.
    pub fn min_positive_distance(&self) -> Option<F> {
        let mut best: Option<F> = None;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let d = self.distance(i, j);
                if d > F::zero() && best.map_or(true, |b| d < b) {
                    best = Some(d);
                }
            }
        }
        best
    }

    /// Translates the minimum corner to the origin and scales uniformly so the
    /// largest side of the bounding box is 1. Uniform scaling keeps distance
    /// ratios; the factor is recorded.
    pub fn normalize(&self) -> Self {
        let k = self.dim;
        let mut lo = vec![F::infinity(); k];
        let mut hi = vec![F::neg_infinity(); k];
        for p in &self.points {
            for c in 0..k {
                lo[c] = lo[c].min(p[c]);
                hi[c] = hi[c].max(p[c]);
            }
        }
        if self.points.is_empty() {
            lo = vec![F::zero(); k];
        }
        let side = (0..k)
            .map(|c| hi[c] - lo[c])
            .fold(F::zero(), |a, b| if b > a { b } else { a });
        let factor = if side > F::zero() { F::one() / side } else { F::one() };
        let points = self
            .points
            .iter()
            .map(|p| {
                (0..k)
                    .map(|c| ((p[c] - lo[c]) * factor).max(F::zero()).min(F::one()))
                    .collect()
            })
            .collect();
        PointCloud {
            dim: k,
            points,
            scale: Some(ScaleRecord {
                translation: lo.iter().map(|v| v.to_f64_lossy()).collect(),
                factor: factor.to_f64_lossy(),
            }),
        }
    }
}

/// Gaussian projection to `k` coordinates, entries `N(0,1)/√k`, fixed per
/// seed. With `identity_fallback` and `k` equal to the source dimension the
/// cloud is returned unchanged.
pub fn jl_project<F: Real>(
    cloud: &PointCloud<F>,
    k: usize,
    seed: u64,
    identity_fallback: bool,
) -> Result<PointCloud<F>> {
    if k == 0 || k > cloud.dim() {
        return Err(Error::Config(format!(
            "projection target {k} must lie in 1..={}",
            cloud.dim()
        )));
    }
    if identity_fallback && k == cloud.dim() {
        return Ok(cloud.clone());
    }
    let matrix = jl_matrix::<F>(k, cloud.dim(), seed);
    let points = cloud
        .points()
        .iter()
        .map(|p| {
            matrix
                .iter()
                .map(|row| row.iter().zip(p).map(|(a, x)| *a * *x).sum())
                .collect()
        })
        .collect();
    PointCloud::new(k, points)
}

/// The `k × d` projection matrix used by [`jl_project`].
pub fn jl_matrix<F: Real>(k: usize, d: usize, seed: u64) -> Vec<Vec<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 1.0 / (k as f64).sqrt();
    (0..k)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    F::of_f64(z * s)
                })
                .collect()
        })
        .collect()
}

/// Projection target `max(2, ⌈2√log₂ n⌉)`, capped at `cap`.
pub fn jl_target_dim(n: usize, cap: usize) -> usize {
    let l = (n.max(2) as f64).log2().sqrt();
    ((2.0 * l).ceil() as usize).max(2).min(cap.max(1))
}
