use serde::Serialize;

use crate::embed::PointCloud;
use crate::error::{Error, Result};
use crate::lattice::{LatticeDemands, LatticePoint};
use crate::scalar::Real;

/// Largest lattice depth chosen automatically.
pub const MAX_LEVELS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapReport {
    pub levels: u32,
    /// Integer coordinates in units of `2^{-T}`, one per input point.
    pub points: Vec<LatticePoint>,
    /// `ℓ1` displacement of each point.
    pub displacement: Vec<f64>,
    pub max_displacement: f64,
    /// `k·2^{-T-1}`
    pub bound: f64,
    /// Pairs of input points that landed on the same lattice point.
    pub merged: usize,
}

/// Smallest `T` with `2^{-T} ≤ d_min/(4k)`, within `1..=MAX_LEVELS`.
pub fn choose_levels<F: Real>(cloud: &PointCloud<F>) -> u32 {
    let k = cloud.dim().max(1) as f64;
    match cloud.min_positive_distance() {
        Some(d) => {
            let need = (4.0 * k / d.to_f64_lossy()).log2().ceil();
            if need.is_finite() {
                (need.max(1.0) as u32).min(MAX_LEVELS)
            } else {
                MAX_LEVELS
            }
        }
        None => 1,
    }
}

/// Nearest point of `(2^{-T}ℤ)^k`, ties toward `−∞`.
pub fn snap_coordinate<F: Real>(x: F, levels: u32) -> i64 {
    let scaled = x * F::pow2(levels as i32);
    // ⌈s − ½⌉ rounds half-integers down
    (scaled - F::half()).ceil().to_i64().expect("coordinate in range")
}

/// Snaps a cloud normalized to `[0,1]^k`.
pub fn snap_to_lattice<F: Real>(cloud: &PointCloud<F>, levels: u32) -> Result<SnapReport> {
    if levels > 62 {
        return Err(Error::Config(format!("{levels} levels overflow the lattice")));
    }
    let unit = F::pow2(-(levels as i32));
    let mut points = Vec::with_capacity(cloud.len());
    let mut displacement = Vec::with_capacity(cloud.len());
    for (i, p) in cloud.points().iter().enumerate() {
        if p.iter().any(|c| *c < F::zero() || *c > F::one()) {
            return Err(Error::Config(format!("point {i} lies outside the unit box")));
        }
        let q: LatticePoint = p.iter().map(|&c| snap_coordinate(c, levels)).collect();
        let d: F = p
            .iter()
            .zip(&q)
            .map(|(&c, &z)| (c - F::of_f64(z as f64) * unit).abs())
            .sum();
        points.push(q);
        displacement.push(d.to_f64_lossy());
    }
    let mut sorted = points.clone();
    sorted.sort();
    sorted.dedup();
    let merged = points.len() - sorted.len();
    let k = cloud.dim() as f64;
    Ok(SnapReport {
        levels,
        max_displacement: displacement.iter().copied().fold(0.0, f64::max),
        bound: k * 2f64.powi(-(levels as i32) - 1),
        points,
        displacement,
        merged,
    })
}

impl SnapReport {
    /// Vertex demands moved onto the lattice; coincident points add up.
    pub fn transfer<S: crate::scalar::Scalar>(&self, b: &[S]) -> Result<LatticeDemands<S>> {
        crate::error::check_dim("snap demand", self.points.len(), b.len())?;
        let dim = self.points.first().map_or(1, |p| p.len());
        LatticeDemands::from_entries(
            self.levels,
            dim,
            self.points.iter().cloned().zip(b.iter().copied()),
        )
    }

    /// `Σ_v |b(v)|·k·2^{-T-1}`
    pub fn cost_bound(&self, b: &[f64]) -> f64 {
        b.iter().map(|v| v.abs()).sum::<f64>() * self.bound
    }
}
