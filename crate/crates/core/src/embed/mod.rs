//! Graph metric to lattice points: Bourgain into `ℓ1`, a Gaussian projection
//! down to a few coordinates (read back in `ℓ1`), normalization into the
//! unit box and rounding onto the dyadic lattice.

mod bourgain;
mod cloud;
mod distortion;
mod snap;

pub use bourgain::{bourgain_embed, bourgain_subsets, BOURGAIN_REPETITIONS};
pub use cloud::{jl_matrix, jl_project, jl_target_dim, PointCloud, ScaleRecord};
pub use distortion::{measure_distortion, DistortionReport};
pub use snap::{choose_levels, snap_coordinate, snap_to_lattice, SnapReport, MAX_LEVELS};

use serde_json::{json, Value};

use crate::scalar::Real;

/// Per-vertex coordinates plus the snap report, as one JSON value.
pub fn embedding_dump<F: Real>(cloud: &PointCloud<F>, snap: &SnapReport) -> Value {
    let coords: Vec<Vec<f64>> = cloud
        .points()
        .iter()
        .map(|p| p.iter().map(|c| c.to_f64_lossy()).collect())
        .collect();
    json!({ "coordinates": coords, "snap": snap })
}
