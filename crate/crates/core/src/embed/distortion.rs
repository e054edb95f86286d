use serde::Serialize;

use crate::embed::PointCloud;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    /// Scale making the smallest ratio exactly 1.
    pub mu: f64,
    /// `max ratio / min ratio`
    pub distortion: f64,
    pub worst_contracted: (usize, usize),
    pub worst_expanded: (usize, usize),
}

/// Ratios `d̃(i,j)/d(i,j)` over all pairs; `d_true` is a full distance matrix.
pub fn measure_distortion<F: Real>(
    d_true: &[Vec<F>],
    cloud: &PointCloud<F>,
) -> Result<DistortionReport> {
    let n = cloud.len();
    crate::error::check_dim("distance matrix", n, d_true.len())?;
    let mut min = (f64::INFINITY, (0, 0));
    let mut max = (0.0f64, (0, 0));
    for i in 0..n {
        crate::error::check_dim("distance matrix row", n, d_true[i].len())?;
        for j in i + 1..n {
            let d = d_true[i][j].to_f64_lossy();
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Config(format!(
                    "vertices {i} and {j} have distance {d}; the metric must separate them"
                )));
            }
            let r = cloud.distance(i, j).to_f64_lossy() / d;
            if r < min.0 {
                min = (r, (i, j));
            }
            if r > max.0 {
                max = (r, (i, j));
            }
        }
    }
    if n < 2 {
        return Ok(DistortionReport {
            mu: 1.0,
            distortion: 1.0,
            worst_contracted: (0, 0),
            worst_expanded: (0, 0),
        });
    }
    let (mu, distortion) = if min.0 > 0.0 {
        (1.0 / min.0, max.0 / min.0)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    Ok(DistortionReport {
        mu,
        distortion,
        worst_contracted: min.1,
        worst_expanded: max.1,
    })
}
