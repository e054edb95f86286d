use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::dimacs::Instance;
use crate::graph::{DemandVector, LengthGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstanceKind {
    /// Uniform points in the unit square joined within a radius chosen for
    /// connectivity; Euclidean lengths. Resampled until connected with at
    /// most `max_edges` edges.
    RandomGeometric { n: usize, max_edges: usize },
    /// `side × side` unit grid.
    Grid { side: usize },
    /// Unit-length star, centre 0.
    Star { leaves: usize },
    /// Path with lengths in `[0.5, 1.5]`.
    Path { n: usize },
    /// Random geometric graph with a single unit dipole.
    Dipole { n: usize },
}

const RESAMPLE_LIMIT: usize = 1000;

/// Multiples of 1/64 so that sums are exact in binary floating point.
fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 64.0) as u32;
    lo + rng.gen_range(0..=steps) as f64 / 64.0
}

fn geometric(n: usize, max_edges: usize, rng: &mut ChaCha8Rng) -> Result<LengthGraph<f64>> {
    if n < 2 {
        return Err(Error::Config("random geometric graph needs n >= 2".into()));
    }
    let nf = n as f64;
    let radius = (1.6 * nf.ln().max(1.0) / (std::f64::consts::PI * nf)).sqrt();
    for _ in 0..RESAMPLE_LIMIT {
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let d = (pts[u].0 - pts[v].0).hypot(pts[u].1 - pts[v].1);
                if d <= radius {
                    edges.push((u, v, d.max(1e-6)));
                }
            }
        }
        if edges.len() > max_edges {
            continue;
        }
        if let Ok(g) = LengthGraph::new(n, &edges) {
            return Ok(g);
        }
    }
    Err(Error::Config(format!(
        "no connected geometric graph with n = {n} and <= {max_edges} edges after {RESAMPLE_LIMIT} samples"
    )))
}

/// Random dyadic demands on about a quarter of the vertices; vertex 0 takes
/// the balancing residue, so the total is exactly zero.
fn spread_demand(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut b = vec![0.0; n];
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(rng);
    let count = (n / 4).max(1).min(n - 1);
    for &v in &order[..count] {
        let mut x = 0.0;
        while x == 0.0 {
            x = dyadic(rng, -1.0, 1.0);
        }
        b[v] = x;
    }
    b[0] = -b[1..].iter().sum::<f64>();
    if b[0] == 0.0 {
        b[0] = -0.5;
        b[order[0]] += 0.5;
    }
    b
}

pub fn gen_instance(kind: InstanceKind, seed: u64) -> Result<Instance<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (graph, b) = match kind {
        InstanceKind::RandomGeometric { n, max_edges } => {
            let g = geometric(n, max_edges, &mut rng)?;
            let b = spread_demand(n, &mut rng);
            (g, b)
        }
        InstanceKind::Dipole { n } => {
            let g = geometric(n, usize::MAX, &mut rng)?;
            let s = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n - 1);
            if t >= s {
                t += 1;
            }
            (g, DemandVector::dipole(n, s, t).into_inner())
        }
        InstanceKind::Grid { side } => {
            if side < 2 {
                return Err(Error::Config("grid side must be >= 2".into()));
            }
            let mut edges = Vec::new();
            for r in 0..side {
                for c in 0..side {
                    let v = r * side + c;
                    if c + 1 < side {
                        edges.push((v, v + 1, 1.0));
                    }
                    if r + 1 < side {
                        edges.push((v, v + side, 1.0));
                    }
                }
            }
            let g = LengthGraph::new(side * side, &edges)?;
            let b = spread_demand(side * side, &mut rng);
            (g, b)
        }
        InstanceKind::Star { leaves } => {
            if leaves < 2 {
                return Err(Error::Config("star needs >= 2 leaves".into()));
            }
            let edges: Vec<_> = (1..=leaves).map(|v| (0, v, 1.0)).collect();
            let g = LengthGraph::new(leaves + 1, &edges)?;
            let b = spread_demand(leaves + 1, &mut rng);
            (g, b)
        }
        InstanceKind::Path { n } => {
            if n < 2 {
                return Err(Error::Config("path needs n >= 2".into()));
            }
            let edges: Vec<_> = (0..n - 1)
                .map(|v| (v, v + 1, dyadic(&mut rng, 0.5, 1.5)))
                .collect();
            let g = LengthGraph::new(n, &edges)?;
            let b = spread_demand(n, &mut rng);
            (g, b)
        }
    };
    let total: f64 = b.iter().sum();
    if total != 0.0 {
        return Err(Error::Contract(format!("generator left residue {total:e}")));
    }
    Ok(Instance {
        graph,
        demand: DemandVector::new(b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dipole_has_two_unit_entries() {
        let inst = gen_instance(InstanceKind::Dipole { n: 30 }, 3).unwrap();
        let nz: Vec<f64> = inst.demand.values().iter().copied().filter(|v| *v != 0.0).collect();
        assert_eq!(nz.len(), 2);
        assert_eq!(nz.iter().sum::<f64>(), 0.0);
        assert!(nz.iter().all(|v| v.abs() == 1.0));
    }

    #[test]
    fn grid_counts() {
        let inst = gen_instance(InstanceKind::Grid { side: 4 }, 0).unwrap();
        assert_eq!(inst.graph.num_vertices(), 16);
        assert_eq!(inst.graph.num_edges(), 24);
    }

    #[test]
    fn geometric_connected_and_balanced() {
        for seed in 0..3 {
            let inst = gen_instance(
                InstanceKind::RandomGeometric {
                    n: 100,
                    max_edges: 1200,
                },
                seed,
            )
            .unwrap();
            assert_eq!(inst.graph.num_vertices(), 100);
            assert!(inst.graph.num_edges() <= 1200);
            assert_eq!(inst.demand.values().iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let k = InstanceKind::Path { n: 12 };
        let (a, b) = (gen_instance(k, 9).unwrap(), gen_instance(k, 9).unwrap());
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.demand, b.demand);
    }
}
