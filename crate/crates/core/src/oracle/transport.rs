use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{DemandVector, LengthGraph};
use crate::oracle::exact_mcf;
use crate::scalar::Scalar;

pub const EMD_POINT_LIMIT: usize = 60;

/// Balanced transportation problem: ship `supply[i]` to `demand[j]` at unit
/// cost `cost[i][j]`.
#[derive(Debug, Clone)]
pub struct TransportationInstance<F> {
    pub supply: Vec<F>,
    pub demand: Vec<F>,
    pub cost: Vec<Vec<F>>,
}

#[derive(Debug, Clone)]
pub struct TransportSolution<F> {
    pub cost: F,
    /// `(i, j, amount)` for basic cells.
    pub plan: Vec<(usize, usize, F)>,
    pub row_dual: Vec<F>,
    pub col_dual: Vec<F>,
    pub pivots: usize,
}

impl<F: Scalar> TransportationInstance<F> {
    pub fn new(supply: Vec<F>, demand: Vec<F>, cost: Vec<Vec<F>>) -> Result<Self> {
        if supply.is_empty() || demand.is_empty() {
            return Err(Error::Config("transportation needs supplies and demands".into()));
        }
        if supply.iter().chain(&demand).any(|&m| !(m > F::zero())) {
            return Err(Error::Config("transport masses must be positive".into()));
        }
        if cost.len() != supply.len() || cost.iter().any(|r| r.len() != demand.len()) {
            return Err(Error::Config("cost matrix shape mismatch".into()));
        }
        let (s, d): (F, F) = (supply.iter().copied().sum(), demand.iter().copied().sum());
        let tol = F::from_f64(1e-12).unwrap_or_else(F::zero) * s.max_of(F::one());
        if (s - d).abs() > tol {
            return Err(Error::InfeasibleDemand {
                total: (s - d).to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        Ok(TransportationInstance {
            supply,
            demand,
            cost,
        })
    }

    /// Transportation simplex: north-west corner start, MODI pricing with
    /// the most negative reduced cost entering.
    pub fn solve(&self) -> Result<TransportSolution<F>> {
        let (m, n) = (self.supply.len(), self.demand.len());
        let mut basis: Vec<(usize, usize, F)> = Vec::with_capacity(m + n - 1);
        let (mut s, mut d) = (self.supply.clone(), self.demand.clone());
        let (mut i, mut j) = (0, 0);
        loop {
            let q = s[i].min_of(d[j]);
            basis.push((i, j, q));
            s[i] -= q;
            d[j] -= q;
            if i == m - 1 && j == n - 1 {
                break;
            }
            // on a tie, advance the row so the basis stays a spanning tree
            if i < m - 1 && (s[i] <= d[j] || j == n - 1) {
                i += 1;
            } else {
                j += 1;
            }
        }
        let scale: F = self.supply.iter().copied().sum();
        let tol = F::from_f64(1e-12).unwrap_or_else(F::zero) * scale.max_of(F::one());
        let limit = 50 * (m + n) * (m + n) + 1000;
        let mut pivots = 0;
        loop {
            let (u, v) = self.duals(&basis, m, n);
            let mut enter = None;
            let mut best = -tol;
            for (r, row) in self.cost.iter().enumerate() {
                for (c, &cost) in row.iter().enumerate() {
                    let rc = cost - u[r] - v[c];
                    if rc < best {
                        best = rc;
                        enter = Some((r, c));
                    }
                }
            }
            let Some((r, c)) = enter else {
                let total = basis
                    .iter()
                    .map(|&(a, b, q)| self.cost[a][b] * q)
                    .sum();
                return Ok(TransportSolution {
                    cost: total,
                    plan: basis,
                    row_dual: u,
                    col_dual: v,
                    pivots,
                });
            };
            pivots += 1;
            if pivots > limit {
                return Err(Error::OracleInconsistency(
                    "transportation simplex exceeded its pivot limit".into(),
                ));
            }
            let cycle = tree_path(&basis, m, n, r, c);
            // cycle[0] shares column c with the entering cell, so it loses
            let mut leave = None;
            let mut theta = None;
            for (pos, &cell) in cycle.iter().enumerate() {
                if pos % 2 == 0 {
                    let q = basis[cell].2;
                    if theta.map_or(true, |t| q < t) {
                        theta = Some(q);
                        leave = Some(cell);
                    }
                }
            }
            let theta = theta.expect("cycle has a losing cell");
            let leave = leave.expect("cycle has a losing cell");
            for (pos, &cell) in cycle.iter().enumerate() {
                if pos % 2 == 0 {
                    basis[cell].2 -= theta;
                } else {
                    basis[cell].2 += theta;
                }
            }
            basis[leave] = (r, c, theta);
        }
    }

    fn duals(&self, basis: &[(usize, usize, F)], m: usize, n: usize) -> (Vec<F>, Vec<F>) {
        let adj = adjacency(basis, m, n);
        let mut u = vec![None; m];
        let mut v = vec![None; n];
        u[0] = Some(F::zero());
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &cell in &adj[node] {
                let (r, c, _) = basis[cell];
                if node < m {
                    if v[c].is_none() {
                        v[c] = Some(self.cost[r][c] - u[r].expect("visited"));
                        queue.push_back(m + c);
                    }
                } else if u[r].is_none() {
                    u[r] = Some(self.cost[r][c] - v[c].expect("visited"));
                    queue.push_back(r);
                }
            }
        }
        (
            u.into_iter().map(|x| x.expect("basis spans rows")).collect(),
            v.into_iter().map(|x| x.expect("basis spans columns")).collect(),
        )
    }
}

/// Node `i < m` is row `i`, node `m + j` is column `j`.
fn adjacency<F>(basis: &[(usize, usize, F)], m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m + n];
    for (cell, &(r, c, _)) in basis.iter().enumerate() {
        adj[r].push(cell);
        adj[m + c].push(cell);
    }
    adj
}

/// Basic cells on the tree path from column `c` back to row `r`, in order
/// starting next to the entering cell `(r, c)`.
fn tree_path<F>(basis: &[(usize, usize, F)], m: usize, n: usize, r: usize, c: usize) -> Vec<usize> {
    let adj = adjacency(basis, m, n);
    let start = m + c;
    let mut via: Vec<Option<usize>> = vec![None; m + n];
    let mut seen = vec![false; m + n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        if node == r {
            break;
        }
        for &cell in &adj[node] {
            let (a, b, _) = basis[cell];
            let other = if node < m { m + b } else { a };
            if !seen[other] {
                seen[other] = true;
                via[other] = Some(cell);
                queue.push_back(other);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = r;
    while node != start {
        let cell = via[node].expect("basis is a spanning tree");
        path.push(cell);
        let (a, b, _) = basis[cell];
        node = if node < m { m + b } else { a };
    }
    path.reverse();
    path
}

fn l1_dist<F: Scalar>(p: &[F], q: &[F]) -> F {
    p.iter().zip(q).map(|(a, b)| (*a - *b).abs()).sum()
}

/// Splits signed demand into the transportation form over `metric`; merges
/// nothing, so coincident points must already be combined by the caller.
fn split<F: Scalar>(
    b: &[F],
    metric: impl Fn(usize, usize) -> F,
) -> Result<Option<TransportationInstance<F>>> {
    let sources: Vec<usize> = (0..b.len()).filter(|&i| b[i] < F::zero()).collect();
    let sinks: Vec<usize> = (0..b.len()).filter(|&i| b[i] > F::zero()).collect();
    if sources.is_empty() && sinks.is_empty() {
        return Ok(None);
    }
    let cost = sources
        .iter()
        .map(|&s| sinks.iter().map(|&t| metric(s, t)).collect())
        .collect();
    TransportationInstance::new(
        sources.iter().map(|&s| -b[s]).collect(),
        sinks.iter().map(|&t| b[t]).collect(),
        cost,
    )
    .map(Some)
}

/// `‖b‖_opt(d)` for an explicit metric `d` given as a full matrix.
pub fn transport_opt<F: Scalar>(metric: &[Vec<F>], b: &[F]) -> Result<F> {
    crate::error::check_dim("metric demand", metric.len(), b.len())?;
    Ok(match split(b, |i, j| metric[i][j])? {
        None => F::zero(),
        Some(inst) => inst.solve()?.cost,
    })
}

fn merged<F: Scalar>(points: &[Vec<F>], b: &[F]) -> (Vec<Vec<F>>, Vec<F>) {
    let mut pts: Vec<Vec<F>> = Vec::new();
    let mut vals: Vec<F> = Vec::new();
    for (p, &v) in points.iter().zip(b) {
        match pts.iter().position(|q| q == p) {
            Some(i) => vals[i] += v,
            None => {
                pts.push(p.clone());
                vals.push(v);
            }
        }
    }
    (pts, vals)
}

fn check_points<F: Scalar>(points: &[Vec<F>], b: &[F], limit: usize) -> Result<()> {
    crate::error::check_dim("emd demand", points.len(), b.len())?;
    if points.len() > limit {
        return Err(Error::BudgetExceeded {
            what: "earth mover's distance",
            size: points.len(),
            limit,
        });
    }
    Ok(())
}

/// Exact ℓ1 earth mover's distance of signed demand `b` on `points`
/// (transportation simplex). Refuses more than [`EMD_POINT_LIMIT`] points.
pub fn emd_l1<F: Scalar>(points: &[Vec<F>], b: &[F]) -> Result<F> {
    emd_l1_with_limit(points, b, EMD_POINT_LIMIT)
}

pub fn emd_l1_with_limit<F: Scalar>(points: &[Vec<F>], b: &[F], limit: usize) -> Result<F> {
    check_points(points, b, limit)?;
    let (pts, vals) = merged(points, b);
    Ok(match split(&vals, |i, j| l1_dist(&pts[i], &pts[j]))? {
        None => F::zero(),
        Some(inst) => inst.solve()?.cost,
    })
}

/// Same value as [`emd_l1`], computed as min-cost flow on the complete
/// bipartite graph between sources and sinks.
pub fn emd_l1_via_mcf<F: Scalar>(points: &[Vec<F>], b: &[F]) -> Result<F> {
    check_points(points, b, EMD_POINT_LIMIT)?;
    let (pts, vals) = merged(points, b);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| !vals[i].is_zero()).collect();
    if keep.is_empty() {
        return Ok(F::zero());
    }
    let mut edges = Vec::new();
    for (a, &i) in keep.iter().enumerate() {
        for (c, &j) in keep.iter().enumerate() {
            if vals[i] < F::zero() && vals[j] > F::zero() {
                edges.push((a, c, l1_dist(&pts[i], &pts[j])));
            }
        }
    }
    let g = LengthGraph::new(keep.len(), &edges)?;
    let demand = DemandVector::new(keep.iter().map(|&i| vals[i]).collect())?;
    Ok(exact_mcf(&g, &demand)?.cost)
}
