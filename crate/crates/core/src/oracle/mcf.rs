use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{cost, lipschitz_constant, DemandVector, Flow, LengthGraph};
use crate::scalar::{dot, l1_norm, Scalar};

pub const MCF_VERTEX_LIMIT: usize = 500;

/// Optimal flow with its certifying potential: `φ` is 1-Lipschitz, every
/// edge carrying flow is tight, and `φ·b = cost`.
#[derive(Debug, Clone)]
pub struct McfSolution<F> {
    pub cost: F,
    pub flow: Flow<F>,
    pub potential: Vec<F>,
    pub augmentations: usize,
}

struct Entry<F> {
    dist: F,
    vertex: usize,
}

impl<F: PartialOrd> PartialEq for Entry<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<F: PartialOrd> Eq for Entry<F> {}
impl<F: PartialOrd> PartialOrd for Entry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: PartialOrd> Ord for Entry<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Flow along `e` in the direction leaving `u`.
fn directed<F: Scalar>(g: &LengthGraph<F>, j: &[F], e: usize, u: usize) -> F {
    if g.tails()[e] == u {
        j[e]
    } else {
        -j[e]
    }
}

/// Successive shortest paths with Dijkstra on reduced costs. The residual
/// arc `u → v` over edge `e` costs `−ℓ(e)` (capacity = flow currently going
/// `v → u`) or `+ℓ(e)` (unbounded) otherwise.
pub fn exact_mcf<F: Scalar>(g: &LengthGraph<F>, b: &DemandVector<F>) -> Result<McfSolution<F>> {
    let n = g.num_vertices();
    if n > MCF_VERTEX_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "exact min-cost flow",
            size: n,
            limit: MCF_VERTEX_LIMIT,
        });
    }
    crate::error::check_dim("mcf demand", n, b.len())?;
    let lengths = g.lengths();
    let tiny = F::from_f64(1e-13).unwrap_or_else(F::zero) * l1_norm(b.values());
    // sources emit |b|, sinks absorb b
    let mut excess: Vec<F> = b.values().iter().map(|&v| -v).collect();
    let mut j = vec![F::zero(); g.num_edges()];
    let mut pi = vec![F::zero(); n];
    let mut augmentations = 0;
    loop {
        let Some(s) = (0..n).find(|&v| excess[v] > tiny) else {
            break;
        };
        let mut dist: Vec<Option<F>> = vec![None; n];
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut done = vec![false; n];
        dist[s] = Some(F::zero());
        let mut heap = BinaryHeap::new();
        heap.push(Entry {
            dist: F::zero(),
            vertex: s,
        });
        while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, e) in g.neighbors(u) {
                let c = if directed(g, &j, e, u) < -tiny {
                    -lengths[e]
                } else {
                    lengths[e]
                };
                // reduced costs are nonnegative up to rounding
                let rc = (c + pi[u] - pi[v]).max_of(F::zero());
                let cand = d + rc;
                if dist[v].map_or(true, |cur| cand < cur) {
                    dist[v] = Some(cand);
                    pred[v] = Some((u, e));
                    heap.push(Entry {
                        dist: cand,
                        vertex: v,
                    });
                }
            }
        }
        let dist: Vec<F> = dist.into_iter().map(|d| d.expect("connected")).collect();
        let t = (0..n)
            .filter(|&v| excess[v] < -tiny)
            .min_by(|&a, &c| dist[a].partial_cmp(&dist[c]).unwrap_or(Ordering::Equal))
            .ok_or_else(|| Error::OracleInconsistency("supply without matching demand".into()))?;
        for v in 0..n {
            pi[v] += dist[v];
        }
        let mut amount = excess[s].min_of(-excess[t]);
        let mut v = t;
        while let Some((u, e)) = pred[v] {
            let flowing = directed(g, &j, e, u);
            if flowing < -tiny {
                amount = amount.min_of(-flowing);
            }
            v = u;
        }
        let mut v = t;
        while let Some((u, e)) = pred[v] {
            if g.tails()[e] == u {
                j[e] += amount;
            } else {
                j[e] -= amount;
            }
            v = u;
        }
        excess[s] -= amount;
        excess[t] += amount;
        augmentations += 1;
    }
    let total = cost(g, &j);
    let lip = lipschitz_constant(g, &pi);
    let slack = F::from_f64(1e-9).unwrap_or_else(F::zero);
    if lip > F::one() + slack {
        return Err(Error::OracleInconsistency(format!(
            "optimal potential has Lipschitz constant {lip:?}"
        )));
    }
    let dual = dot(&pi, b.values());
    if (total - dual).abs() > slack * total.max_of(F::one()) {
        return Err(Error::OracleInconsistency(format!(
            "primal {total:?} and dual {dual:?} disagree"
        )));
    }
    Ok(McfSolution {
        cost: total,
        flow: Flow(j),
        potential: pi,
        augmentations,
    })
}
