use crate::error::{Error, Result};
use crate::scalar::{l1_norm, Scalar};

/// Connected undirected graph with positive edge lengths. Each edge carries
/// an arbitrary but fixed orientation `tail → head`; parallel edges are
/// allowed, self-loops are not.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthGraph<F> {
    n: usize,
    tails: Vec<usize>,
    heads: Vec<usize>,
    lengths: Vec<F>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl<F: Scalar> LengthGraph<F> {
    /// `edges` are `(tail, head, length)` with 0-based vertex ids.
    pub fn new(n: usize, edges: &[(usize, usize, F)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut tails = Vec::with_capacity(edges.len());
        let mut heads = Vec::with_capacity(edges.len());
        let mut lengths = Vec::with_capacity(edges.len());
        for (e, &(u, v, l)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {e} endpoint out of range ({u}, {v}) with n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {e} is a self-loop at {u}")));
            }
            if !(l > F::zero()) {
                return Err(Error::InvalidGraph(format!(
                    "edge {e} has non-positive length {l:?}"
                )));
            }
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
            tails.push(u);
            heads.push(v);
            lengths.push(l);
        }
        let g = LengthGraph {
            n,
            tails,
            heads,
            lengths,
            adjacency,
        };
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        Ok(g)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.tails.len()
    }

    /// `(tail, head, length)`
    pub fn edge(&self, e: usize) -> (usize, usize, F) {
        (self.tails[e], self.heads[e], self.lengths[e])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, F)> + '_ {
        (0..self.num_edges()).map(|e| self.edge(e))
    }

    pub fn tails(&self) -> &[usize] {
        &self.tails
    }

    pub fn heads(&self) -> &[usize] {
        &self.heads
    }

    pub fn lengths(&self) -> &[F] {
        &self.lengths
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }
}

/// Vertex demands; the total must vanish for the demand to be routable.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandVector<F>(Vec<F>);

impl<F: Scalar> DemandVector<F> {
    /// Rejects totals larger than `1e-9·‖b‖₁`.
    pub fn new(values: Vec<F>) -> Result<Self> {
        let total: F = values.iter().copied().sum();
        let tol = F::from_f64(1e-9).unwrap_or_else(F::zero) * l1_norm(&values);
        if total.abs() > tol {
            return Err(Error::InfeasibleDemand {
                total: total.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        Ok(DemandVector(values))
    }

    /// Unit dipole: `−1` at `source`, `+1` at `sink`.
    pub fn dipole(n: usize, source: usize, sink: usize) -> Self {
        let mut b = vec![F::zero(); n];
        b[source] -= F::one();
        b[sink] += F::one();
        DemandVector(b)
    }

    pub fn values(&self) -> &[F] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<F> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1(&self) -> F {
        l1_norm(&self.0)
    }
}

impl<F> AsRef<[F]> for DemandVector<F> {
    fn as_ref(&self) -> &[F] {
        &self.0
    }
}

/// Edge flow; the sign is relative to the edge orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow<F>(pub Vec<F>);

impl<F: Scalar> Flow<F> {
    pub fn zeros(m: usize) -> Self {
        Flow(vec![F::zero(); m])
    }

    pub fn values(&self) -> &[F] {
        &self.0
    }

    pub fn add_assign(&mut self, other: &Flow<F>) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += *b;
        }
    }
}

/// Vertex potential with a certified Lipschitz constant with respect to the
/// edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPotential<F> {
    pub phi: Vec<F>,
    pub lipschitz: F,
}
